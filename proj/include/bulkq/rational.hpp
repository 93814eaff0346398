#pragma once

#include "bulkq/model.hpp"
#include "bulkq/poly.hpp"

namespace bulkq {

// Rational function num/den with den(0) != 0 so a power series at the origin
// exists. Composed PGFs are normalized to den(0) = 1 to keep coefficient
// magnitudes balanced in long products.
struct RationalFunction {
    Polynomial num;
    Polynomial den = Polynomial::constant(1.0);

    static RationalFunction from_poly(Polynomial p) { return {std::move(p), Polynomial::constant(1.0)}; }

    void check_valid() const {
        if (den.is_zero()) raise(errc::pole_evaluation, "zero denominator");
        if (den[0] == 0.0) raise(errc::pole_evaluation, "den(0) = 0: no series at origin");
    }

    // Scales num and den so that den(0) == 1.
    void normalize_at_origin() {
        check_valid();
        double d0 = den[0];
        num *= 1.0 / d0;
        den *= 1.0 / d0;
    }

    template <class T>
    T eval(const T& x) const {
        T d = den.eval(x);
        if (std::abs(d) < 1e-300) raise(errc::pole_evaluation, "evaluation at a pole");
        return num.eval(x) / d;
    }

    // R(x), R'(x), ..., R^(m)(x) at a non-pole point.
    std::vector<cplx> derivatives(const cplx& point, int m) const;
    std::vector<double> derivatives(double point, int m) const;

    // Taylor jet of the function about `center` (center must not be a pole).
    template <class T>
    TaylorSeries<T> jet(const T& center, int order) const {
        auto n = poly_jet(num, center, order);
        auto d = poly_jet(den, center, order);
        return n / d;
    }

    // First n Taylor coefficients at the origin.
    std::vector<double> series(int n) const { return Polynomial::series_divide(num, den, n); }
};

// A(x) = lambda_bar + lambda * G(x): PGF of the per-slot arrival count.
Polynomial arrival_slot_pgf(const BatchArrivalSpec& arrival);

// Exact rational PGF (in z) of a service/vacation-time law.
RationalFunction pgf_rational(const ServiceTimeDist& dist);

// K(x) = S(A(x)) by polynomial substitution into num and den of S.
// Result is normalized to den(0) = 1 and sanity-checked at x = 1.
RationalFunction compose(const RationalFunction& S, const Polynomial& A);

} // namespace bulkq
