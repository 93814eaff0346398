#include "bulkq/rational.hpp"

#include <cmath>

namespace bulkq {

namespace {

// Number of factorial multipliers needed when converting jets to derivatives.
template <class T>
std::vector<T> jet_to_derivatives(const TaylorSeries<T>& s) {
    std::vector<T> out(s.size());
    double fact = 1.0;
    for (int k = 0; k < s.size(); ++k) {
        if (k > 0) fact *= k;
        out[k] = s[k] * T(fact);
    }
    return out;
}

// Faddeev-LeVerrier: char poly coefficients a_k of det(sI - T) and the
// auxiliary matrices M_k with (sI - T)^{-1} = sum_k M_k s^{nu-1-k} / p(s).
struct Faddeev {
    std::vector<double> a;                           // a_0 = 1, a_1, ..., a_nu
    std::vector<std::vector<std::vector<double>>> M; // M_0..M_{nu-1}
};

Faddeev faddeev_leverrier(const std::vector<std::vector<double>>& T) {
    int nu = static_cast<int>(T.size());
    auto matmul = [&](const std::vector<std::vector<double>>& A,
                      const std::vector<std::vector<double>>& B) {
        std::vector<std::vector<double>> C(nu, std::vector<double>(nu, 0.0));
        for (int i = 0; i < nu; ++i)
            for (int k = 0; k < nu; ++k) {
                double aik = A[i][k];
                if (aik == 0.0) continue;
                for (int j = 0; j < nu; ++j) C[i][j] += aik * B[k][j];
            }
        return C;
    };
    auto trace = [&](const std::vector<std::vector<double>>& A) {
        double t = 0.0;
        for (int i = 0; i < nu; ++i) t += A[i][i];
        return t;
    };

    Faddeev out;
    out.a.assign(nu + 1, 0.0);
    out.a[0] = 1.0;
    std::vector<std::vector<double>> Mk(nu, std::vector<double>(nu, 0.0));
    for (int i = 0; i < nu; ++i) Mk[i][i] = 1.0; // M_0 = I
    out.M.push_back(Mk);
    for (int k = 1; k <= nu; ++k) {
        auto TM = matmul(T, Mk);
        double ak = -trace(TM) / k;
        out.a[k] = ak;
        if (k == nu) break;
        Mk = TM;
        for (int i = 0; i < nu; ++i) Mk[i][i] += ak;
        out.M.push_back(Mk);
    }
    return out;
}

} // namespace

std::vector<cplx> RationalFunction::derivatives(const cplx& point, int m) const {
    cplx d = den.eval(point);
    double scale = 0.0;
    for (double c : den.coeffs()) scale = std::max(scale, std::abs(c));
    if (std::abs(d) < 1e-12 * std::max(1.0, scale))
        raise(errc::pole_evaluation, "derivative evaluation at or near a pole");
    return jet_to_derivatives(jet(point, m + 1));
}

std::vector<double> RationalFunction::derivatives(double point, int m) const {
    double d = den.eval(point);
    double scale = 0.0;
    for (double c : den.coeffs()) scale = std::max(scale, std::abs(c));
    if (std::abs(d) < 1e-12 * std::max(1.0, scale))
        raise(errc::pole_evaluation, "derivative evaluation at or near a pole");
    return jet_to_derivatives(jet(point, m + 1));
}

Polynomial arrival_slot_pgf(const BatchArrivalSpec& arrival) {
    arrival.validate();
    std::vector<double> c(arrival.gmax() + 1, 0.0);
    c[0] = 1.0 - arrival.lambda;
    for (int m = 1; m <= arrival.gmax(); ++m) c[m] = arrival.lambda * arrival.g_at(m);
    return Polynomial(std::move(c));
}

RationalFunction pgf_rational(const ServiceTimeDist& dist) {
    dist.validate();
    return std::visit(
        [](const auto& d) -> RationalFunction {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GeometricDist>) {
                // p z / (1 - (1-p) z)
                return {Polynomial({0.0, d.p}), Polynomial({1.0, -(1.0 - d.p)})};
            } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                // (mu z)^r / (1 - (1-mu) z)^r
                Polynomial num = Polynomial::constant(1.0);
                Polynomial den = Polynomial::constant(1.0);
                Polynomial nbase({0.0, d.mu});
                Polynomial dbase({1.0, -(1.0 - d.mu)});
                for (int k = 0; k < d.r; ++k) {
                    num = num * nbase;
                    den = den * dbase;
                }
                return {num, den};
            } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                // z * beta (I - zT)^{-1} eta with eta = (I - T) 1.
                // det(I - zT) = z^nu p(1/z) = sum_k a_k z^k and
                // beta (I - zT)^{-1} eta = sum_k (beta M_k eta) z^k / det(I - zT).
                int nu = d.order();
                auto fl = faddeev_leverrier(d.T);
                std::vector<double> eta(nu, 0.0);
                for (int i = 0; i < nu; ++i) {
                    double rsum = 0.0;
                    for (int j = 0; j < nu; ++j) rsum += d.T[i][j];
                    eta[i] = 1.0 - rsum;
                }
                std::vector<double> num(nu + 1, 0.0);
                for (int k = 0; k < nu; ++k) {
                    double v = 0.0;
                    for (int i = 0; i < nu; ++i)
                        for (int j = 0; j < nu; ++j) v += d.beta[i] * fl.M[k][i][j] * eta[j];
                    num[k + 1] = v; // extra z factor in front
                }
                return {Polynomial(std::move(num)), Polynomial(fl.a)};
            } else if constexpr (std::is_same_v<D, DeterministicDist>) {
                std::vector<double> c(d.d + 1, 0.0);
                c[d.d] = 1.0;
                return RationalFunction::from_poly(Polynomial(std::move(c)));
            } else {
                std::vector<double> c(d.pmf.size() + 1, 0.0);
                for (size_t n = 0; n < d.pmf.size(); ++n) c[n + 1] = d.pmf[n];
                return RationalFunction::from_poly(Polynomial(std::move(c)));
            }
        },
        dist.law);
}

RationalFunction compose(const RationalFunction& S, const Polynomial& A) {
    S.check_valid();
    RationalFunction K{S.num.compose(A), S.den.compose(A)};
    K.check_valid();
    K.normalize_at_origin();
    double at_one = K.eval(1.0);
    if (std::abs(at_one - 1.0) > 1e-9)
        raise(errc::bad_input, "composed PGF fails K(1) = 1 by " + std::to_string(at_one - 1.0));
    return K;
}

} // namespace bulkq
