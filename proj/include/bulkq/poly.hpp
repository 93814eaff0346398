#pragma once

#include <complex>
#include <vector>

#include "bulkq/errors.hpp"

namespace bulkq {

using cplx = std::complex<double>;

// Hard cap on intermediate polynomial degrees. Compositions can blow up the
// degree multiplicatively; exceeding the cap raises degree_overflow instead of
// silently grinding away.
inline constexpr int kDegreeCap = 4096;

// Dense real polynomial, coefficients in ascending powers. The zero
// polynomial is represented by an empty coefficient vector.
class Polynomial {
public:
    Polynomial() = default;
    // Strips exact-zero tails only. Call trim() to drop cancellation noise;
    // long factor products legitimately carry very small leading terms.
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
    static Polynomial constant(double v) { return Polynomial({v}); }
    static Polynomial identity() { return Polynomial({0.0, 1.0}); } // x

    const std::vector<double>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero poly
    double operator[](int k) const { return (k >= 0 && k < (int)c_.size()) ? c_[k] : 0.0; }
    double& at(int k) { return c_[k]; }
    double l1_norm() const;

    // Drops trailing coefficients that are negligible relative to the largest
    // coefficient (keeps representations canonical after cancellations).
    void trim(double rel_eps = 1e-14);

    template <class T>
    T eval(const T& x) const {
        T acc{};
        for (int k = degree(); k >= 0; --k) acc = acc * x + T(c_[k]);
        return acc;
    }

    Polynomial derivative() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return mul(a, b); }

    static Polynomial mul(const Polynomial& a, const Polynomial& b);

    // this(x) * x^k
    Polynomial shifted_up(int k) const;

    // Substitute polynomial `inner` for the variable: this(inner(x)).
    Polynomial compose(const Polynomial& inner) const;

    // Taylor coefficients of this polynomial about `center`, first `count`
    // terms (repeated synthetic division; works for real or complex centers).
    template <class T>
    std::vector<T> taylor_at(const T& center, int count) const;

    // Quotient/remainder of descending-power long division by a monic-or-not
    // divisor. Stable when the divisor's roots lie inside the unit disk.
    static void divmod(const Polynomial& num, const Polynomial& den, Polynomial& quot,
                       Polynomial& rem);

    // First n coefficients of the power series num/den around the origin.
    // Requires den(0) != 0.
    static std::vector<double> series_divide(const Polynomial& num, const Polynomial& den, int n);

private:
    std::vector<double> c_;
};

// Real quadratic/linear factor product built from a set of complex roots that
// come in conjugate pairs (imaginary parts below `imag_tol` are treated as
// real). Used to assemble deflation divisors such as prod (x - alpha).
Polynomial poly_from_roots(const std::vector<cplx>& roots, double leading = 1.0,
                           double imag_tol = 1e-9);

// ---------------------------------------------------------------------------
// Truncated Taylor series ("jet") arithmetic with runtime order. T is double
// or std::complex<double>. Series are aligned to the same length before ops.
// ---------------------------------------------------------------------------
template <class T>
class TaylorSeries {
public:
    TaylorSeries() = default;
    explicit TaylorSeries(std::vector<T> c) : c_(std::move(c)) {}
    static TaylorSeries constant(const T& v, int n) {
        std::vector<T> c(n, T{});
        if (n > 0) c[0] = v;
        return TaylorSeries(std::move(c));
    }
    // center + u, as a jet of length n
    static TaylorSeries variable(const T& center, int n) {
        std::vector<T> c(n, T{});
        if (n > 0) c[0] = center;
        if (n > 1) c[1] = T(1);
        return TaylorSeries(std::move(c));
    }

    int size() const { return static_cast<int>(c_.size()); }
    const T& operator[](int k) const { return c_[k]; }
    T& operator[](int k) { return c_[k]; }
    const std::vector<T>& coeffs() const { return c_; }

    TaylorSeries& operator+=(const TaylorSeries& o) {
        if (o.size() > size()) c_.resize(o.size(), T{});
        for (int k = 0; k < o.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    TaylorSeries& operator-=(const TaylorSeries& o) {
        if (o.size() > size()) c_.resize(o.size(), T{});
        for (int k = 0; k < o.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
    friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
    friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
        int n = std::max(a.size(), b.size());
        std::vector<T> r(n, T{});
        for (int i = 0; i < a.size() && i < n; ++i) {
            if (a.c_[i] == T{}) continue;
            for (int j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return TaylorSeries(std::move(r));
    }
    friend TaylorSeries operator*(TaylorSeries a, const T& s) {
        for (auto& v : a.c_) v *= s;
        return a;
    }

    // Series division; requires the divisor's constant term to be nonzero.
    friend TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b) {
        int n = std::max(a.size(), b.size());
        if (b.size() == 0 || b.c_[0] == T{})
            raise(errc::pole_evaluation, "series division by zero constant term");
        std::vector<T> r(n, T{});
        for (int k = 0; k < n; ++k) {
            T acc = (k < a.size()) ? a.c_[k] : T{};
            for (int j = 1; j <= k && j < b.size(); ++j) acc -= b.c_[j] * r[k - j];
            r[k] = acc / b.c_[0];
        }
        return TaylorSeries(std::move(r));
    }

    // Removes `count` leading coefficients, asserting they are negligible
    // relative to the series scale. Used for L'Hospital-style 0/0 quotients.
    TaylorSeries deflated(int count, double rel_tol = 1e-6) const {
        using std::abs;
        double scale = 0.0;
        for (const auto& v : c_) scale = std::max(scale, (double)abs(v));
        for (int k = 0; k < count && k < size(); ++k) {
            if (scale > 0.0 && (double)abs(c_[k]) > rel_tol * scale)
                raise(errc::non_cancellation, "series deflation: leading term not negligible");
        }
        std::vector<T> r;
        for (int k = count; k < size(); ++k) r.push_back(c_[k]);
        return TaylorSeries(std::move(r));
    }

private:
    std::vector<T> c_;
};

template <class T>
std::vector<T> Polynomial::taylor_at(const T& center, int count) const {
    // Repeated synthetic division by (x - center).
    std::vector<T> work(c_.begin(), c_.end());
    std::vector<T> out;
    out.reserve(count);
    int d = degree();
    for (int j = 0; j < count; ++j) {
        if (d - j < 0) {
            out.push_back(T{});
            continue;
        }
        T carry{};
        for (int k = d - j; k >= 0; --k) {
            T tmp = work[k] + carry * center;
            work[k] = tmp;
            carry = tmp;
        }
        out.push_back(work[0]);
        // shift: quotient now occupies work[1..]; reuse in place
        work.erase(work.begin());
    }
    return out;
}

template <class T>
TaylorSeries<T> poly_jet(const Polynomial& p, const T& center, int order) {
    return TaylorSeries<T>(p.taylor_at(center, order));
}

} // namespace bulkq
