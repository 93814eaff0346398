#include "bulkq/poly.hpp"

#include <algorithm>
#include <cmath>

namespace bulkq {

const char* errc_name(errc c) {
    switch (c) {
        case errc::non_stochastic: return "NonStochastic";
        case errc::unstable: return "Unstable";
        case errc::bad_threshold: return "BadThreshold";
        case errc::out_of_range: return "OutOfRange";
        case errc::unsupported_order: return "UnsupportedOrder";
        case errc::degree_overflow: return "DegreeOverflow";
        case errc::pole_evaluation: return "PoleEvaluation";
        case errc::root_count_mismatch: return "RootCountMismatch";
        case errc::ill_conditioned: return "IllConditioned";
        case errc::non_cancellation: return "NonCancellation";
        case errc::singular_system: return "SingularSystem";
        case errc::negative_probability: return "NegativeProbability";
        case errc::degenerate_vacation: return "DegenerateVacation";
        case errc::mass_leak: return "MassLeak";
        case errc::mixed_config: return "MixedConfig";
        case errc::bad_input: return "BadInput";
    }
    return "Error";
}

double Polynomial::l1_norm() const {
    double s = 0.0;
    for (double v : c_) s += std::abs(v);
    return s;
}

void Polynomial::trim(double rel_eps) {
    double scale = 0.0;
    for (double v : c_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
        c_.clear();
        return;
    }
    while (!c_.empty() && std::abs(c_.back()) <= rel_eps * scale) c_.pop_back();
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        c_.clear();
        return *this;
    }
    for (double& v : c_) v *= s;
    return *this;
}

Polynomial Polynomial::mul(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    int la = (int)a.c_.size(), lb = (int)b.c_.size();
    if (la + lb - 2 > kDegreeCap)
        raise(errc::degree_overflow, "product degree " + std::to_string(la + lb - 2) +
                                         " exceeds cap " + std::to_string(kDegreeCap));
    std::vector<double> r(la + lb - 1, 0.0);
    for (int i = 0; i < la; ++i) {
        double ai = a.c_[i];
        if (ai == 0.0) continue;
        for (int j = 0; j < lb; ++j) r[i + j] += ai * b.c_[j];
    }
    Polynomial p(std::move(r));
    return p;
}

Polynomial Polynomial::shifted_up(int k) const {
    if (is_zero()) return Polynomial();
    if (degree() + k > kDegreeCap) raise(errc::degree_overflow, "shift exceeds degree cap");
    std::vector<double> r(c_.size() + k, 0.0);
    std::copy(c_.begin(), c_.end(), r.begin() + k);
    return Polynomial(std::move(r));
}

Polynomial Polynomial::compose(const Polynomial& inner) const {
    // Horner with polynomial coefficients.
    Polynomial acc;
    for (int k = degree(); k >= 0; --k) {
        acc = mul(acc, inner);
        acc += Polynomial::constant(c_[k]);
    }
    return acc;
}

void Polynomial::divmod(const Polynomial& num, const Polynomial& den, Polynomial& quot,
                        Polynomial& rem) {
    if (den.is_zero()) raise(errc::pole_evaluation, "division by zero polynomial");
    std::vector<double> r = num.c_;
    int dn = num.degree(), dd = den.degree();
    if (dn < dd) {
        quot = Polynomial();
        rem = num;
        return;
    }
    std::vector<double> q(dn - dd + 1, 0.0);
    double lead = den.c_.back();
    for (int k = dn; k >= dd; --k) {
        double f = r[k] / lead;
        q[k - dd] = f;
        if (f == 0.0) continue;
        for (int j = 0; j <= dd; ++j) r[k - dd + j] -= f * den.c_[j];
        r[k] = 0.0;
    }
    r.resize(dd > 0 ? dd : 0);
    quot = Polynomial(std::move(q));
    rem = Polynomial(std::move(r));
}

std::vector<double> Polynomial::series_divide(const Polynomial& num, const Polynomial& den,
                                              int n) {
    if (den.is_zero() || den[0] == 0.0)
        raise(errc::pole_evaluation, "series expansion requires den(0) != 0");
    // extended-precision accumulation: these series feed coefficient-level
    // cross-checks at tight absolute tolerances
    std::vector<long double> out(n, 0.0L);
    long double d0 = den[0];
    int dd = den.degree();
    for (int k = 0; k < n; ++k) {
        long double acc = num[k];
        for (int j = 1; j <= std::min(k, dd); ++j) acc -= (long double)den[j] * out[k - j];
        out[k] = acc / d0;
    }
    return std::vector<double>(out.begin(), out.end());
}

Polynomial poly_from_roots(const std::vector<cplx>& roots, double leading, double imag_tol) {
    Polynomial p = Polynomial::constant(leading);
    std::vector<cplx> pending;
    for (const cplx& r : roots) {
        if (std::abs(r.imag()) <= imag_tol * std::max(1.0, std::abs(r))) {
            p = Polynomial::mul(p, Polynomial({-r.real(), 1.0}));
        } else {
            // match with a previously seen conjugate
            auto it = std::find_if(pending.begin(), pending.end(), [&](const cplx& q) {
                return std::abs(std::conj(q) - r) <= 1e-6 * std::max(1.0, std::abs(r));
            });
            if (it != pending.end()) {
                p = Polynomial::mul(p, Polynomial({std::norm(r), -2.0 * r.real(), 1.0}));
                pending.erase(it);
            } else {
                pending.push_back(r);
            }
        }
    }
    if (!pending.empty())
        raise(errc::ill_conditioned, "complex roots without conjugate partners");
    return p;
}

} // namespace bulkq
