#include "bulkq/pfe.hpp"

#include <cmath>

namespace bulkq {

namespace {

// sum_k |c_k| |x|^k : the natural scale for "Lambda(alpha) is negligible".
double eval_scale(const Polynomial& p, double absx) {
    double s = 0.0, pw = 1.0;
    for (double c : p.coeffs()) {
        s += std::abs(c) * pw;
        pw *= absx;
    }
    return s;
}

// C(m + n, m) for small m, arbitrary n >= 0.
double binom_shifted(int m, long n) {
    double v = 1.0;
    for (int j = 1; j <= m; ++j) v *= static_cast<double>(n + j) / static_cast<double>(j);
    return v;
}

} // namespace

ReducedRational deflate_unit_roots(const Polynomial& lambda, const Polynomial& dpoly,
                                   const RootSet& roots, double eps_cancel) {
    std::vector<cplx> inside;
    for (const auto& r : roots.roots) {
        if (r.region == RootRegion::outside) continue;
        for (int k = 0; k < r.multiplicity; ++k) inside.push_back(r.value);
        double lam_at = std::abs(lambda.eval(r.value));
        double scale = eval_scale(lambda, std::abs(r.value));
        if (scale > 0.0 && lam_at > eps_cancel * scale)
            raise(errc::non_cancellation,
                  "numerator does not vanish at in-disk root (|Lambda| / scale = " +
                      std::to_string(lam_at / scale) + ")");
    }
    if (inside.empty()) return {lambda, dpoly};

    Polynomial p_in = poly_from_roots(inside);
    Polynomial lq, lr, dq, dr;
    Polynomial::divmod(lambda, p_in, lq, lr);
    Polynomial::divmod(dpoly, p_in, dq, dr);
    if (!lr.is_zero() && lr.l1_norm() > 1e-7 * std::max(1.0, lambda.l1_norm()))
        raise(errc::non_cancellation, "in-disk deflation of numerator left a remainder");
    if (!dr.is_zero() && dr.l1_norm() > 1e-7 * std::max(1.0, dpoly.l1_norm()))
        raise(errc::ill_conditioned, "in-disk roots inconsistent with denominator");
    return {lq, dq};
}

double PartialFractionExpansion::coeff(int n) const { return coeff_complex(n).real(); }

cplx PartialFractionExpansion::coeff_complex(int n) const {
    cplx acc{};
    if (n <= quotient.degree()) acc += quotient[n];
    for (const auto& t : simple) acc += t.residue / std::pow(t.pole, double(n + 1));
    for (const auto& t : repeated) {
        int pi = t.multiplicity;
        for (int i = 1; i <= pi; ++i) {
            int m = pi - i;
            acc += binom_shifted(m, n) * t.zeta[i - 1] / std::pow(t.pole, double(m + 1 + n));
        }
    }
    return acc;
}

std::vector<double> PartialFractionExpansion::coeffs(int count) const {
    std::vector<cplx> acc(count, cplx{});
    for (int n = 0; n <= quotient.degree() && n < count; ++n) acc[n] += quotient[n];
    for (const auto& t : simple) {
        cplx inv = 1.0 / t.pole;
        cplx pw = inv; // 1/alpha^(n+1) at n = 0
        for (int n = 0; n < count; ++n) {
            acc[n] += t.residue * pw;
            pw *= inv;
        }
    }
    for (const auto& t : repeated) {
        int pi = t.multiplicity;
        cplx inv = 1.0 / t.pole;
        for (int i = 1; i <= pi; ++i) {
            int m = pi - i;
            cplx val = t.zeta[i - 1] * std::pow(inv, double(m + 1)); // n = 0 term, binom = 1
            for (int n = 0; n < count; ++n) {
                acc[n] += val;
                val *= inv * (static_cast<double>(n + 1 + m) / static_cast<double>(n + 1));
            }
        }
    }
    std::vector<double> out(count);
    for (int n = 0; n < count; ++n) out[n] = acc[n].real();
    return out;
}

double PartialFractionExpansion::total_sum() const {
    cplx acc = quotient.eval(cplx(1.0, 0.0));
    for (const auto& t : simple) acc += t.residue / (t.pole - 1.0);
    for (const auto& t : repeated) {
        int pi = t.multiplicity;
        for (int i = 1; i <= pi; ++i)
            acc += t.zeta[i - 1] / std::pow(t.pole - 1.0, double(pi - i + 1));
    }
    return acc.real();
}

double PartialFractionExpansion::tail_sum_after(int N) const {
    double prefix = 0.0;
    for (int n = 0; n <= N; ++n) prefix += coeff(n);
    return total_sum() - prefix;
}

cplx PartialFractionExpansion::eval(const cplx& x) const {
    cplx acc = quotient.eval(x);
    for (const auto& t : simple) acc += t.residue / (t.pole - x);
    for (const auto& t : repeated) {
        int pi = t.multiplicity;
        for (int i = 1; i <= pi; ++i)
            acc += t.zeta[i - 1] / std::pow(t.pole - x, double(pi - i + 1));
    }
    return acc;
}

PartialFractionExpansion partial_fractions(const Polynomial& lambda, const Polynomial& dpoly,
                                           const RootSet& roots, double eps_cancel) {
    if (roots.total_multiplicity() != dpoly.degree())
        raise(errc::root_count_mismatch,
              "root multiplicities (" + std::to_string(roots.total_multiplicity()) +
                  ") do not cover deg D = " + std::to_string(dpoly.degree()));

    auto [lam, den] = deflate_unit_roots(lambda, dpoly, roots, eps_cancel);

    PartialFractionExpansion out;
    if (den.degree() == 0) {
        // no poles left: pure polynomial
        out.quotient = lam * (1.0 / den[0]);
        return out;
    }
    if (lam.degree() >= den.degree()) {
        Polynomial q, r;
        Polynomial::divmod(lam, den, q, r);
        out.quotient = q;
    }

    Polynomial dden = den.derivative();
    for (const auto& rec : roots.roots) {
        if (rec.region != RootRegion::outside) continue;
        if (rec.multiplicity == 1) {
            cplx num = lam.eval(rec.value);
            cplx dp = dden.eval(rec.value);
            if (std::abs(dp) == 0.0)
                raise(errc::ill_conditioned, "vanishing D' at a simple pole");
            out.simple.push_back({rec.value, -num / dp});
        } else {
            int pi = rec.multiplicity;
            int order = 2 * pi;
            auto dsh = den.taylor_at(rec.value, order);
            auto lsh = lam.taylor_at(rec.value, pi);
            double scale = eval_scale(den, std::abs(rec.value));
            for (int j = 0; j < pi; ++j) {
                if (std::abs(dsh[j]) > 1e-6 * std::max(scale, 1e-300))
                    raise(errc::ill_conditioned,
                          "pole multiplicity inconsistent with denominator Taylor data");
            }
            // D = (x - beta)^pi * E1; v = Lambda/E1 around beta.
            std::vector<cplx> e1(dsh.begin() + pi, dsh.end());
            TaylorSeries<cplx> v = TaylorSeries<cplx>(lsh) / TaylorSeries<cplx>(std::move(e1));
            PartialFractionExpansion::RepeatedTerm term;
            term.pole = rec.value;
            term.multiplicity = pi;
            term.zeta.resize(pi);
            for (int i = 1; i <= pi; ++i) {
                double sign = ((pi - i + 1) % 2 == 0) ? 1.0 : -1.0;
                term.zeta[i - 1] = sign * v[i - 1];
            }
            out.repeated.push_back(std::move(term));
        }
    }
    return out;
}

std::vector<double> deflated_series(const Polynomial& lambda, const Polynomial& dpoly,
                                    const RootSet& roots, int n, double eps_cancel) {
    auto [lam, den] = deflate_unit_roots(lambda, dpoly, roots, eps_cancel);
    return Polynomial::series_divide(lam, den, n);
}

// ---------------------------------------------------------------------------
// factored form
//
// Residues live on heavily cancelling sums of factor products, so the
// pole-local arithmetic runs in extended precision.
// ---------------------------------------------------------------------------

using lcplx = std::complex<long double>;

namespace {

lcplx lpow(const lcplx& x, int k) {
    lcplx acc = 1.0L;
    for (int i = 0; i < k; ++i) acc *= x;
    return acc;
}

lcplx leval(const Polynomial& p, const lcplx& x) {
    lcplx acc{};
    for (int k = p.degree(); k >= 0; --k) acc = acc * x + lcplx((long double)p[k]);
    return acc;
}

} // namespace

cplx FactoredRational::num_eval(const cplx& x) const {
    lcplx lx(x.real(), x.imag());
    lcplx acc{};
    for (const auto& t : num_terms) {
        lcplx v = lcplx((long double)t.weight) * lpow(lx, t.xpow);
        for (const auto& p : t.parts) {
            lcplx av = leval(atoms[p.atom], lx);
            for (int e = 0; e < p.exp; ++e) v *= av;
        }
        acc += v;
    }
    return cplx((double)acc.real(), (double)acc.imag());
}

double FactoredRational::num_eval_scale(const cplx& x) const {
    double acc = 0.0;
    for (const auto& t : num_terms) {
        double v = std::abs(t.weight) * std::pow(std::abs(x), double(t.xpow));
        for (const auto& p : t.parts) {
            double av = std::abs(atoms[p.atom].eval(x));
            for (int e = 0; e < p.exp; ++e) v *= av;
        }
        acc += v;
    }
    return acc;
}

cplx FactoredRational::den_eval(const cplx& x) const {
    cplx v = den.weight * std::pow(x, double(den.xpow));
    for (const auto& p : den.parts) {
        cplx av = atoms[p.atom].eval(x);
        for (int e = 0; e < p.exp; ++e) v *= av;
    }
    return v;
}

TaylorSeries<lcplx> FactoredRational::num_series(const cplx& center, int order) const {
    lcplx c(center.real(), center.imag());
    TaylorSeries<lcplx> acc = TaylorSeries<lcplx>::constant(lcplx{}, order);
    for (const auto& t : num_terms) {
        TaylorSeries<lcplx> v = TaylorSeries<lcplx>::constant(lcplx((long double)t.weight), order);
        if (t.xpow > 0) {
            // (center + u)^xpow via repeated multiply (small powers)
            auto xs = TaylorSeries<lcplx>::variable(c, order);
            for (int e = 0; e < t.xpow; ++e) v = v * xs;
        }
        for (const auto& p : t.parts) {
            auto as = TaylorSeries<lcplx>(atoms[p.atom].taylor_at(c, order));
            for (int e = 0; e < p.exp; ++e) v = v * as;
        }
        acc += v;
    }
    return acc;
}

Polynomial FactoredRational::num_expand() const {
    Polynomial acc;
    for (const auto& t : num_terms) {
        Polynomial v = Polynomial::constant(t.weight);
        for (const auto& p : t.parts)
            for (int e = 0; e < p.exp; ++e) v = v * atoms[p.atom];
        acc += v.shifted_up(t.xpow);
    }
    return acc;
}

Polynomial FactoredRational::den_expand() const {
    Polynomial v = Polynomial::constant(den.weight);
    for (const auto& p : den.parts)
        for (int e = 0; e < p.exp; ++e) v = v * atoms[p.atom];
    return v.shifted_up(den.xpow);
}

PartialFractionExpansion partial_fractions_factored(const FactoredRational& fr,
                                                    const RootSet& roots, double eps_cancel) {
    Polynomial lam_exp = fr.num_expand();
    Polynomial den_exp = fr.den_expand();
    if (roots.total_multiplicity() != den_exp.degree())
        raise(errc::root_count_mismatch,
              "pole multiplicities (" + std::to_string(roots.total_multiplicity()) +
                  ") do not cover deg D = " + std::to_string(den_exp.degree()));

    // structured cancellation check at in-disk zeros
    for (const auto& rec : roots.roots) {
        if (rec.region == RootRegion::outside) continue;
        double val = std::abs(fr.num_eval(rec.value));
        double scale = fr.num_eval_scale(rec.value);
        if (scale > 0.0 && val > eps_cancel * scale)
            raise(errc::non_cancellation,
                  "numerator does not vanish at in-disk root (ratio " +
                      std::to_string(val / scale) + ")");
    }

    PartialFractionExpansion out;
    // quotient from the deflated expansion when deg num >= deg den
    {
        auto red = deflate_unit_roots(lam_exp, den_exp, roots, eps_cancel);
        if (red.num.degree() >= red.den.degree() && red.den.degree() >= 0 &&
            !red.den.is_zero()) {
            Polynomial q, r;
            Polynomial::divmod(red.num, red.den, q, r);
            out.quotient = q;
        }
    }

    for (const auto& rec : roots.roots) {
        if (rec.region != RootRegion::outside) continue;
        const cplx beta = rec.value;
        const int m = rec.multiplicity;
        const int order = m + 1;

        // locate vanishing atoms of the denominator at this pole
        int vanish_total = 0;
        std::vector<int> vanish_count(fr.den.parts.size(), 0);
        for (size_t pi = 0; pi < fr.den.parts.size(); ++pi) {
            const auto& part = fr.den.parts[pi];
            const Polynomial& atom = fr.atoms[part.atom];
            double scale = 0.0, pw = 1.0;
            for (double c : atom.coeffs()) {
                scale += std::abs(c) * pw;
                pw *= std::abs(beta);
            }
            if (std::abs(atom.eval(beta)) <= 1e-6 * std::max(scale, 1e-300)) {
                vanish_count[pi] = part.exp;
                vanish_total += part.exp;
            }
        }
        if (vanish_total != m)
            raise(errc::ill_conditioned,
                  "pole multiplicity " + std::to_string(m) + " vs vanishing atom order " +
                      std::to_string(vanish_total));

        // E1 series: den / (x - beta)^m around beta, assembled factor-wise
        lcplx lbeta(beta.real(), beta.imag());
        TaylorSeries<lcplx> e1 =
            TaylorSeries<lcplx>::constant(lcplx((long double)fr.den.weight), order);
        if (fr.den.xpow > 0) {
            auto xs = TaylorSeries<lcplx>::variable(lbeta, order);
            for (int e = 0; e < fr.den.xpow; ++e) e1 = e1 * xs;
        }
        for (size_t pi = 0; pi < fr.den.parts.size(); ++pi) {
            const auto& part = fr.den.parts[pi];
            auto shift = fr.atoms[part.atom].taylor_at(lbeta, order + 1);
            if (vanish_count[pi] > 0) {
                // factor u out exactly: the constant term is the residual root
                // defect, dropped after a magnitude check against the slope
                if (std::abs(shift[0]) > 1e-4L * std::max(std::abs(shift[1]), 1e-300L))
                    raise(errc::ill_conditioned, "atom root drifted from cluster centroid");
                std::vector<lcplx> reduced(shift.begin() + 1, shift.end());
                TaylorSeries<lcplx> rs{std::move(reduced)};
                for (int e = 0; e < part.exp; ++e) e1 = e1 * rs;
            } else {
                shift.resize(order);
                TaylorSeries<lcplx> s{std::move(shift)};
                for (int e = 0; e < part.exp; ++e) e1 = e1 * s;
            }
        }

        auto lam_series = fr.num_series(beta, order);
        auto v = lam_series / e1;

        if (m == 1) {
            out.simple.push_back({beta, -cplx((double)v[0].real(), (double)v[0].imag())});
        } else {
            PartialFractionExpansion::RepeatedTerm term;
            term.pole = beta;
            term.multiplicity = m;
            term.zeta.resize(m);
            for (int i = 1; i <= m; ++i) {
                double sign = ((m - i + 1) % 2 == 0) ? 1.0 : -1.0;
                lcplx z = v[i - 1] * (long double)sign;
                term.zeta[i - 1] = cplx((double)z.real(), (double)z.imag());
            }
            out.repeated.push_back(std::move(term));
        }
    }
    return out;
}

} // namespace bulkq
