#pragma once

#include "bulkq/roots.hpp"

namespace bulkq {

// Partial-fraction expansion of Lambda(x)/D(x):
//
//   sum_i quotient_i x^i  +  sum_k c_k / (alpha_k - x)
//                         +  sum_nu sum_{i=1}^{pi} zeta_{nu,i} / (beta_nu - x)^{pi-i+1}
//
// All poles lie strictly outside the unit disk; in-disk zeros of D must have
// cancelled against Lambda (checked on construction). Coefficients of x^n and
// tail sums follow in closed form from the pole terms.
struct PartialFractionExpansion {
    struct SimpleTerm {
        cplx pole;
        cplx residue; // c_k = -Lambda(alpha)/D'(alpha)
    };
    struct RepeatedTerm {
        cplx pole;
        int multiplicity = 2;
        std::vector<cplx> zeta; // zeta[i-1] multiplies (beta - x)^{-(pi-i+1)}
    };

    Polynomial quotient; // present when deg Lambda >= deg D
    std::vector<SimpleTerm> simple;
    std::vector<RepeatedTerm> repeated;

    // Coefficient of x^n in the series expansion (real part; imaginary parts
    // cancel for conjugate pole pairs).
    double coeff(int n) const;
    cplx coeff_complex(int n) const;
    // First `count` coefficients with incremental pole powers (fast sweep).
    std::vector<double> coeffs(int count) const;

    // sum_{n=0}^{inf} coeff(n): quotient mass plus geometric pole tails.
    double total_sum() const;
    // sum_{n > N} coeff(n), evaluated as total minus the finite prefix.
    double tail_sum_after(int N) const;

    // Reconstructed value at a point away from the poles.
    cplx eval(const cplx& x) const;
};

// Builds the expansion. `roots` must carry every zero of D with multiplicity
// (inside zeros included: they are checked for cancellation and deflated).
// eps_cancel bounds |Lambda(alpha)| relative to an evaluation-scale norm.
PartialFractionExpansion partial_fractions(const Polynomial& lambda, const Polynomial& dpoly,
                                           const RootSet& roots, double eps_cancel = 1e-8);

// ---------------------------------------------------------------------------
// Factored representation Lambda/D = (sum_t w_t x^p_t prod atoms^e) /
// (w x^p prod atoms^e). Long products of composed denominators span many
// orders of magnitude; expanding them first and evaluating at the poles
// drowns the true values in rounding noise. Keeping the factors and combining
// values (or local Taylor series) per atom stays well conditioned, so residue
// extraction at the outer poles works off this form.
// ---------------------------------------------------------------------------
struct FactoredRational {
    struct Part {
        int atom = 0;
        int exp = 1;
    };
    struct Term {
        double weight = 1.0;
        int xpow = 0;
        std::vector<Part> parts;
    };

    std::vector<Polynomial> atoms;
    std::vector<Term> num_terms;
    Term den;

    int add_atom(Polynomial p) {
        atoms.push_back(std::move(p));
        return static_cast<int>(atoms.size()) - 1;
    }

    cplx num_eval(const cplx& x) const;
    cplx den_eval(const cplx& x) const;
    // sum of |term| magnitudes: the cancellation scale for num_eval
    double num_eval_scale(const cplx& x) const;

    // extended precision: the term sums cancel heavily near the poles
    TaylorSeries<std::complex<long double>> num_series(const cplx& center, int order) const;

    Polynomial num_expand() const;
    Polynomial den_expand() const;
};

// Partial fractions from the factored form. In-disk zeros are checked for
// cancellation (structured evaluation); pole orders come from the vanishing
// atoms' exponents and must match the root set.
PartialFractionExpansion partial_fractions_factored(const FactoredRational& fr,
                                                    const RootSet& roots,
                                                    double eps_cancel = 1e-8);

// lambda/dpoly with the closed-unit-disk zeros of dpoly divided out of both
// sides (they must cancel). The result has all poles strictly outside the
// unit disk, so its power series is a stable recursion.
struct ReducedRational {
    Polynomial num;
    Polynomial den;
};

ReducedRational deflate_unit_roots(const Polynomial& lambda, const Polynomial& dpoly,
                                   const RootSet& roots, double eps_cancel = 1e-8);

// Series coefficients of lambda/dpoly by direct long division after deflating
// the in-disk zeros; the independent second path for the expansion above.
std::vector<double> deflated_series(const Polynomial& lambda, const Polynomial& dpoly,
                                    const RootSet& roots, int n, double eps_cancel = 1e-8);

} // namespace bulkq
