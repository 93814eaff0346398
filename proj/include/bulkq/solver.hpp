#pragma once

#include "bulkq/model.hpp"
#include "bulkq/pfe.hpp"
#include "bulkq/rational.hpp"
#include "bulkq/roots.hpp"

#include <optional>
#include <string>

namespace bulkq {

// ---------------------------------------------------------------------------
// e-recursion weights: e[n][i] is the probability that the dormancy level
// walk started at i ever sits exactly at n while accumulating batches.
// ---------------------------------------------------------------------------
struct EMatrix {
    int a = 1;
    std::vector<std::vector<double>> e; // e[n] has entries i = 0..n, n <= a-1
    double at(int n, int i) const { return e[static_cast<size_t>(n)][static_cast<size_t>(i)]; }
};

EMatrix e_matrix(const BatchArrivalSpec& arrival, int a);

// Reduces the vacation-termination head unknowns to the service-completion
// head: Q+_n = sum_i w_i p+_{n-i} for n < a. Single vacation: w = h prefix;
// multiple vacation: the xi recursion (requires h_0 < 1).
std::vector<double> vacation_seed_coeffs(const std::vector<double>& h, int a, int delta_p);

// ---------------------------------------------------------------------------
// Composed PGFs K_i(x) = S_i(A(x)) and H(x) = V(A(x)).
// ---------------------------------------------------------------------------
struct ComposedPgfs {
    int a = 1, b = 1;
    Polynomial A;                   // per-slot arrival PGF
    std::vector<RationalFunction> K; // K[i - a]
    RationalFunction H;

    const RationalFunction& K_of(int i) const { return K[static_cast<size_t>(i - a)]; }
    const RationalFunction& K_b() const { return K.back(); }
};

ComposedPgfs build_composed(const ValidatedModel& model);

// ---------------------------------------------------------------------------
// Boundary unknowns.
// ---------------------------------------------------------------------------
struct BoundaryUnknowns {
    std::vector<double> p_plus_head; // p+_0 .. p+_{b-1}
    std::vector<double> q_plus_head; // Q+_0 .. Q+_{a-1}
    double condition_number = 0.0;
    double max_root_residual = 0.0; // max |Lambda(alpha)|/scale over in-disk roots, post-solve
    std::vector<std::string> warnings;
};

BoundaryUnknowns solve_boundary(const ValidatedModel& model, const ComposedPgfs& pgfs,
                                const RootSet& croots);

// ---------------------------------------------------------------------------
// Joint departure-epoch distribution.
// ---------------------------------------------------------------------------
struct DepartureDistribution {
    int a = 1, b = 1;
    int n_max = 0;
    std::vector<std::vector<double>> p_joint; // [n][r - a], 0 <= n <= n_max
    std::vector<double> q_term;               // Q+_n, 0 <= n <= n_max
    std::vector<double> p_plus;               // p+_n = sum_r p+_{n,r}, 0 <= n <= n_max + b
    std::vector<double> q_plus;               // Q+_n continued to n_max + b (for shifts)
    std::vector<double> C;                    // C_i, i in [a, b-1]
    PartialFractionExpansion pfe_tail;        // governs the r = b column

    // closed-form totals
    std::vector<double> col_sums; // sum_n p+_{n,r}, r = a..b
    double p_plus_total = 0.0;    // P+(1)
    double q_plus_total = 0.0;    // Q+(1)
    double normalization = 0.0;   // P+(1) + Q+(1), should be 1

    // the reduced rational function of the b-column (poles outside only)
    Polynomial b_num_reduced;
    Polynomial b_den_reduced;
    std::vector<std::string> warnings;
};

// The b-column rational function in factored form (for residue extraction at
// the outer poles) plus its expansion (for the in-disk deflation and the
// long-division oracle) and the full pole set.
struct BColumnParts {
    FactoredRational fr;
    Polynomial lambda; // expanded numerator after clearing denominators
    Polynomial dpoly;  // expanded P(x) * D_H(x) * prod_{i<b} D_i(x)
    RootSet roots;     // all zeros of dpoly with multiplicity
};

BColumnParts build_b_column(const ValidatedModel& model, const ComposedPgfs& pgfs,
                            const RootSet& croots, const BoundaryUnknowns& bnd);

DepartureDistribution departure_joint(const ValidatedModel& model, const ComposedPgfs& pgfs,
                                      const RootSet& croots, const BoundaryUnknowns& bnd,
                                      int n_max_hint = -1);

// ---------------------------------------------------------------------------
// Event-rate constants.
// ---------------------------------------------------------------------------
struct TauOmega {
    double tau = 0.0;    // completion/termination events per slot
    double omega = 0.0;  // mean inter-event time weighted per the boundary law
    double e_star = 0.0; // normalizer relating departure and arbitrary epochs
};

TauOmega tau_omega(const ValidatedModel& model, const DepartureDistribution& dep,
                   const BoundaryUnknowns& bnd);

// ---------------------------------------------------------------------------
// Arbitrary-slot distribution.
// ---------------------------------------------------------------------------
struct ArbitraryDistribution {
    int a = 1, b = 1;
    int n_max = 0;
    int delta_p = 0;
    std::vector<double> p_dormant;            // raw values of the dormant relation, n < a
    std::vector<std::vector<double>> p_joint; // [n][r - a]
    std::vector<double> q_vac;                // Q_n
    double e_star = 0.0;

    // closed-form totals and first moments
    std::vector<double> col_sums;    // sum_n p_{n,r}
    std::vector<double> col_moments; // sum_n n p_{n,r}
    double q_total = 0.0, q_moment = 0.0;
    double dormant_total = 0.0, dormant_moment = 0.0;
    double total_mass = 0.0; // with the (1-delta_p) dormant weight
    std::vector<std::string> warnings;
};

ArbitraryDistribution arbitrary_dist(const ValidatedModel& model, const ComposedPgfs& pgfs,
                                     const RootSet& croots, const BoundaryUnknowns& bnd,
                                     const DepartureDistribution& dep, const TauOmega& to);

// Bernoulli arrivals see time averages: the pre-arrival distribution is the
// arbitrary-slot distribution.
ArbitraryDistribution pre_arrival_dist(const ArbitraryDistribution& arb);

// ---------------------------------------------------------------------------
// Marginals and scalar measures.
// ---------------------------------------------------------------------------
struct Marginals {
    std::vector<double> p_sys;   // number in system (queue + in service)
    std::vector<double> p_queue; // number in queue
    std::vector<double> p_ser;   // conditional in-service batch size, r = a..b
    double P_busy = 0.0, Q_vac = 0.0, P_dor = 0.0;
};

Marginals marginals(const ValidatedModel& model, const ArbitraryDistribution& arb);

struct PerformanceReport {
    double L = 0.0, L_q = 0.0, L_s = 0.0;
    double W = 0.0, W_q = 0.0;
    double L_q_plus = 0.0; // diagnostic closed form (see lq_plus)
    double P_busy = 0.0, Q_vac = 0.0, P_dor = 0.0;
    Marginals marg;
};

PerformanceReport measures(const ValidatedModel& model, const ArbitraryDistribution& arb,
                           const Marginals& marg);

// The printed closed form for the mean queue length at service completion
// epochs, evaluated verbatim, plus the two extraction-based candidates it is
// compared against (see diagnostics).
struct LqPlusReport {
    double printed_formula = 0.0;
    double completions_only = 0.0;  // sum n p+_n / sum p+_n
    double with_vacations = 0.0;    // sum n (p+_n + Q+_n)
};

LqPlusReport lq_plus(const ValidatedModel& model, const ComposedPgfs& pgfs,
                     const BoundaryUnknowns& bnd, const DepartureDistribution& dep);

// ---------------------------------------------------------------------------
// One-call pipeline with diagnostics.
// ---------------------------------------------------------------------------
struct SolveDiagnostics {
    double condition_number = 0.0;
    double max_root_residual = 0.0;     // char-poly residual at reported roots
    double max_cancel_residual = 0.0;   // |Lambda| / scale at in-disk roots
    double departure_defect = 0.0;      // |P+(1) + Q+(1) - 1|
    double mass_defect = 0.0;           // |arbitrary total - 1|
    double rate_identity_defect = 0.0;  // |1 - (1-dp) P_dor - tau * omega|
    std::vector<std::string> warnings;
};

struct SolveResult {
    ValidatedModel model;
    RootSet croots;
    BoundaryUnknowns boundary;
    DepartureDistribution departure;
    TauOmega rates;
    ArbitraryDistribution arbitrary;
    Marginals marg;
    PerformanceReport report;
    LqPlusReport lqp;
    SolveDiagnostics diag;
};

struct SolveOptions {
    int n_max_hint = -1; // -1: choose from tail mass
};

SolveResult solve_model(const ValidatedModel& model, const SolveOptions& opts = {});

} // namespace bulkq
