#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bulkq/model.hpp"
#include "bulkq/solver.hpp"

namespace bulkq {

// ---------------------------------------------------------------------------
// Slot-accurate discrete-event oracle of the late-arrival, delayed-access
// queue. Per slot boundary: observe state, apply the potential batch arrival,
// then process completions/terminations and start the next activity.
// ---------------------------------------------------------------------------

struct SimConfig {
    std::int64_t horizon_slots = 1'000'000;
    std::int64_t warmup_slots = -1; // -1: 10% of horizon
    int replications = 4;
    std::uint64_t seed = 0x5eed;
    int hist_cap = 2048; // queue-length histogram rows (overflow pooled at cap)

    std::int64_t effective_warmup() const {
        return warmup_slots >= 0 ? warmup_slots : horizon_slots / 10;
    }
    void validate() const {
        if (horizon_slots <= effective_warmup())
            raise(errc::bad_input, "horizon must exceed warmup");
        if (replications < 1) raise(errc::bad_input, "need at least one replication");
    }
};

struct ScalarEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::vector<double> per_rep;
};

struct EmpiricalReport {
    int a = 1, b = 1;
    int delta_p = 0;
    int replications = 0;
    std::int64_t measured_slots = 0; // pooled across replications

    // pooled counts
    std::vector<std::int64_t> arb_dormant;           // [n]
    std::vector<std::int64_t> arb_vacation;          // [n]
    std::vector<std::vector<std::int64_t>> arb_busy; // [n][r - a]
    std::vector<std::vector<std::int64_t>> dep_joint; // [n][r - a] at departures
    std::vector<std::int64_t> vac_end;                // [n] at vacation terminations
    std::vector<std::int64_t> pre_arrival_queue;      // queue length seen by arrivals

    std::int64_t departures_events = 0;
    std::int64_t vacation_end_events = 0;

    // per-replication scalar series (indexed by replication)
    ScalarEstimate L, L_q, P_busy, Q_vac, P_dor, tau_hat;
    // per-replication per-cell proportions for z-scoring
    std::vector<std::vector<double>> rep_dep_prop;   // [rep][flat cell]
    std::vector<std::vector<double>> rep_arb_prop;   // [rep][flat cell]
    std::vector<std::vector<double>> rep_vac_prop;   // [rep][n]
    std::vector<std::vector<double>> rep_qterm_prop; // [rep][n] vacation-end queue law

    std::uint64_t seed = 0;
    std::int64_t horizon = 0, warmup = 0;
};

EmpiricalReport simulate(const ValidatedModel& model, const SimConfig& cfg);

// Pools two compatible reports (same model shape and slot counts per rep).
EmpiricalReport merge_replications(const std::vector<EmpiricalReport>& reports);

// ---------------------------------------------------------------------------
// Analytic-vs-empirical comparison: per-cell z-scores for every probability
// with analytic mass >= prob_floor, plus scalar z-scores; the verdict uses a
// Bonferroni-adjusted normal threshold at significance alpha.
// ---------------------------------------------------------------------------
struct ComparisonCell {
    std::string name;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double z = 0.0;
};

struct ComparisonReport {
    std::vector<ComparisonCell> cells;
    int n_tests = 0;
    double alpha = 0.01;
    double z_crit = 0.0;   // Bonferroni-adjusted two-sided threshold
    double max_abs_z = 0.0;
    int n_beyond_3sigma = 0;
    bool pass = false;
};

ComparisonReport compare(const SolveResult& analytic, const EmpiricalReport& empirical,
                         double alpha = 0.01, double prob_floor = 1e-4);

// Inverse standard normal CDF (Acklam's rational approximation refined by one
// Halley step); used for the Bonferroni threshold.
double normal_quantile(double p);

} // namespace bulkq
