#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bulkq/errors.hpp"

namespace bulkq {

// ---------------------------------------------------------------------------
// Arrival process: per slot, a batch arrives with probability lambda; its
// size follows the finite-support law g_1..g_Gmax.
// ---------------------------------------------------------------------------
struct BatchArrivalSpec {
    double lambda = 0.0;
    std::vector<double> g; // g[m-1] = P(batch size = m), tight support

    int gmax() const { return static_cast<int>(g.size()); }
    double g_at(int m) const { return (m >= 1 && m <= gmax()) ? g[m - 1] : 0.0; }
    void validate() const;
};

double mean_batch_size(const BatchArrivalSpec& arrival);

// ---------------------------------------------------------------------------
// Service / vacation time laws on {1, 2, ...}.
// ---------------------------------------------------------------------------
struct GeometricDist {
    double p = 0.5; // success per slot, mean 1/p
};
struct NegBinomialDist {
    int r = 1;       // order
    double mu = 0.5; // per-phase success, mean r/mu
};
struct PhaseTypeDist {
    std::vector<double> beta;           // initial phase law, length nu
    std::vector<std::vector<double>> T; // nu x nu substochastic transient block
    int order() const { return static_cast<int>(beta.size()); }
};
struct DeterministicDist {
    int d = 1; // fixed length in slots
};
struct EmpiricalDist {
    std::vector<double> pmf; // pmf[n-1] = P(length = n)
};

struct ServiceTimeDist {
    std::variant<GeometricDist, NegBinomialDist, PhaseTypeDist, DeterministicDist, EmpiricalDist>
        law;

    static ServiceTimeDist geometric(double p) { return {GeometricDist{p}}; }
    static ServiceTimeDist neg_binomial(int r, double mu) { return {NegBinomialDist{r, mu}}; }
    static ServiceTimeDist phase_type(std::vector<double> beta,
                                      std::vector<std::vector<double>> T) {
        return {PhaseTypeDist{std::move(beta), std::move(T)}};
    }
    static ServiceTimeDist deterministic(int d) { return {DeterministicDist{d}}; }
    static ServiceTimeDist empirical(std::vector<double> pmf) {
        return {EmpiricalDist{std::move(pmf)}};
    }

    void validate() const;
    double mean() const; // closed form per variant
    std::string kind_name() const;

    // First `count` pmf values P(length = 1..count).
    std::vector<double> pmf_prefix(int count) const;
    // Smallest N with P(length > N) < tail_eps (used for truncations).
    int pmf_tail_cutoff(double tail_eps = 1e-12, int cap = 1 << 20) const;
};

// Phase-type helper: spectral radius of the transient block.
double phase_type_spectral_radius(const PhaseTypeDist& ph);

// ---------------------------------------------------------------------------
// Bulk-service policy: serve min(queue, b) once queue >= a; service law may
// differ per batch size.
// ---------------------------------------------------------------------------
struct ServicePolicy {
    int a = 1;
    int b = 1;
    std::vector<ServiceTimeDist> dists; // dists[i - a] is the size-i law

    const ServiceTimeDist& dist_for(int i) const {
        if (i < a || i > b)
            raise(errc::out_of_range,
                  "batch size " + std::to_string(i) + " outside [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
        return dists[static_cast<size_t>(i - a)];
    }
    void validate() const;
};

double mean_service_time(const ServicePolicy& service, int i);

// ---------------------------------------------------------------------------
// Vacation policy. delta_p = 0 single vacation, 1 multiple vacation.
// ---------------------------------------------------------------------------
struct VacationSpec {
    enum class Mode { single, multiple };
    Mode mode = Mode::single;
    ServiceTimeDist dist;

    int delta_p() const { return mode == Mode::multiple ? 1 : 0; }
    void validate() const { dist.validate(); }
};

// ---------------------------------------------------------------------------
// Fully validated queue instance; immutable single source of truth for the
// solver and the simulator.
// ---------------------------------------------------------------------------
struct ValidatedModel {
    BatchArrivalSpec arrival;
    ServicePolicy service;
    VacationSpec vacation;
    double rho = 0.0;
    std::vector<double> mean_service; // indexed [i - a]
    double mean_vacation = 0.0;

    double mean_batch() const { return bulkq::mean_batch_size(arrival); }
    int delta_p() const { return vacation.delta_p(); }
    double s(int i) const { return mean_service[static_cast<size_t>(i - service.a)]; }
};

ValidatedModel validate_model(const BatchArrivalSpec& arrival, const ServicePolicy& service,
                              const VacationSpec& vacation);

} // namespace bulkq
