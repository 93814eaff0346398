#include "bulkq/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

namespace bulkq {

namespace {

constexpr double kPmfSumTol = 1e-10;
constexpr int kMaxPhaseOrder = 8;

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& m) {
    int n = static_cast<int>(m.size());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m[i][j];
    return out;
}

} // namespace

void BatchArrivalSpec::validate() const {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        raise(errc::bad_input, "lambda must lie strictly in (0, 1)");
    if (g.empty()) raise(errc::non_stochastic, "batch-size law is empty");
    double sum = 0.0;
    for (double v : g) {
        if (v < 0.0) raise(errc::non_stochastic, "negative batch-size probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        raise(errc::non_stochastic, "batch-size law sums to " + std::to_string(sum));
    if (!(g.back() > 0.0)) raise(errc::non_stochastic, "batch-size support is not tight");
}

double mean_batch_size(const BatchArrivalSpec& arrival) {
    arrival.validate();
    double m = 0.0;
    for (int i = 0; i < arrival.gmax(); ++i) m += (i + 1) * arrival.g[i];
    return m;
}

double phase_type_spectral_radius(const PhaseTypeDist& ph) {
    Eigen::MatrixXd T = to_eigen(ph.T);
    return T.eigenvalues().cwiseAbs().maxCoeff();
}

void ServiceTimeDist::validate() const {
    std::visit(
        [](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GeometricDist>) {
                if (!(d.p > 0.0) || d.p > 1.0)
                    raise(errc::non_stochastic, "geometric parameter outside (0, 1]");
            } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                if (d.r < 1) raise(errc::bad_input, "negative binomial order must be >= 1");
                if (!(d.mu > 0.0) || d.mu > 1.0)
                    raise(errc::non_stochastic, "negative binomial parameter outside (0, 1]");
            } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                int nu = d.order();
                if (nu < 1) raise(errc::bad_input, "phase-type needs at least one phase");
                if (nu > kMaxPhaseOrder)
                    raise(errc::unsupported_order,
                          "phase-type order " + std::to_string(nu) + " above limit " +
                              std::to_string(kMaxPhaseOrder));
                if ((int)d.T.size() != nu)
                    raise(errc::bad_input, "phase-type T must be square of beta's length");
                double bsum = 0.0;
                for (double v : d.beta) {
                    if (v < 0.0) raise(errc::non_stochastic, "negative phase-type beta entry");
                    bsum += v;
                }
                if (std::abs(bsum - 1.0) > kPmfSumTol)
                    raise(errc::non_stochastic,
                          "phase-type beta must sum to 1 (defective laws rejected)");
                for (const auto& row : d.T) {
                    if ((int)row.size() != nu)
                        raise(errc::bad_input, "phase-type T must be square");
                    double rsum = 0.0;
                    for (double v : row) {
                        if (v < 0.0) raise(errc::non_stochastic, "negative phase-type T entry");
                        rsum += v;
                    }
                    if (rsum > 1.0 + 1e-12)
                        raise(errc::non_stochastic, "phase-type T row exceeds 1");
                }
                if (phase_type_spectral_radius(d) >= 1.0 - 1e-12)
                    raise(errc::non_stochastic, "phase-type transient block is not substochastic");
            } else if constexpr (std::is_same_v<D, DeterministicDist>) {
                if (d.d < 1) raise(errc::bad_input, "deterministic length must be >= 1 slot");
            } else if constexpr (std::is_same_v<D, EmpiricalDist>) {
                if (d.pmf.empty()) raise(errc::non_stochastic, "empirical pmf is empty");
                double sum = 0.0;
                for (double v : d.pmf) {
                    if (v < 0.0) raise(errc::non_stochastic, "negative empirical pmf entry");
                    sum += v;
                }
                if (std::abs(sum - 1.0) > kPmfSumTol)
                    raise(errc::non_stochastic, "empirical pmf sums to " + std::to_string(sum));
            }
        },
        law);
}

double ServiceTimeDist::mean() const {
    return std::visit(
        [](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GeometricDist>) {
                return 1.0 / d.p;
            } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                return d.r / d.mu;
            } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                int nu = d.order();
                Eigen::MatrixXd M = Eigen::MatrixXd::Identity(nu, nu) - to_eigen(d.T);
                Eigen::VectorXd ones = Eigen::VectorXd::Ones(nu);
                Eigen::VectorXd sol = M.partialPivLu().solve(ones);
                double m = 0.0;
                for (int i = 0; i < nu; ++i) m += d.beta[i] * sol(i);
                return m;
            } else if constexpr (std::is_same_v<D, DeterministicDist>) {
                return static_cast<double>(d.d);
            } else {
                double m = 0.0;
                for (size_t n = 0; n < d.pmf.size(); ++n) m += (n + 1) * d.pmf[n];
                return m;
            }
        },
        law);
}

std::string ServiceTimeDist::kind_name() const {
    return std::visit(
        [](const auto& d) -> std::string {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GeometricDist>) return "geometric";
            else if constexpr (std::is_same_v<D, NegBinomialDist>) return "negbinomial";
            else if constexpr (std::is_same_v<D, PhaseTypeDist>) return "phasetype";
            else if constexpr (std::is_same_v<D, DeterministicDist>) return "deterministic";
            else return "empirical";
            (void)d;
        },
        law);
}

std::vector<double> ServiceTimeDist::pmf_prefix(int count) const {
    std::vector<double> out(count, 0.0);
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GeometricDist>) {
                double q = 1.0 - d.p, cur = d.p;
                for (int n = 0; n < count; ++n) {
                    out[n] = cur;
                    cur *= q;
                }
            } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                // pmf(n) = C(n-1, r-1) mu^r (1-mu)^(n-r), n >= r
                double q = 1.0 - d.mu;
                double cur = std::pow(d.mu, d.r); // n = r term
                for (int n = d.r; n <= count; ++n) {
                    out[n - 1] = cur;
                    cur *= q * static_cast<double>(n) / static_cast<double>(n - d.r + 1);
                }
            } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                int nu = d.order();
                std::vector<double> eta(nu, 0.0);
                for (int i = 0; i < nu; ++i) {
                    double rsum = 0.0;
                    for (int j = 0; j < nu; ++j) rsum += d.T[i][j];
                    eta[i] = 1.0 - rsum;
                }
                std::vector<double> v(d.beta); // beta * T^(n-1)
                for (int n = 1; n <= count; ++n) {
                    double mass = 0.0;
                    for (int i = 0; i < nu; ++i) mass += v[i] * eta[i];
                    out[n - 1] = mass;
                    std::vector<double> next(nu, 0.0);
                    for (int i = 0; i < nu; ++i)
                        for (int j = 0; j < nu; ++j) next[j] += v[i] * d.T[i][j];
                    v.swap(next);
                }
            } else if constexpr (std::is_same_v<D, DeterministicDist>) {
                if (d.d >= 1 && d.d <= count) out[d.d - 1] = 1.0;
            } else {
                for (int n = 1; n <= count && n <= (int)d.pmf.size(); ++n)
                    out[n - 1] = d.pmf[n - 1];
            }
        },
        law);
    return out;
}

int ServiceTimeDist::pmf_tail_cutoff(double tail_eps, int cap) const {
    // grow exponentially until the tail is small enough
    int n = 32;
    while (n < cap) {
        auto pmf = pmf_prefix(n);
        double tail = 1.0 - std::accumulate(pmf.begin(), pmf.end(), 0.0);
        if (tail < tail_eps) {
            // shrink to the first index where the cumulative tail is below eps
            double acc = 1.0;
            for (int k = 0; k < n; ++k) {
                acc -= pmf[k];
                if (acc < tail_eps) return k + 1;
            }
            return n;
        }
        n *= 2;
    }
    return cap;
}

void ServicePolicy::validate() const {
    if (a < 1 || a > b)
        raise(errc::bad_threshold,
              "need 1 <= a <= b, got a=" + std::to_string(a) + " b=" + std::to_string(b));
    if ((int)dists.size() != b - a + 1)
        raise(errc::bad_input, "need exactly one service law per batch size in [a, b]");
    for (const auto& d : dists) d.validate();
}

double mean_service_time(const ServicePolicy& service, int i) {
    return service.dist_for(i).mean();
}

ValidatedModel validate_model(const BatchArrivalSpec& arrival, const ServicePolicy& service,
                              const VacationSpec& vacation) {
    arrival.validate();
    service.validate();
    vacation.validate();

    ValidatedModel m;
    m.arrival = arrival;
    m.service = service;
    m.vacation = vacation;
    for (int i = service.a; i <= service.b; ++i)
        m.mean_service.push_back(service.dist_for(i).mean());
    m.mean_vacation = vacation.dist.mean();

    double gbar = mean_batch_size(arrival);
    double s_b = m.mean_service.back();
    m.rho = arrival.lambda * gbar * s_b / static_cast<double>(service.b);
    if (m.rho >= 1.0)
        raise(errc::unstable, "rho = " + std::to_string(m.rho) + " >= 1");
    return m;
}

} // namespace bulkq
