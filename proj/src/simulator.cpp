#include "bulkq/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace bulkq {

namespace {

// SplitMix64: counter-based 64-bit generator. Stream derivation: the state
// starts at mix(seed, replication index), so replications are independent
// and any (model, config, seed) triple reproduces bit-identical output.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    static SplitMix64 for_replication(std::uint64_t seed, int rep) {
        SplitMix64 g(seed + 0x9e3779b97f4a7c15ULL * (std::uint64_t)(rep + 1));
        g.next();
        g.next();
        return g;
    }
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { // in (0, 1)
        return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }
};

// Exact samplers per service-time variant.
struct LawSampler {
    enum class Kind { geometric, negbin, phase, fixed, table } kind;
    double p = 0.0;
    int r = 0;
    int d = 0;
    std::vector<double> cdf;                 // empirical
    std::vector<double> beta_cdf;            // phase-type initial law
    std::vector<std::vector<double>> row_cdf; // phase-type rows: stay cdf over next phase
    std::vector<double> absorb;               // per-phase absorption probability

    static LawSampler make(const ServiceTimeDist& dist) {
        LawSampler s{Kind::fixed};
        std::visit(
            [&](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, GeometricDist>) {
                    s.kind = Kind::geometric;
                    s.p = d.p;
                } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                    s.kind = Kind::negbin;
                    s.p = d.mu;
                    s.r = d.r;
                } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                    s.kind = Kind::phase;
                    int nu = d.order();
                    double acc = 0.0;
                    for (int i = 0; i < nu; ++i) {
                        acc += d.beta[i];
                        s.beta_cdf.push_back(acc);
                    }
                    for (int i = 0; i < nu; ++i) {
                        double rsum = 0.0;
                        std::vector<double> row;
                        for (int j = 0; j < nu; ++j) {
                            rsum += d.T[i][j];
                            row.push_back(rsum);
                        }
                        s.row_cdf.push_back(std::move(row));
                        s.absorb.push_back(1.0 - rsum);
                    }
                } else if constexpr (std::is_same_v<D, DeterministicDist>) {
                    s.kind = Kind::fixed;
                    s.d = d.d;
                } else {
                    s.kind = Kind::table;
                    double acc = 0.0;
                    for (double v : d.pmf) {
                        acc += v;
                        s.cdf.push_back(acc);
                    }
                    s.cdf.back() = std::max(s.cdf.back(), 1.0);
                }
            },
            dist.law);
        return s;
    }

    int geometric_draw(SplitMix64& rng, double prob) const {
        if (prob >= 1.0) return 1;
        double u = rng.uniform();
        return 1 + (int)std::floor(std::log(u) / std::log(1.0 - prob));
    }

    int sample(SplitMix64& rng) const {
        switch (kind) {
            case Kind::geometric: return geometric_draw(rng, p);
            case Kind::negbin: {
                int total = 0;
                for (int i = 0; i < r; ++i) total += geometric_draw(rng, p);
                return total;
            }
            case Kind::fixed: return d;
            case Kind::table: {
                double u = rng.uniform();
                auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
                return 1 + (int)(it - cdf.begin());
            }
            case Kind::phase: {
                double u = rng.uniform();
                int phase = (int)(std::lower_bound(beta_cdf.begin(), beta_cdf.end(), u) -
                                  beta_cdf.begin());
                phase = std::min(phase, (int)beta_cdf.size() - 1);
                int slots = 0;
                while (true) {
                    ++slots;
                    double v = rng.uniform();
                    if (v >= row_cdf[phase].back()) return slots; // absorbed
                    phase = (int)(std::lower_bound(row_cdf[phase].begin(),
                                                   row_cdf[phase].end(), v) -
                                  row_cdf[phase].begin());
                }
            }
        }
        return 1;
    }
};

enum class Mode { dormant, vacation, busy };

struct RepResult {
    std::vector<std::int64_t> arb_dormant, arb_vacation, vac_end, pre_arrival_queue;
    std::vector<std::vector<std::int64_t>> arb_busy, dep_joint;
    std::int64_t departures_events = 0, vacation_end_events = 0, measured = 0;
    double L = 0, L_q = 0, P_busy = 0, Q_vac = 0, P_dor = 0, tau_hat = 0;
};

RepResult run_one(const ValidatedModel& model, const SimConfig& cfg, int rep) {
    const int a = model.service.a, b = model.service.b;
    const int nsizes = b - a + 1;
    const int cap = cfg.hist_cap;
    const bool multiple = model.delta_p() == 1;
    SplitMix64 rng = SplitMix64::for_replication(cfg.seed, rep);

    std::vector<LawSampler> service;
    for (int i = a; i <= b; ++i) service.push_back(LawSampler::make(model.service.dist_for(i)));
    LawSampler vacation = LawSampler::make(model.vacation.dist);
    std::vector<double> gcdf;
    {
        double acc = 0.0;
        for (double v : model.arrival.g) {
            acc += v;
            gcdf.push_back(acc);
        }
        gcdf.back() = std::max(gcdf.back(), 1.0);
    }
    const double lambda = model.arrival.lambda;

    RepResult res;
    res.arb_dormant.assign(cap + 1, 0);
    res.arb_vacation.assign(cap + 1, 0);
    res.vac_end.assign(cap + 1, 0);
    res.pre_arrival_queue.assign(cap + 1, 0);
    res.arb_busy.assign(cap + 1, std::vector<std::int64_t>(nsizes, 0));
    res.dep_joint.assign(cap + 1, std::vector<std::int64_t>(nsizes, 0));

    std::int64_t queue = 0;
    Mode mode = multiple ? Mode::vacation : Mode::dormant;
    int rem = multiple ? vacation.sample(rng) : 0;
    int in_service = 0;

    const std::int64_t warmup = cfg.effective_warmup();
    std::int64_t sum_q = 0, sum_sys = 0, busy_slots = 0, vac_slots = 0, dor_slots = 0;
    std::int64_t events = 0;
    std::int64_t total_arrived = 0, total_departed = 0;

    auto clampi = [cap](std::int64_t n) { return (int)std::min<std::int64_t>(n, cap); };

    for (std::int64_t slot = 0; slot < cfg.horizon_slots; ++slot) {
        const bool measure = slot >= warmup;

        // observation at k-
        if (measure) {
            ++res.measured;
            sum_q += queue;
            sum_sys += queue + (mode == Mode::busy ? in_service : 0);
            switch (mode) {
                case Mode::dormant:
                    ++dor_slots;
                    ++res.arb_dormant[clampi(queue)];
                    break;
                case Mode::vacation:
                    ++vac_slots;
                    ++res.arb_vacation[clampi(queue)];
                    break;
                case Mode::busy:
                    ++busy_slots;
                    ++res.arb_busy[clampi(queue)][in_service - a];
                    break;
            }
        }

        // potential batch arrival in (k-, k)
        if (rng.uniform() < lambda) {
            if (measure) ++res.pre_arrival_queue[clampi(queue)];
            double u = rng.uniform();
            int m = 1 + (int)(std::lower_bound(gcdf.begin(), gcdf.end(), u) - gcdf.begin());
            m = std::min(m, (int)gcdf.size());
            queue += m;
            total_arrived += m;
        }

        // completions at (k, k+)
        if (mode != Mode::dormant) {
            if (--rem == 0) {
                if (mode == Mode::busy) {
                    total_departed += in_service;
                    if (measure) {
                        ++res.dep_joint[clampi(queue)][in_service - a];
                        ++res.departures_events;
                        ++events;
                    }
                    if (queue >= a) {
                        in_service = (int)std::min<std::int64_t>(queue, b);
                        queue -= in_service;
                        rem = service[in_service - a].sample(rng);
                    } else {
                        mode = Mode::vacation;
                        in_service = 0;
                        rem = vacation.sample(rng);
                    }
                } else {
                    if (measure) {
                        ++res.vac_end[clampi(queue)];
                        ++res.vacation_end_events;
                        ++events;
                    }
                    if (queue >= a) {
                        mode = Mode::busy;
                        in_service = (int)std::min<std::int64_t>(queue, b);
                        queue -= in_service;
                        rem = service[in_service - a].sample(rng);
                    } else if (multiple) {
                        rem = vacation.sample(rng);
                    } else {
                        mode = Mode::dormant;
                        rem = 0;
                    }
                }
            }
        }
        // dormant server starts service the instant the threshold is reached
        if (mode == Mode::dormant && queue >= a) {
            mode = Mode::busy;
            in_service = (int)std::min<std::int64_t>(queue, b);
            queue -= in_service;
            rem = service[in_service - a].sample(rng);
        }
    }

    // conservation: arrivals = departures + remaining content, every run
    std::int64_t final_content = queue + (mode == Mode::busy ? in_service : 0);
    if (total_arrived != total_departed + final_content)
        raise(errc::bad_input, "conservation violated in simulation");
    if (multiple && dor_slots != 0)
        raise(errc::bad_input, "dormant slots observed under multiple vacations");

    double slots = (double)res.measured;
    res.L = sum_sys / slots;
    res.L_q = sum_q / slots;
    res.P_busy = busy_slots / slots;
    res.Q_vac = vac_slots / slots;
    res.P_dor = dor_slots / slots;
    res.tau_hat = events / slots;
    return res;
}

void fold_scalar(ScalarEstimate& est, const std::vector<double>& vals) {
    est.per_rep = vals;
    double n = (double)vals.size();
    est.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
    if (vals.size() > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
}

} // namespace

EmpiricalReport simulate(const ValidatedModel& model, const SimConfig& cfg) {
    cfg.validate();
    const int a = model.service.a, b = model.service.b;
    const int nsizes = b - a + 1;
    const int cap = cfg.hist_cap;

    std::vector<RepResult> reps(cfg.replications);
    {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        unsigned workers = std::min<unsigned>(hw, cfg.replications);
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                int r;
                while ((r = next.fetch_add(1)) < cfg.replications)
                    reps[r] = run_one(model, cfg, r);
            });
        for (auto& t : pool) t.join();
    }

    EmpiricalReport rep;
    rep.a = a;
    rep.b = b;
    rep.delta_p = model.delta_p();
    rep.replications = cfg.replications;
    rep.seed = cfg.seed;
    rep.horizon = cfg.horizon_slots;
    rep.warmup = cfg.effective_warmup();
    rep.arb_dormant.assign(cap + 1, 0);
    rep.arb_vacation.assign(cap + 1, 0);
    rep.vac_end.assign(cap + 1, 0);
    rep.pre_arrival_queue.assign(cap + 1, 0);
    rep.arb_busy.assign(cap + 1, std::vector<std::int64_t>(nsizes, 0));
    rep.dep_joint.assign(cap + 1, std::vector<std::int64_t>(nsizes, 0));

    std::vector<double> l, lq, pb, qv, pd, th;
    for (const auto& r : reps) {
        rep.measured_slots += r.measured;
        rep.departures_events += r.departures_events;
        rep.vacation_end_events += r.vacation_end_events;
        for (int n = 0; n <= cap; ++n) {
            rep.arb_dormant[n] += r.arb_dormant[n];
            rep.arb_vacation[n] += r.arb_vacation[n];
            rep.vac_end[n] += r.vac_end[n];
            rep.pre_arrival_queue[n] += r.pre_arrival_queue[n];
            for (int c = 0; c < nsizes; ++c) {
                rep.arb_busy[n][c] += r.arb_busy[n][c];
                rep.dep_joint[n][c] += r.dep_joint[n][c];
            }
        }
        l.push_back(r.L);
        lq.push_back(r.L_q);
        pb.push_back(r.P_busy);
        qv.push_back(r.Q_vac);
        pd.push_back(r.P_dor);
        th.push_back(r.tau_hat);

        // per-replication proportions for the z-machinery; departure and
        // vacation-end cells share one event-normalized law, matching the
        // analytic normalization sum p+ + sum Q+ = 1
        double en = std::max<double>(1.0, (double)(r.departures_events + r.vacation_end_events));
        std::vector<double> dp;
        for (int n = 0; n <= cap; ++n)
            for (int c = 0; c < nsizes; ++c) dp.push_back(r.dep_joint[n][c] / en);
        rep.rep_dep_prop.push_back(std::move(dp));
        double an = std::max<double>(1.0, (double)r.measured);
        std::vector<double> ap;
        for (int n = 0; n <= cap; ++n) {
            ap.push_back(r.arb_dormant[n] / an);
            ap.push_back(r.arb_vacation[n] / an);
            for (int c = 0; c < nsizes; ++c) ap.push_back(r.arb_busy[n][c] / an);
        }
        rep.rep_arb_prop.push_back(std::move(ap));
        std::vector<double> vp;
        for (int n = 0; n <= cap; ++n) vp.push_back(r.vac_end[n] / en);
        rep.rep_qterm_prop.push_back(std::move(vp));
    }
    fold_scalar(rep.L, l);
    fold_scalar(rep.L_q, lq);
    fold_scalar(rep.P_busy, pb);
    fold_scalar(rep.Q_vac, qv);
    fold_scalar(rep.P_dor, pd);
    fold_scalar(rep.tau_hat, th);
    return rep;
}

EmpiricalReport merge_replications(const std::vector<EmpiricalReport>& reports) {
    if (reports.empty()) raise(errc::mixed_config, "nothing to merge");
    const auto& first = reports.front();
    EmpiricalReport out = first;
    for (size_t k = 1; k < reports.size(); ++k) {
        const auto& r = reports[k];
        if (r.a != first.a || r.b != first.b || r.delta_p != first.delta_p ||
            r.horizon != first.horizon || r.warmup != first.warmup ||
            r.arb_busy.size() != first.arb_busy.size())
            raise(errc::mixed_config, "incompatible reports");
        out.replications += r.replications;
        out.measured_slots += r.measured_slots;
        out.departures_events += r.departures_events;
        out.vacation_end_events += r.vacation_end_events;
        for (size_t n = 0; n < out.arb_dormant.size(); ++n) {
            out.arb_dormant[n] += r.arb_dormant[n];
            out.arb_vacation[n] += r.arb_vacation[n];
            out.vac_end[n] += r.vac_end[n];
            out.pre_arrival_queue[n] += r.pre_arrival_queue[n];
            for (size_t c = 0; c < out.arb_busy[n].size(); ++c) {
                out.arb_busy[n][c] += r.arb_busy[n][c];
                out.dep_joint[n][c] += r.dep_joint[n][c];
            }
        }
        auto append = [](ScalarEstimate& dst, const ScalarEstimate& src) {
            dst.per_rep.insert(dst.per_rep.end(), src.per_rep.begin(), src.per_rep.end());
        };
        append(out.L, r.L);
        append(out.L_q, r.L_q);
        append(out.P_busy, r.P_busy);
        append(out.Q_vac, r.Q_vac);
        append(out.P_dor, r.P_dor);
        append(out.tau_hat, r.tau_hat);
        out.rep_dep_prop.insert(out.rep_dep_prop.end(), r.rep_dep_prop.begin(),
                                r.rep_dep_prop.end());
        out.rep_arb_prop.insert(out.rep_arb_prop.end(), r.rep_arb_prop.begin(),
                                r.rep_arb_prop.end());
        out.rep_qterm_prop.insert(out.rep_qterm_prop.end(), r.rep_qterm_prop.begin(),
                                  r.rep_qterm_prop.end());
    }
    auto refold = [](ScalarEstimate& e) {
        auto vals = e.per_rep;
        fold_scalar(e, vals);
    };
    refold(out.L);
    refold(out.L_q);
    refold(out.P_busy);
    refold(out.Q_vac);
    refold(out.P_dor);
    refold(out.tau_hat);
    return out;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) raise(errc::bad_input, "quantile outside (0, 1)");
    // Acklam's approximation
    static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1);
    }
    // one Halley refinement against erfc
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
    return x;
}

namespace {

void push_cell(ComparisonReport& rep, const std::string& name, double analytic,
               const std::vector<std::vector<double>>& rep_props, size_t flat) {
    int k = (int)rep_props.size();
    double mean = 0.0;
    for (const auto& r : rep_props) mean += r[flat];
    mean /= k;
    double ss = 0.0;
    for (const auto& r : rep_props) ss += (r[flat] - mean) * (r[flat] - mean);
    double se = k > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
    ComparisonCell cell{name, analytic, mean, se, 0.0};
    if (se > 0.0)
        cell.z = (mean - analytic) / se;
    else
        cell.z = (std::abs(mean - analytic) < 1e-12) ? 0.0 : INFINITY;
    rep.cells.push_back(cell);
}

} // namespace

ComparisonReport compare(const SolveResult& analytic, const EmpiricalReport& empirical,
                         double alpha, double prob_floor) {
    const int a = empirical.a, b = empirical.b;
    const int nsizes = b - a + 1;
    const int cap = (int)empirical.arb_dormant.size() - 1;
    ComparisonReport rep;
    rep.alpha = alpha;

    const auto& dep = analytic.departure;
    const auto& arb = analytic.arbitrary;
    const double dormant_weight = analytic.model.delta_p() == 1 ? 0.0 : 1.0;

    // departure joint and vacation-termination cells share the event law
    for (int n = 0; n <= std::min(cap, dep.n_max); ++n) {
        for (int c = 0; c < nsizes; ++c) {
            double pa = dep.p_joint[n][c];
            if (pa < prob_floor) continue;
            push_cell(rep, "dep[" + std::to_string(n) + "][r=" + std::to_string(a + c) + "]",
                      pa, empirical.rep_dep_prop, (size_t)n * nsizes + c);
        }
    }
    for (int n = 0; n <= std::min(cap, dep.n_max); ++n) {
        double qa = dep.q_term[n];
        if (qa < prob_floor) continue;
        push_cell(rep, "vacend[" + std::to_string(n) + "]", qa, empirical.rep_qterm_prop,
                  (size_t)n);
    }
    // arbitrary-epoch cells: dormant, vacation, busy
    int stride = 2 + nsizes;
    for (int n = 0; n <= std::min(cap, arb.n_max); ++n) {
        double pd = (n < a) ? dormant_weight * arb.p_dormant[n] : 0.0;
        if (pd >= prob_floor)
            push_cell(rep, "arb_dor[" + std::to_string(n) + "]", pd, empirical.rep_arb_prop,
                      (size_t)n * stride);
        double qv = arb.q_vac[n];
        if (qv >= prob_floor)
            push_cell(rep, "arb_vac[" + std::to_string(n) + "]", qv, empirical.rep_arb_prop,
                      (size_t)n * stride + 1);
        for (int c = 0; c < nsizes; ++c) {
            double pv = arb.p_joint[n][c];
            if (pv >= prob_floor)
                push_cell(rep,
                          "arb[" + std::to_string(n) + "][r=" + std::to_string(a + c) + "]", pv,
                          empirical.rep_arb_prop, (size_t)n * stride + 2 + c);
        }
    }
    // scalars
    auto scalar_cell = [&](const std::string& name, double analytic_v,
                           const ScalarEstimate& est) {
        ComparisonCell cell{name, analytic_v, est.mean, est.std_error, 0.0};
        if (est.std_error > 0.0)
            cell.z = (est.mean - analytic_v) / est.std_error;
        else
            cell.z = (std::abs(est.mean - analytic_v) < 1e-12) ? 0.0 : INFINITY;
        rep.cells.push_back(cell);
    };
    scalar_cell("L", analytic.report.L, empirical.L);
    scalar_cell("L_q", analytic.report.L_q, empirical.L_q);
    scalar_cell("P_busy", analytic.report.P_busy, empirical.P_busy);
    scalar_cell("tau", analytic.rates.tau, empirical.tau_hat);

    rep.n_tests = (int)rep.cells.size();
    rep.z_crit = normal_quantile(1.0 - alpha / (2.0 * std::max(rep.n_tests, 1)));
    for (const auto& c : rep.cells) {
        double az = std::abs(c.z);
        rep.max_abs_z = std::max(rep.max_abs_z, az);
        if (az > 3.0) ++rep.n_beyond_3sigma;
    }
    rep.pass = rep.max_abs_z <= rep.z_crit;
    return rep;
}

} // namespace bulkq
