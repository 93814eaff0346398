#include "bulkq/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace bulkq {

namespace {

constexpr double kHardNegative = -1e-8;
constexpr double kTailMassEps = 1e-12;
constexpr int kNMaxCap = 10000;

// ---------------------------------------------------------------------------
// Shared linear context: the numerator of the queue-length PGF at departure
// epochs is a linear form in the head unknowns p+_0..p+_{b-1} once the
// vacation heads are eliminated. These tables hold the elimination weights.
// ---------------------------------------------------------------------------
struct LinearCtx {
    int a = 1, b = 1, delta_p = 0;
    const BatchArrivalSpec* arrival = nullptr;
    EMatrix em;
    std::vector<double> w;                  // head seeds: Q+_n = sum w_i p+_{n-i}, n < a
    std::vector<double> h;                  // h_0..h_{b-1}
    std::vector<std::vector<double>> qfull; // Q+_n rows for a <= n <= b-1 over p+_j, j < a

    double g_at(int m) const { return arrival->g_at(m); }
    int gmax() const { return arrival->gmax(); }
};

LinearCtx make_linear_ctx(const ValidatedModel& model, const ComposedPgfs& pgfs) {
    LinearCtx ctx;
    ctx.a = model.service.a;
    ctx.b = model.service.b;
    ctx.delta_p = model.delta_p();
    ctx.arrival = &model.arrival;
    ctx.em = e_matrix(model.arrival, ctx.a);
    ctx.h = pgfs.H.series(std::max(ctx.b, ctx.a));
    ctx.w = vacation_seed_coeffs(std::vector<double>(ctx.h.begin(), ctx.h.begin() + ctx.a),
                                 ctx.a, ctx.delta_p);
    // Q+_n = sum_{m<a} h_{n-m} (p+_m + delta_p Q+_m) for n >= a
    for (int n = ctx.a; n <= ctx.b - 1; ++n) {
        std::vector<double> row(ctx.a, 0.0);
        for (int j = 0; j < ctx.a; ++j) {
            double v = (n - j < (int)ctx.h.size()) ? ctx.h[n - j] : 0.0;
            if (ctx.delta_p == 1) {
                for (int m = j; m < ctx.a; ++m)
                    if (n - m >= 0 && n - m < (int)ctx.h.size()) v += ctx.h[n - m] * ctx.w[m - j];
            }
            row[j] = v;
        }
        ctx.qfull.push_back(std::move(row));
    }
    return ctx;
}

// Per-unknown coefficients of the Eq-(31)-style numerator Lambda_Q(x),
// evaluated with any scalar that supports ring operations (complex points for
// the root conditions, Taylor jets at x = 1 for the normalization row and the
// closed-form moments).
template <class S>
S scaled(const S& v, double s) {
    return v * s;
}

template <class S>
std::vector<S> lambda_q_phi(const LinearCtx& ctx, const std::vector<S>& xpow,
                            const std::vector<S>& K, const S& H, const S& one) {
    const int a = ctx.a, b = ctx.b;
    std::vector<S> phi(b);

    S Kb = K[b - ctx.a];
    S Hm1 = H - one;

    for (int n = 0; n < a; ++n) phi[n] += xpow[n] * Hm1 * Kb;

    for (int n = 0; n < a; ++n) {
        S f2 = xpow[n] * ((ctx.delta_p == 1 ? H : S{}) - one) * Kb;
        if (ctx.delta_p == 0) {
            S inner{};
            for (int j = n; j <= a - 1; ++j) {
                double ejn = ctx.em.at(j, n);
                if (ejn == 0.0) continue;
                for (int i = ctx.a; i <= b; ++i) {
                    double gij = ctx.g_at(i - j);
                    if (gij != 0.0) inner += scaled(K[i - ctx.a], gij * ejn);
                }
                S over{};
                for (int i = std::max(b + 1 - j, 1); i <= ctx.gmax(); ++i) {
                    double gi = ctx.g_at(i);
                    if (gi != 0.0) over += scaled(xpow[i + j - b], gi * ejn);
                }
                inner += over * Kb;
            }
            f2 += xpow[b] * inner;
        }
        for (int j = 0; j <= n; ++j) phi[j] += scaled(f2, ctx.w[n - j]);
    }

    for (int n = a; n <= b - 1; ++n) {
        S f3 = xpow[b] * K[n - ctx.a] - xpow[n] * Kb;
        phi[n] += f3;
        const auto& row = ctx.qfull[n - a];
        for (int j = 0; j < a; ++j)
            if (row[j] != 0.0) phi[j] += scaled(f3, row[j]);
    }
    return phi;
}

std::vector<cplx> eval_powers(const cplx& x, int upto) {
    std::vector<cplx> p(upto + 1);
    p[0] = 1.0;
    for (int k = 1; k <= upto; ++k) p[k] = p[k - 1] * x;
    return p;
}

std::vector<TaylorSeries<double>> jet_powers(double center, int upto, int order) {
    std::vector<TaylorSeries<double>> p(upto + 1);
    p[0] = TaylorSeries<double>::constant(1.0, order);
    auto x = TaylorSeries<double>::variable(center, order);
    for (int k = 1; k <= upto; ++k) p[k] = p[k - 1] * x;
    return p;
}

int max_power_needed(const LinearCtx& ctx) {
    return std::max(ctx.b, ctx.gmax() + ctx.a - 1) + 1;
}

// Numeric Lambda_Q / D jets at x = 1 for the solved boundary: the L'Hospital
// route to P+(1), P+'(1), ...
TaylorSeries<double> p_plus_jet(const LinearCtx& ctx, const ComposedPgfs& pgfs,
                                const std::vector<double>& p_head, int order) {
    int ord = order + 1; // one order lost to deflation
    auto xp = jet_powers(1.0, max_power_needed(ctx), ord);
    std::vector<TaylorSeries<double>> K;
    for (const auto& k : pgfs.K) K.push_back(k.jet(1.0, ord));
    auto H = pgfs.H.jet(1.0, ord);
    auto one = TaylorSeries<double>::constant(1.0, ord);
    auto phi = lambda_q_phi(ctx, xp, K, H, one);
    TaylorSeries<double> num = TaylorSeries<double>::constant(0.0, ord);
    for (int u = 0; u < ctx.b; ++u) num += phi[u] * p_head[u];
    TaylorSeries<double> den = xp[ctx.b] - K[ctx.b - ctx.a];
    return num.deflated(1, 1e-5) / den.deflated(1, 1e-12);
}

// Q+(x) = (HeadP(x) + delta_p HeadQ(x)) H(x)
TaylorSeries<double> q_plus_jet(const LinearCtx& ctx, const ComposedPgfs& pgfs,
                                const BoundaryUnknowns& bnd, int order) {
    Polynomial heads(
        std::vector<double>(bnd.p_plus_head.begin(), bnd.p_plus_head.begin() + ctx.a));
    if (ctx.delta_p == 1) heads += Polynomial(bnd.q_plus_head);
    return poly_jet(heads, 1.0, order) * pgfs.H.jet(1.0, order);
}

// Real z-plane factorization of a law's PGF denominator with exact exponents
// (generic root finding scatters repeated roots; the law structure does not).
// Each entry is a factor polynomial in z with value 1 at z = 0.
std::vector<std::pair<Polynomial, int>> law_den_z_factors(const ServiceTimeDist& dist) {
    return std::visit(
        [](const auto& d) -> std::vector<std::pair<Polynomial, int>> {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GeometricDist>) {
                if (d.p >= 1.0) return {};
                return {{Polynomial({1.0, -(1.0 - d.p)}), 1}};
            } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                if (d.mu >= 1.0) return {};
                return {{Polynomial({1.0, -(1.0 - d.mu)}), d.r}};
            } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                // det(I - zT) = prod (1 - lambda_i z) over eigenvalues of T
                int nu = d.order();
                Eigen::MatrixXd T(nu, nu);
                for (int i = 0; i < nu; ++i)
                    for (int j = 0; j < nu; ++j) T(i, j) = d.T[i][j];
                Eigen::VectorXcd ev = T.eigenvalues();
                std::vector<cplx> lams;
                for (int i = 0; i < nu; ++i)
                    if (std::abs(ev(i)) > 1e-12) lams.push_back(ev(i));
                // cluster; defective blocks scatter ~ eps^(1/nu)
                double tol = std::max(kClusterEps, 20.0 * std::pow(1e-16, 1.0 / nu));
                std::vector<std::pair<cplx, int>> clusters;
                std::vector<bool> used(lams.size(), false);
                for (size_t i = 0; i < lams.size(); ++i) {
                    if (used[i]) continue;
                    cplx sum = lams[i];
                    int cnt = 1;
                    used[i] = true;
                    for (size_t j = i + 1; j < lams.size(); ++j) {
                        if (!used[j] && std::abs(lams[j] - lams[i]) < tol) {
                            sum += lams[j];
                            ++cnt;
                            used[j] = true;
                        }
                    }
                    clusters.push_back({sum / double(cnt), cnt});
                }
                std::vector<std::pair<Polynomial, int>> out;
                std::vector<bool> taken(clusters.size(), false);
                for (size_t i = 0; i < clusters.size(); ++i) {
                    if (taken[i]) continue;
                    auto [lam, cnt] = clusters[i];
                    if (std::abs(lam.imag()) <= 1e-9 * std::abs(lam)) {
                        out.push_back({Polynomial({1.0, -lam.real()}), cnt});
                    } else {
                        // pair with the conjugate cluster into a real quadratic
                        bool paired = false;
                        for (size_t j = i + 1; j < clusters.size(); ++j) {
                            if (taken[j]) continue;
                            if (std::abs(clusters[j].first - std::conj(lam)) <
                                tol * std::max(1.0, std::abs(lam))) {
                                if (clusters[j].second != cnt)
                                    raise(errc::ill_conditioned,
                                          "conjugate eigenvalue multiplicities differ");
                                taken[j] = true;
                                paired = true;
                                break;
                            }
                        }
                        if (!paired)
                            raise(errc::ill_conditioned,
                                  "complex eigenvalue without a conjugate partner");
                        out.push_back(
                            {Polynomial({1.0, -2.0 * lam.real(), std::norm(lam)}), cnt});
                    }
                    taken[i] = true;
                }
                return out;
            } else {
                return {}; // deterministic / empirical PGFs are polynomials
            }
        },
        dist.law);
}

// Composed fine denominator atoms of S(A(x)): each z-factor substituted with
// A and normalized to value 1 at the origin. Their exponent-weighted product
// equals the normalized composed denominator exactly.
std::vector<std::pair<Polynomial, int>> law_den_fine_atoms(const ServiceTimeDist& dist,
                                                           const Polynomial& A) {
    std::vector<std::pair<Polynomial, int>> out;
    for (auto& [zf, exp] : law_den_z_factors(dist)) {
        Polynomial atom = zf.compose(A);
        double at0 = atom[0];
        if (at0 == 0.0) raise(errc::pole_evaluation, "denominator factor vanishes at origin");
        atom *= 1.0 / at0;
        out.push_back({std::move(atom), exp});
    }
    return out;
}

RootRegion classify_magnitude(const cplx& x) {
    double mag = std::abs(x);
    if (mag < 1.0 - kCircleEps) return RootRegion::inside;
    if (mag <= 1.0 + kCircleEps) return RootRegion::on_circle;
    return RootRegion::outside;
}

double tail_g(const BatchArrivalSpec& arrival, int from) {
    double s = 0.0;
    for (int i = std::max(from, 1); i <= arrival.gmax(); ++i) s += arrival.g_at(i);
    return s;
}

} // namespace

// ---------------------------------------------------------------------------
// e-matrix and vacation seeds
// ---------------------------------------------------------------------------

EMatrix e_matrix(const BatchArrivalSpec& arrival, int a) {
    if (a < 1) raise(errc::bad_threshold, "a must be >= 1");
    EMatrix em;
    em.a = a;
    em.e.resize(a);
    for (int n = 0; n <= a - 1; ++n) {
        em.e[n].assign(n + 1, 0.0);
        em.e[n][n] = 1.0;
        if (n >= 1) em.e[n][n - 1] = arrival.g_at(1);
        for (int i = n - 2; i >= 0; --i) {
            double acc = arrival.g_at(n - i);
            for (int j = i + 1; j <= n - 1; ++j) acc += em.e[n][j] * arrival.g_at(j - i);
            em.e[n][i] = acc;
        }
    }
    return em;
}

std::vector<double> vacation_seed_coeffs(const std::vector<double>& h, int a, int delta_p) {
    if (h.empty()) raise(errc::bad_input, "empty arrival-during-vacation series");
    if (h[0] >= 1.0 - 1e-12)
        raise(errc::degenerate_vacation, "h_0 >= 1: no arrivals can occur during a vacation");
    std::vector<double> w(a, 0.0);
    if (delta_p == 0) {
        for (int n = 0; n < a && n < (int)h.size(); ++n) w[n] = h[n];
    } else {
        double denom = 1.0 - h[0];
        w[0] = h[0] / denom;
        for (int n = 1; n < a; ++n) {
            double acc = (n < (int)h.size()) ? h[n] : 0.0;
            for (int i = 1; i <= n; ++i)
                if (i < (int)h.size()) acc += h[i] * w[n - i];
            w[n] = acc / denom;
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// composed PGFs
// ---------------------------------------------------------------------------

ComposedPgfs build_composed(const ValidatedModel& model) {
    ComposedPgfs out;
    out.a = model.service.a;
    out.b = model.service.b;
    out.A = arrival_slot_pgf(model.arrival);
    for (int i = out.a; i <= out.b; ++i)
        out.K.push_back(compose(pgf_rational(model.service.dist_for(i)), out.A));
    out.H = compose(pgf_rational(model.vacation.dist), out.A);
    return out;
}

// ---------------------------------------------------------------------------
// boundary unknowns
// ---------------------------------------------------------------------------

BoundaryUnknowns solve_boundary(const ValidatedModel& model, const ComposedPgfs& pgfs,
                                const RootSet& croots) {
    LinearCtx ctx = make_linear_ctx(model, pgfs);
    const int a = ctx.a, b = ctx.b;
    const int maxp = max_power_needed(ctx);

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(b, b);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(b);
    int row = 0;

    for (const auto& rec : croots.roots) {
        if (rec.region == RootRegion::outside) continue;
        if (std::abs(rec.value - cplx(1.0, 0.0)) < 1e-12) continue;
        double imag_tol = 1e-9 * std::max(1.0, std::abs(rec.value));
        if (rec.value.imag() < -imag_tol) continue; // conjugate handled by its partner
        auto xp = eval_powers(rec.value, maxp);
        std::vector<cplx> K;
        K.reserve(pgfs.K.size());
        for (const auto& k : pgfs.K) K.push_back(k.eval(rec.value));
        cplx H = pgfs.H.eval(rec.value);
        auto phi = lambda_q_phi(ctx, xp, K, H, cplx(1.0, 0.0));
        if (rec.value.imag() > imag_tol) {
            if (row + 1 >= b) raise(errc::root_count_mismatch, "too many boundary equations");
            for (int u = 0; u < b; ++u) {
                M(row, u) = phi[u].real();
                M(row + 1, u) = phi[u].imag();
            }
            row += 2;
        } else {
            if (row >= b) raise(errc::root_count_mismatch, "too many boundary equations");
            for (int u = 0; u < b; ++u) M(row, u) = phi[u].real();
            row += 1;
        }
    }
    if (row != b - 1)
        raise(errc::root_count_mismatch,
              "expected " + std::to_string(b - 1) + " root equations, assembled " +
                  std::to_string(row));

    // normalization: P+(1) + Q+(1) = 1 with P+(1) = Lambda_Q'(1) / D'(1)
    {
        const int ord = 2;
        auto xp = jet_powers(1.0, maxp, ord);
        std::vector<TaylorSeries<double>> K;
        for (const auto& k : pgfs.K) K.push_back(k.jet(1.0, ord));
        auto H = pgfs.H.jet(1.0, ord);
        auto one = TaylorSeries<double>::constant(1.0, ord);
        auto phi = lambda_q_phi(ctx, xp, K, H, one);
        TaylorSeries<double> D = xp[b] - K[b - a];
        double dprime = D[1]; // b - K_b'(1) > 0 under stability
        for (int u = 0; u < b; ++u) {
            double weight = phi[u][1] / dprime;
            if (u < a) {
                weight += 1.0;
                if (ctx.delta_p == 1)
                    for (int n = u; n < a; ++n) weight += ctx.w[n - u];
            }
            M(b - 1, u) = weight;
        }
        rhs(b - 1) = 1.0;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    double cond = svd.singularValues()(0) / svd.singularValues()(b - 1);
    if (!std::isfinite(cond) || cond > 1e12)
        raise(errc::singular_system, "boundary system condition number " + std::to_string(cond));

    Eigen::VectorXd sol = M.partialPivLu().solve(rhs);

    BoundaryUnknowns out;
    out.condition_number = cond;
    out.p_plus_head.resize(b);
    for (int u = 0; u < b; ++u) {
        double v = sol(u);
        if (v < kHardNegative)
            raise(errc::negative_probability,
                  "boundary unknown p+_" + std::to_string(u) + " = " + std::to_string(v));
        if (v < 0.0) {
            out.warnings.push_back("clamped p+_" + std::to_string(u) + " = " +
                                   std::to_string(v) + " to 0");
            v = 0.0;
        }
        out.p_plus_head[u] = v;
    }
    out.q_plus_head.assign(a, 0.0);
    for (int n = 0; n < a; ++n)
        for (int m = 0; m <= n; ++m) out.q_plus_head[n] += ctx.w[n - m] * out.p_plus_head[m];

    // post-solve residual: Lambda_Q must vanish at every in-disk root
    double max_resid = 0.0;
    for (const auto& rec : croots.roots) {
        if (rec.region == RootRegion::outside) continue;
        auto xp = eval_powers(rec.value, maxp);
        std::vector<cplx> K;
        for (const auto& k : pgfs.K) K.push_back(k.eval(rec.value));
        cplx H = pgfs.H.eval(rec.value);
        auto phi = lambda_q_phi(ctx, xp, K, H, cplx(1.0, 0.0));
        cplx val{};
        double scale = 0.0;
        for (int u = 0; u < b; ++u) {
            val += phi[u] * out.p_plus_head[u];
            scale += std::abs(phi[u]) * std::max(out.p_plus_head[u], 1e-3);
        }
        if (scale > 0.0) max_resid = std::max(max_resid, std::abs(val) / scale);
    }
    out.max_root_residual = max_resid;
    return out;
}

// ---------------------------------------------------------------------------
// departure-epoch distribution
// ---------------------------------------------------------------------------

namespace {

// Q+_n for 0 <= n <= N from the solved heads: coefficient matching of the
// vacation-termination PGF (head + delta_p vacation head) * H.
std::vector<double> q_plus_series(const LinearCtx& ctx, const ComposedPgfs& pgfs,
                                  const BoundaryUnknowns& bnd, int N) {
    auto h = pgfs.H.series(N + 1);
    std::vector<double> q(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
        double acc = 0.0;
        for (int m = 0; m < ctx.a && m <= n; ++m) {
            double head = bnd.p_plus_head[m];
            if (ctx.delta_p == 1) head += bnd.q_plus_head[m];
            acc += head * h[n - m];
        }
        q[n] = acc;
    }
    return q;
}

std::vector<double> compute_EQ(const LinearCtx& ctx, const BoundaryUnknowns& bnd) {
    // EQ_i = sum_{m<a} Q+_m sum_{j=m}^{a-1} e_{j,m} g_{i-j}, i in [a, b]
    std::vector<double> EQ(ctx.b - ctx.a + 1, 0.0);
    for (int i = ctx.a; i <= ctx.b; ++i) {
        double acc = 0.0;
        for (int m = 0; m < ctx.a; ++m) {
            double inner = 0.0;
            for (int j = m; j <= ctx.a - 1; ++j) inner += ctx.em.at(j, m) * ctx.g_at(i - j);
            acc += bnd.q_plus_head[m] * inner;
        }
        EQ[i - ctx.a] = acc;
    }
    return EQ;
}

} // namespace

BColumnParts build_b_column(const ValidatedModel& model, const ComposedPgfs& pgfs,
                            const RootSet& croots, const BoundaryUnknowns& bnd) {
    LinearCtx ctx = make_linear_ctx(model, pgfs);
    const int a = ctx.a, b = ctx.b;
    const int nsizes = b - a + 1;

    std::vector<double> qp = q_plus_series(ctx, pgfs, bnd, std::max(b - 1, a - 1));
    auto EQ = compute_EQ(ctx, bnd);
    double one_minus_dp = ctx.delta_p == 1 ? 0.0 : 1.0;

    // C_i for i in [a, b-1] and the u-weights for the cleared numerator
    std::vector<double> C(std::max(nsizes - 1, 0), 0.0);
    std::vector<double> u(nsizes, 0.0);
    for (int i = a; i <= b - 1; ++i) {
        C[i - a] = one_minus_dp * EQ[i - a] + bnd.p_plus_head[i] + qp[i];
        u[i - a] = C[i - a];
    }
    u[b - a] = one_minus_dp * EQ[b - a];

    const Polynomial& N_b = pgfs.K_b().num;
    const Polynomial& D_b = pgfs.K_b().den;
    const Polynomial& N_H = pgfs.H.num;
    const Polynomial& D_H = pgfs.H.den;
    Polynomial P = D_b.shifted_up(b) - N_b;

    FactoredRational fr;
    // coarse atoms for the numerator terms
    int at_P = fr.add_atom(P);
    int at_DH = fr.add_atom(D_H);
    std::vector<int> at_N(nsizes), at_D(nsizes);
    for (int i = 0; i < nsizes; ++i) {
        at_N[i] = fr.add_atom(pgfs.K[i].num);
        at_D[i] = fr.add_atom(pgfs.K[i].den);
    }

    Polynomial head_p(std::vector<double>(bnd.p_plus_head.begin(), bnd.p_plus_head.begin() + a));
    Polynomial head_q(bnd.q_plus_head);
    std::vector<double> mid(b, 0.0);
    for (int n = a; n <= b - 1; ++n) mid[n] = bnd.p_plus_head[n] + qp[n];
    Polynomial mid_pq(mid);

    Polynomial overshoot;
    if (one_minus_dp != 0.0) {
        std::vector<double> oc;
        for (int n = 0; n < a; ++n) {
            for (int j = n; j <= a - 1; ++j) {
                double w = bnd.q_plus_head[n] * ctx.em.at(j, n);
                if (w == 0.0) continue;
                for (int i = std::max(b + 1 - j, 1); i <= ctx.gmax(); ++i) {
                    int pw = i + j - b;
                    if ((int)oc.size() <= pw) oc.resize(pw + 1, 0.0);
                    oc[pw] += w * ctx.g_at(i);
                }
            }
        }
        overshoot = Polynomial(std::move(oc));
    }

    auto parts_d_range = [&](int skip_idx, int upto) { // D_l atoms for l in [a, upto], l != skip
        std::vector<FactoredRational::Part> ps;
        for (int l = 0; l <= upto - a; ++l)
            if (l != skip_idx) ps.push_back({at_D[l], 1});
        return ps;
    };

    // group 1: N_b * prod_{l<b} D_l * (head combinations)
    Polynomial grp = (N_H - D_H) * head_p;
    {
        Polynomial hq_fac = (ctx.delta_p == 1 ? N_H : Polynomial()) - D_H;
        grp += hq_fac * head_q;
    }
    grp -= D_H * mid_pq;
    if (!grp.is_zero()) {
        FactoredRational::Term t;
        t.weight = 1.0;
        t.parts = parts_d_range(nsizes - 1, b); // prod over [a, b-1]
        t.parts.push_back({at_N[nsizes - 1], 1});
        t.parts.push_back({fr.add_atom(grp), 1});
        fr.num_terms.push_back(std::move(t));
    }
    if (!overshoot.is_zero()) {
        FactoredRational::Term t;
        t.weight = 1.0;
        t.xpow = b;
        t.parts = parts_d_range(nsizes - 1, b);
        t.parts.push_back({at_N[nsizes - 1], 1});
        t.parts.push_back({at_DH, 1});
        t.parts.push_back({fr.add_atom(overshoot), 1});
        fr.num_terms.push_back(std::move(t));
    }
    // group 2: x^b D_H sum_i u_i N_i prod_{l in [a,b], l != i} D_l
    for (int i = 0; i < nsizes; ++i) {
        if (u[i] == 0.0) continue;
        FactoredRational::Term t;
        t.weight = u[i];
        t.xpow = b;
        t.parts = parts_d_range(i, b);
        t.parts.push_back({at_N[i], 1});
        t.parts.push_back({at_DH, 1});
        fr.num_terms.push_back(std::move(t));
    }
    // group 3: -P D_H sum_{i<b} C_i N_i prod_{l in [a,b-1], l != i} D_l
    for (int i = 0; i + 1 < nsizes; ++i) {
        if (C[i] == 0.0) continue;
        FactoredRational::Term t;
        t.weight = -C[i];
        t.parts = parts_d_range(i, b - 1);
        t.parts.push_back({at_N[i], 1});
        t.parts.push_back({at_P, 1});
        t.parts.push_back({at_DH, 1});
        fr.num_terms.push_back(std::move(t));
    }

    // denominator: P times the fine factorizations of D_H and D_l (l < b)
    fr.den.weight = 1.0;
    fr.den.xpow = 0;
    fr.den.parts.push_back({at_P, 1});
    RootSet pole_set = croots;
    auto add_fine = [&](const ServiceTimeDist& dist) {
        for (auto& [atom, exp] : law_den_fine_atoms(dist, pgfs.A)) {
            int id = fr.add_atom(atom);
            fr.den.parts.push_back({id, exp});
            for (const cplx& x : poly_roots(fr.atoms[id])) {
                RootRecord rec;
                rec.value = x;
                rec.multiplicity = exp;
                rec.region = classify_magnitude(x);
                if (rec.region != RootRegion::outside)
                    raise(errc::ill_conditioned, "composed PGF pole inside the unit disk");
                pole_set.roots.push_back(rec);
            }
        }
    };
    for (int i = a; i <= b - 1; ++i) add_fine(model.service.dist_for(i));
    add_fine(model.vacation.dist);

    BColumnParts parts;
    parts.roots = merge_rootsets({pole_set});
    parts.lambda = fr.num_expand();
    parts.dpoly = fr.den_expand();
    parts.fr = std::move(fr);
    if (parts.roots.total_multiplicity() != parts.dpoly.degree())
        raise(errc::root_count_mismatch,
              "pole multiplicities " + std::to_string(parts.roots.total_multiplicity()) +
                  " do not match deg D = " + std::to_string(parts.dpoly.degree()));
    return parts;
}

DepartureDistribution departure_joint(const ValidatedModel& model, const ComposedPgfs& pgfs,
                                      const RootSet& croots, const BoundaryUnknowns& bnd,
                                      int n_max_hint) {
    LinearCtx ctx = make_linear_ctx(model, pgfs);
    const int a = ctx.a, b = ctx.b;
    const int nsizes = b - a + 1;

    DepartureDistribution dep;
    dep.a = a;
    dep.b = b;

    BColumnParts parts = build_b_column(model, pgfs, croots, bnd);
    dep.pfe_tail = partial_fractions_factored(parts.fr, parts.roots);
    {
        auto red = deflate_unit_roots(parts.lambda, parts.dpoly, parts.roots);
        dep.b_num_reduced = red.num;
        dep.b_den_reduced = red.den;
    }

    std::vector<double> qp_head_ext = q_plus_series(ctx, pgfs, bnd, std::max(b - 1, a - 1));
    auto EQ = compute_EQ(ctx, bnd);
    double one_minus_dp = ctx.delta_p == 1 ? 0.0 : 1.0;
    dep.C.assign(std::max(nsizes - 1, 0), 0.0);
    for (int i = a; i <= b - 1; ++i)
        dep.C[i - a] = one_minus_dp * EQ[i - a] + bnd.p_plus_head[i] + qp_head_ext[i];

    // closed-form totals
    double col_b_total = dep.pfe_tail.total_sum();
    dep.col_sums.assign(nsizes, 0.0);
    for (int i = a; i <= b - 1; ++i) dep.col_sums[i - a] = dep.C[i - a]; // sum_n k = 1
    dep.col_sums[nsizes - 1] = col_b_total;
    dep.q_plus_total = 0.0;
    for (int n = 0; n < a; ++n) {
        dep.q_plus_total += bnd.p_plus_head[n];
        if (ctx.delta_p == 1) dep.q_plus_total += bnd.q_plus_head[n];
    }
    dep.p_plus_total = std::accumulate(dep.col_sums.begin(), dep.col_sums.end(), 0.0);
    dep.normalization = dep.p_plus_total + dep.q_plus_total;

    // choose N so that the residual tail mass is below kTailMassEps
    int N = n_max_hint > 0 ? std::max(n_max_hint, b + 1) : 256;
    bool auto_n = n_max_hint <= 0;
    std::vector<std::vector<double>> kser(nsizes - 1);
    std::vector<double> bcol, qser;
    while (true) {
        for (int i = 0; i < nsizes - 1; ++i) kser[i] = pgfs.K[i].series(N + b + 1);
        bcol = dep.pfe_tail.coeffs(N + b + 1);
        qser = q_plus_series(ctx, pgfs, bnd, N + b);
        if (!auto_n) break;
        double prefix = 0.0;
        for (int n = 0; n <= N; ++n) {
            for (int i = 0; i < nsizes - 1; ++i) prefix += dep.C[i] * kser[i][n];
            prefix += bcol[n] + qser[n];
        }
        double tail = dep.normalization - prefix;
        if (tail < kTailMassEps || N >= kNMaxCap) {
            if (tail >= kTailMassEps)
                dep.warnings.push_back("tail mass " + std::to_string(tail) +
                                       " above target at the N cap");
            break;
        }
        N = std::min(2 * N, kNMaxCap);
    }
    dep.n_max = N;

    dep.p_joint.assign(N + 1, std::vector<double>(nsizes, 0.0));
    dep.q_term.assign(N + 1, 0.0);
    dep.p_plus.assign(N + b + 1, 0.0);
    dep.q_plus.assign(N + b + 1, 0.0);
    double worst = 0.0;
    for (int n = 0; n <= N + b; ++n) {
        double pn = 0.0;
        for (int i = 0; i < nsizes - 1; ++i) {
            double v = dep.C[i] * kser[i][n];
            worst = std::min(worst, v);
            if (v < 0.0) v = 0.0;
            pn += v;
            if (n <= N) dep.p_joint[n][i] = v;
        }
        double vb = bcol[n];
        worst = std::min(worst, vb);
        if (vb < 0.0) vb = 0.0;
        pn += vb;
        if (n <= N) dep.p_joint[n][nsizes - 1] = vb;
        dep.p_plus[n] = pn;
        double qv = qser[n];
        worst = std::min(worst, qv);
        if (qv < 0.0) qv = 0.0;
        dep.q_plus[n] = qv;
        if (n <= N) dep.q_term[n] = qv;
    }
    if (worst < kHardNegative)
        raise(errc::negative_probability,
              "departure joint entry " + std::to_string(worst) + " below clamp threshold");
    if (worst < 0.0)
        dep.warnings.push_back("clamped departure entries as low as " + std::to_string(worst));
    return dep;
}

// ---------------------------------------------------------------------------
// tau / omega
// ---------------------------------------------------------------------------

TauOmega tau_omega(const ValidatedModel& model, const DepartureDistribution& dep,
                   const BoundaryUnknowns& bnd) {
    const int a = model.service.a, b = model.service.b;
    const int delta_p = model.delta_p();
    EMatrix em = e_matrix(model.arrival, a);
    double vbar = model.mean_vacation;

    double omega = 0.0;
    for (int n = 0; n < a; ++n) {
        omega += bnd.p_plus_head[n] * vbar;
        if (delta_p == 1) {
            omega += bnd.q_plus_head[n] * vbar;
        } else {
            double mn = 0.0;
            for (int j = n; j <= a - 1; ++j) {
                double inner = 0.0;
                for (int i = a; i <= b; ++i) inner += model.arrival.g_at(i - j) * model.s(i);
                inner += tail_g(model.arrival, b + 1 - j) * model.s(b);
                mn += em.at(j, n) * inner;
            }
            omega += bnd.q_plus_head[n] * mn;
        }
    }
    for (int n = a; n <= b; ++n) omega += (dep.p_plus[n] + dep.q_plus[n]) * model.s(n);
    double head_pq = 0.0;
    for (int n = 0; n <= b; ++n) head_pq += dep.p_plus[n] + dep.q_plus[n];
    double tail = dep.normalization - head_pq; // sum_{n > b} (p+_n + Q+_n), closed form
    omega += tail * model.s(b);

    double estar = model.arrival.lambda * omega;
    if (delta_p == 0) {
        double dsum = 0.0;
        for (int n = 0; n < a; ++n)
            for (int j = n; j <= a - 1; ++j) dsum += em.at(j, n) * bnd.q_plus_head[n];
        estar += dsum;
    }

    TauOmega out;
    out.omega = omega;
    out.e_star = estar;
    out.tau = model.arrival.lambda / estar;
    return out;
}

// ---------------------------------------------------------------------------
// arbitrary-epoch distribution
// ---------------------------------------------------------------------------

ArbitraryDistribution arbitrary_dist(const ValidatedModel& model, const ComposedPgfs& pgfs,
                                     const RootSet& croots, const BoundaryUnknowns& bnd,
                                     const DepartureDistribution& dep, const TauOmega& to) {
    (void)croots;
    LinearCtx ctx = make_linear_ctx(model, pgfs);
    const int a = ctx.a, b = ctx.b;
    const int nsizes = b - a + 1;
    const int N = dep.n_max;
    const double sigma = 1.0 / to.e_star;
    const double one_minus_dp = ctx.delta_p == 1 ? 0.0 : 1.0;

    ArbitraryDistribution arb;
    arb.a = a;
    arb.b = b;
    arb.n_max = N;
    arb.delta_p = ctx.delta_p;
    arb.e_star = to.e_star;

    // dormant relation values (raw; weighted by (1 - delta_p) in marginals)
    arb.p_dormant.assign(a, 0.0);
    for (int n = 0; n < a; ++n) {
        double acc = 0.0;
        for (int m = 0; m <= n; ++m) acc += ctx.em.at(n, m) * bnd.q_plus_head[m];
        arb.p_dormant[n] = sigma * acc;
    }
    arb.dormant_total = std::accumulate(arb.p_dormant.begin(), arb.p_dormant.end(), 0.0);
    arb.dormant_moment = 0.0;
    for (int n = 0; n < a; ++n) arb.dormant_moment += n * arb.p_dormant[n];

    arb.p_joint.assign(N + 1, std::vector<double>(nsizes, 0.0));
    arb.q_vac.assign(N + 1, 0.0);

    // columns r in [a, b-1]: explicit start value, then the renewal recursion
    for (int r = a; r <= b - 1; ++r) {
        int col = r - a;
        double dorm = 0.0;
        for (int i = 0; i < a; ++i) dorm += model.arrival.g_at(r - i) * arb.p_dormant[i];
        arb.p_joint[0][col] =
            sigma * (dep.p_plus[r] + dep.q_plus[r] - dep.p_joint[0][col]) + one_minus_dp * dorm;
        for (int n = 1; n <= N; ++n) {
            double acc = 0.0;
            for (int i = 1; i <= std::min(n, ctx.gmax()); ++i)
                acc += model.arrival.g_at(i) * arb.p_joint[n - i][col];
            arb.p_joint[n][col] = acc - sigma * dep.p_joint[n][col];
        }
    }
    // column r = b: renewal recursion driven by the shifted departure tail
    {
        int col = nsizes - 1;
        for (int n = 0; n <= N; ++n) {
            double dorm = 0.0;
            for (int i = 0; i < a; ++i) dorm += model.arrival.g_at(n + b - i) * arb.p_dormant[i];
            double acc =
                sigma * (dep.p_plus[n + b] + dep.q_plus[n + b] - dep.p_joint[n][col]) +
                one_minus_dp * dorm;
            for (int i = 1; i <= std::min(n, ctx.gmax()); ++i)
                acc += model.arrival.g_at(i) * arb.p_joint[n - i][col];
            arb.p_joint[n][col] = acc;
        }
    }
    // vacation column
    {
        arb.q_vac[0] = sigma * (bnd.p_plus_head[0] - one_minus_dp * bnd.q_plus_head[0]);
        for (int n = 1; n <= N; ++n) {
            double acc = 0.0;
            for (int i = 1; i <= std::min(n, ctx.gmax()); ++i)
                acc += model.arrival.g_at(i) * arb.q_vac[n - i];
            if (n < a)
                acc += sigma * (bnd.p_plus_head[n] - one_minus_dp * bnd.q_plus_head[n]);
            else
                acc -= sigma * dep.q_plus[n];
            arb.q_vac[n] = acc;
        }
    }

    // ---- closed-form totals and first moments via jets at x = 1 ----
    const int ord = 4;
    Polynomial Gpoly;
    {
        std::vector<double> gc(ctx.gmax() + 1, 0.0);
        for (int m = 1; m <= ctx.gmax(); ++m) gc[m] = model.arrival.g_at(m);
        Gpoly = Polynomial(std::move(gc));
    }
    auto one = TaylorSeries<double>::constant(1.0, ord);
    auto oneg = (one - poly_jet(Gpoly, 1.0, ord)).deflated(1, 1e-9);

    arb.col_sums.assign(nsizes, 0.0);
    arb.col_moments.assign(nsizes, 0.0);
    for (int r = a; r <= b - 1; ++r) {
        int col = r - a;
        double k0 = (dep.C[col] != 0.0) ? dep.p_joint[0][col] / dep.C[col] : 0.0;
        auto numj = pgfs.K_of(r).jet(1.0, ord) * (-sigma * dep.C[col]) +
                    TaylorSeries<double>::constant(arb.p_joint[0][col] + sigma * dep.C[col] * k0,
                                                   ord);
        auto q = numj.deflated(1, 1e-5) / oneg;
        arb.col_sums[col] = q[0];
        arb.col_moments[col] = q[1];
    }
    {
        // r = b column via the generating-function assembly
        auto pplus_jet = p_plus_jet(ctx, pgfs, bnd.p_plus_head, ord);
        auto qplus_jet = q_plus_jet(ctx, pgfs, bnd, ord);
        Polynomial headbp(std::vector<double>(dep.p_plus.begin(), dep.p_plus.begin() + b + 1));
        Polynomial headbq(std::vector<double>(dep.q_plus.begin(), dep.q_plus.begin() + b + 1));
        auto rbjet = poly_jet(dep.b_num_reduced, 1.0, ord) / poly_jet(dep.b_den_reduced, 1.0, ord);
        auto invxb = one / poly_jet(Polynomial::constant(1.0).shifted_up(b), 1.0, ord);
        Polynomial wb;
        if (one_minus_dp != 0.0) {
            std::vector<double> wc;
            for (int n = 1; n <= ctx.gmax() + a - 1 - b; ++n) {
                double acc = 0.0;
                for (int i = 0; i < a; ++i)
                    acc += model.arrival.g_at(n + b - i) * arb.p_dormant[i];
                if ((int)wc.size() <= n) wc.resize(n + 1, 0.0);
                wc[n] = acc;
            }
            wb = Polynomial(std::move(wc));
        }
        auto numer = (invxb * (pplus_jet - poly_jet(headbp, 1.0, ord) + qplus_jet -
                               poly_jet(headbq, 1.0, ord)) -
                      (rbjet - TaylorSeries<double>::constant(dep.p_joint[0][nsizes - 1], ord))) *
                         sigma +
                     poly_jet(wb, 1.0, ord) * one_minus_dp +
                     TaylorSeries<double>::constant(arb.p_joint[0][nsizes - 1], ord);
        auto pbjet = numer.deflated(1, 1e-4) / oneg;
        arb.col_sums[nsizes - 1] = pbjet[0];
        arb.col_moments[nsizes - 1] = pbjet[1];
    }
    {
        // vacation column PGF: sigma (HeadP + dp HeadQ)(x) (1 - H(x)) / (1 - G(x))
        Polynomial heads(std::vector<double>(bnd.p_plus_head.begin(),
                                             bnd.p_plus_head.begin() + a));
        if (ctx.delta_p == 1) heads += Polynomial(bnd.q_plus_head);
        auto numj = poly_jet(heads, 1.0, ord + 1) *
                    (TaylorSeries<double>::constant(1.0, ord + 1) - pgfs.H.jet(1.0, ord + 1));
        auto on = (TaylorSeries<double>::constant(1.0, ord + 1) - poly_jet(Gpoly, 1.0, ord + 1))
                      .deflated(1, 1e-9);
        auto q = (numj.deflated(1, 1e-7) / on) * sigma;
        arb.q_total = q[0];
        arb.q_moment = q[1];
    }

    arb.total_mass = one_minus_dp * arb.dormant_total + arb.q_total +
                     std::accumulate(arb.col_sums.begin(), arb.col_sums.end(), 0.0);
#ifdef BULKQ_DEBUG_MASS
    std::fprintf(stderr, "dormant=%.9f q_total=%.9f q_mom=%.9f\n", arb.dormant_total,
                 arb.q_total, arb.q_moment);
    for (int c = 0; c < nsizes; ++c)
        std::fprintf(stderr, "col[%d] sum=%.9f mom=%.9f (array sum=%.9f)\n", a + c,
                     arb.col_sums[c], arb.col_moments[c], [&] {
                         double s = 0;
                         for (int n = 0; n <= N; ++n) s += arb.p_joint[n][c];
                         return s;
                     }());
    {
        double qs = 0;
        for (int n = 0; n <= N; ++n) qs += arb.q_vac[n];
        std::fprintf(stderr, "qvac array sum=%.9f\n", qs);
    }
#endif
    if (std::abs(arb.total_mass - 1.0) > 1e-6)
        raise(errc::mass_leak,
              "arbitrary-epoch mass " + std::to_string(arb.total_mass) + " != 1");

    double worst = 0.0;
    for (const auto& row : arb.p_joint)
        for (double v : row) worst = std::min(worst, v);
    for (double v : arb.q_vac) worst = std::min(worst, v);
    for (double v : arb.p_dormant) worst = std::min(worst, v);
    if (worst < kHardNegative)
        raise(errc::negative_probability,
              "arbitrary-epoch entry " + std::to_string(worst) + " below clamp threshold");
    if (worst < 0.0) {
        arb.warnings.push_back("clamped arbitrary-epoch entries as low as " +
                               std::to_string(worst));
        for (auto& row : arb.p_joint)
            for (double& v : row) v = std::max(v, 0.0);
        for (double& v : arb.q_vac) v = std::max(v, 0.0);
        for (double& v : arb.p_dormant) v = std::max(v, 0.0);
    }
    return arb;
}

ArbitraryDistribution pre_arrival_dist(const ArbitraryDistribution& arb) {
    // Bernoulli arrivals see time averages: identical by construction.
    return arb;
}

// ---------------------------------------------------------------------------
// marginals and measures
// ---------------------------------------------------------------------------

Marginals marginals(const ValidatedModel& model, const ArbitraryDistribution& arb) {
    const int a = arb.a, b = arb.b;
    const int nsizes = b - a + 1;
    const int N = arb.n_max;
    const double one_minus_dp = arb.delta_p == 1 ? 0.0 : 1.0;
    (void)model;

    Marginals m;
    m.P_busy = std::accumulate(arb.col_sums.begin(), arb.col_sums.end(), 0.0);
    m.Q_vac = arb.q_total;
    m.P_dor = arb.dormant_total;

    m.p_queue.assign(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
        double v = arb.q_vac[n];
        if (n < a) v += one_minus_dp * arb.p_dormant[n];
        for (int c = 0; c < nsizes; ++c) v += arb.p_joint[n][c];
        m.p_queue[n] = v;
    }

    m.p_sys.assign(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
        double v = 0.0;
        if (n < a) {
            v = one_minus_dp * arb.p_dormant[n] + arb.q_vac[n];
        } else if (n <= b) {
            for (int r = a; r <= std::min(b, n); ++r)
                if (n - r <= N) v += arb.p_joint[n - r][r - a];
            v += arb.q_vac[n];
        } else {
            for (int r = a; r <= b; ++r)
                if (n - r >= 0 && n - r <= N) v += arb.p_joint[n - r][r - a];
        }
        m.p_sys[n] = v;
    }

    m.p_ser.assign(nsizes, 0.0);
    if (m.P_busy > 0.0)
        for (int c = 0; c < nsizes; ++c) m.p_ser[c] = arb.col_sums[c] / m.P_busy;
    return m;
}

PerformanceReport measures(const ValidatedModel& model, const ArbitraryDistribution& arb,
                           const Marginals& marg) {
    const int a = arb.a, b = arb.b;
    const int nsizes = b - a + 1;
    const double one_minus_dp = arb.delta_p == 1 ? 0.0 : 1.0;

    PerformanceReport rep;
    rep.marg = marg;
    rep.P_busy = marg.P_busy;
    rep.Q_vac = marg.Q_vac;
    rep.P_dor = marg.P_dor;

    rep.L_q = one_minus_dp * arb.dormant_moment + arb.q_moment +
              std::accumulate(arb.col_moments.begin(), arb.col_moments.end(), 0.0);

    // system-content mean follows the marginal's range cases: the vacation
    // term enters for n <= b only
    double qn_head_moment = 0.0;
    for (int n = 0; n <= std::min(b, arb.n_max); ++n) qn_head_moment += n * arb.q_vac[n];
    rep.L = one_minus_dp * arb.dormant_moment + qn_head_moment;
    for (int c = 0; c < nsizes; ++c)
        rep.L += arb.col_moments[c] + (a + c) * arb.col_sums[c];

    rep.L_s = 0.0;
    for (int c = 0; c < nsizes; ++c) rep.L_s += (a + c) * marg.p_ser[c];

    double lg = model.arrival.lambda * model.mean_batch();
    rep.W = rep.L / lg;
    rep.W_q = rep.L_q / lg;
    return rep;
}

LqPlusReport lq_plus(const ValidatedModel& model, const ComposedPgfs& pgfs,
                     const BoundaryUnknowns& bnd, const DepartureDistribution& dep) {
    const int a = model.service.a, b = model.service.b;
    const int delta_p = model.delta_p();
    const double one_minus_dp = delta_p == 1 ? 0.0 : 1.0;
    EMatrix em = e_matrix(model.arrival, a);

    auto kb = pgfs.K_b().derivatives(1.0, 2);
    double kb1 = kb[1], kb2 = kb[2];
    auto hd = pgfs.H.derivatives(1.0, 2);
    double h1 = hd[1], h2 = hd[2];

    double g1 = 0.0;
    for (int n = 0; n < a; ++n) {
        double wgt = bnd.p_plus_head[n] + delta_p * bnd.q_plus_head[n];
        g1 += wgt * (h2 + 2.0 * n * h1 + 2.0 * h1 * kb1 + n * kb1);
    }
    double g2 = 0.0;
    for (int n = 0; n < a; ++n)
        g2 -= bnd.q_plus_head[n] * one_minus_dp * (n * (n - 1.0) + n * kb1 + kb2);
    std::vector<std::vector<double>> kderiv;
    for (int i = a; i <= b; ++i) kderiv.push_back(pgfs.K_of(i).derivatives(1.0, 2));
    double g3 = 0.0;
    if (one_minus_dp != 0.0) {
        double ksum = 0.0;
        for (int i = a; i <= b; ++i)
            ksum += kderiv[i - a][2] + 2.0 * b * kderiv[i - a][1] + b * (b - 1.0);
        for (int n = 0; n < a; ++n) {
            for (int j = n; j <= a - 1; ++j) {
                double inner = ksum;
                for (int i = std::max(b + j - 1, 1); i <= model.arrival.gmax(); ++i)
                    inner += model.arrival.g_at(i) *
                             (kb2 + 2.0 * (i + j) * kb1 + (i + j) * (i + j - 1.0));
                g3 += em.at(j, n) * inner;
            }
        }
        g3 *= one_minus_dp;
    }
    double g4 = 0.0;
    for (int n = a; n <= b - 1; ++n) {
        double wgt = dep.p_plus[n] + dep.q_plus[n];
        g4 += wgt * (b * (b - 1.0) + 2.0 * b * kderiv[n - a][1] + kderiv[n - a][2] -
                     (n * (n - 1.0) + 2.0 * n * kb1 + kb2));
    }
    double g5 = kb2 - b * (b - 1.0);

    LqPlusReport rep;
    rep.printed_formula = (g1 + g2 + g3 + g4 + g5) / (2.0 * (b - kb1));

    // extraction-based candidates for the comparison in the diagnostics
    LinearCtx ctx = make_linear_ctx(model, pgfs);
    auto pj = p_plus_jet(ctx, pgfs, bnd.p_plus_head, 2);
    auto qj = q_plus_jet(ctx, pgfs, bnd, 2);
    double p_total = pj[0], p_mom = pj[1];
    double q_mom = qj[1];
    rep.completions_only = p_total > 0.0 ? p_mom / p_total : 0.0;
    rep.with_vacations = p_mom + q_mom;
    return rep;
}

// ---------------------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------------------

SolveResult solve_model(const ValidatedModel& model, const SolveOptions& opts) {
    SolveResult res;
    res.model = model;

    ComposedPgfs pgfs = build_composed(model);
    res.croots = char_roots(pgfs.K_b(), model.service.b);
    res.boundary = solve_boundary(model, pgfs, res.croots);
    res.departure = departure_joint(model, pgfs, res.croots, res.boundary, opts.n_max_hint);
    res.rates = tau_omega(model, res.departure, res.boundary);
    res.arbitrary =
        arbitrary_dist(model, pgfs, res.croots, res.boundary, res.departure, res.rates);
    res.marg = marginals(model, res.arbitrary);
    res.report = measures(model, res.arbitrary, res.marg);
    res.lqp = lq_plus(model, pgfs, res.boundary, res.departure);
    res.report.L_q_plus = res.lqp.printed_formula;

    res.diag.condition_number = res.boundary.condition_number;
    res.diag.max_cancel_residual = res.boundary.max_root_residual;
    {
        Polynomial P = char_poly(pgfs.K_b(), model.service.b);
        double worst = 0.0;
        for (const auto& r : res.croots.roots) {
            double scale = 0.0, pw = 1.0;
            for (double c : P.coeffs()) {
                scale += std::abs(c) * pw;
                pw *= std::abs(r.value);
            }
            if (scale > 0.0) worst = std::max(worst, std::abs(P.eval(r.value)) / scale);
        }
        res.diag.max_root_residual = worst;
    }
    res.diag.departure_defect = std::abs(res.departure.normalization - 1.0);
    res.diag.mass_defect = std::abs(res.arbitrary.total_mass - 1.0);
    double dp_weight = model.delta_p() == 1 ? 0.0 : 1.0;
    res.diag.rate_identity_defect =
        std::abs(1.0 - dp_weight * res.arbitrary.dormant_total - res.rates.tau * res.rates.omega);
    for (const auto& w : res.boundary.warnings) res.diag.warnings.push_back(w);
    for (const auto& w : res.departure.warnings) res.diag.warnings.push_back(w);
    for (const auto& w : res.arbitrary.warnings) res.diag.warnings.push_back(w);
    return res;
}

} // namespace bulkq
