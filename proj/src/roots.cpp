#include "bulkq/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace bulkq {

std::vector<cplx> poly_roots(const Polynomial& p) {
    if (p.degree() < 1) return {};
    const auto& c = p.coeffs();
    int d = p.degree();
    double lead = c[d];

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<cplx> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);

    // two Newton polish steps per root; skip when the derivative is tiny
    Polynomial dp = p.derivative();
    for (cplx& r : roots) {
        for (int step = 0; step < 2; ++step) {
            cplx f = p.eval(r);
            cplx fp = dp.eval(r);
            if (std::abs(fp) < 1e-14 * std::max(1.0, std::abs(f))) break;
            cplx next = r - f / fp;
            if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
            r = next;
        }
    }
    return roots;
}

std::vector<cplx> poly_roots_complex(const std::vector<cplx>& coeffs) {
    // trim trailing near-zeros
    std::vector<cplx> c = coeffs;
    double scale = 0.0;
    for (const cplx& v : c) scale = std::max(scale, std::abs(v));
    while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
    int d = static_cast<int>(c.size()) - 1;
    if (d < 1) return {};

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);

    auto eval = [&](const cplx& x) {
        cplx acc{};
        for (int k = d; k >= 0; --k) acc = acc * x + c[k];
        return acc;
    };
    auto deval = [&](const cplx& x) {
        cplx acc{};
        for (int k = d; k >= 1; --k) acc = acc * x + c[k] * double(k);
        return acc;
    };
    for (cplx& r : roots) {
        for (int step = 0; step < 2; ++step) {
            cplx f = eval(r), fp = deval(r);
            if (std::abs(fp) < 1e-14 * std::max(1.0, std::abs(f))) break;
            cplx next = r - f / fp;
            if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
            r = next;
        }
    }
    return roots;
}

RootSet classify_roots(std::vector<cplx> raw) {
    RootSet out;
    std::vector<bool> used(raw.size(), false);
    for (size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        std::vector<cplx> cluster{raw[i]};
        used[i] = true;
        double tol = kClusterEps * std::max(1.0, std::abs(raw[i]));
        for (size_t j = i + 1; j < raw.size(); ++j) {
            if (!used[j]) {
                if (std::abs(raw[j] - raw[i]) < tol) {
                    cluster.push_back(raw[j]);
                    used[j] = true;
                }
            }
        }
        cplx centroid{};
        for (const cplx& v : cluster) centroid += v;
        centroid /= static_cast<double>(cluster.size());

        RootRecord rec;
        rec.value = centroid;
        rec.multiplicity = static_cast<int>(cluster.size());
        double mag = std::abs(centroid);
        if (mag < 1.0 - kCircleEps)
            rec.region = RootRegion::inside;
        else if (mag <= 1.0 + kCircleEps)
            rec.region = RootRegion::on_circle;
        else
            rec.region = RootRegion::outside;
        out.roots.push_back(rec);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const RootRecord& a, const RootRecord& b) {
        return std::abs(a.value) < std::abs(b.value);
    });
    return out;
}

Polynomial char_poly(const RationalFunction& K_b, int b) {
    K_b.check_valid();
    return K_b.den.shifted_up(b) - K_b.num;
}

RootSet char_roots(const RationalFunction& K_b, int b) {
    Polynomial P = char_poly(K_b, b);
    std::vector<cplx> raw = poly_roots(P);

    // identify the structural root at x = 1: Newton from 1.0, then snap
    Polynomial dP = P.derivative();
    double x1 = 1.0;
    {
        double f = P.eval(x1), fp = dP.eval(x1);
        if (std::abs(fp) > 0.0) x1 -= f / fp;
    }
    size_t nearest = 0;
    double best = 1e300;
    for (size_t i = 0; i < raw.size(); ++i) {
        double dd = std::abs(raw[i] - cplx(x1, 0.0));
        if (dd < best) {
            best = dd;
            nearest = i;
        }
    }
    if (best > 1e-6)
        raise(errc::root_count_mismatch, "no characteristic root near x = 1");
    raw[nearest] = cplx(1.0, 0.0);

    RootSet rs = classify_roots(std::move(raw));
    rs.unit_root_one = true;

    int disk = rs.unit_disk_count();
    if (disk != b)
        raise(errc::root_count_mismatch, "unit-disk root count " + std::to_string(disk) +
                                             " != b = " + std::to_string(b));
    for (const auto& r : rs.roots) {
        if (r.region != RootRegion::outside && r.multiplicity > 1)
            raise(errc::ill_conditioned, "repeated characteristic root inside the unit disk");
    }
    return rs;
}

RootSet merge_rootsets(const std::vector<RootSet>& sets) {
    RootSet out;
    bool unit = false;
    for (const auto& s : sets) {
        unit = unit || s.unit_root_one;
        for (const auto& r : s.roots) {
            bool merged = false;
            for (auto& o : out.roots) {
                if (std::abs(o.value - r.value) < kClusterEps * std::max(1.0, std::abs(r.value))) {
                    // weighted centroid keeps clusters tight across factors
                    double wo = o.multiplicity, wr = r.multiplicity;
                    o.value = (o.value * wo + r.value * wr) / (wo + wr);
                    o.multiplicity += r.multiplicity;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.roots.push_back(r);
        }
    }
    out.unit_root_one = unit;
    std::sort(out.roots.begin(), out.roots.end(), [](const RootRecord& a, const RootRecord& b) {
        return std::abs(a.value) < std::abs(b.value);
    });
    return out;
}

} // namespace bulkq
