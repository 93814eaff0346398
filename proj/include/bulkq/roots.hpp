#pragma once

#include "bulkq/poly.hpp"
#include "bulkq/rational.hpp"

namespace bulkq {

enum class RootRegion { inside, on_circle, outside };

struct RootRecord {
    cplx value;
    int multiplicity = 1;
    RootRegion region = RootRegion::outside;
};

// Classified zeros of a polynomial with multiplicities obtained by clustering.
struct RootSet {
    std::vector<RootRecord> roots;
    bool unit_root_one = false;

    int total_multiplicity() const {
        int n = 0;
        for (const auto& r : roots) n += r.multiplicity;
        return n;
    }
    // Roots with |x| <= 1 + eps (inside or on the circle), with multiplicity.
    int unit_disk_count() const {
        int n = 0;
        for (const auto& r : roots)
            if (r.region != RootRegion::outside) n += r.multiplicity;
        return n;
    }
};

// Relative tolerance for |x| vs 1 when classifying roots against the unit
// circle. Misclassification must surface as root_count_mismatch, not silence.
inline constexpr double kCircleEps = 1e-9;
// Roots closer than this (relative) are merged into one cluster.
inline constexpr double kClusterEps = 1e-6;

// All complex roots of p via the companion-matrix eigenvalue method followed
// by two Newton polish steps per root. No multiplicity detection here.
std::vector<cplx> poly_roots(const Polynomial& p);

// Same for a polynomial with complex coefficients (ascending powers).
std::vector<cplx> poly_roots_complex(const std::vector<cplx>& coeffs);

// Groups nearby roots into clusters (centroid + multiplicity) and classifies
// them against the unit circle.
RootSet classify_roots(std::vector<cplx> raw);

// Characteristic roots of D(x) = x^b - K_b(x): the zeros of
// P(x) = x^b den_K(x) - num_K(x). Exactly b must lie in the closed unit disk,
// one of them x = 1 (snapped exactly); repeated in-disk roots are rejected.
RootSet char_roots(const RationalFunction& K_b, int b);

// The polynomial whose roots char_roots reports.
Polynomial char_poly(const RationalFunction& K_b, int b);

// Merges root sets (poles gathered from several denominator factors),
// clustering coincident roots across sets and summing multiplicities.
RootSet merge_rootsets(const std::vector<RootSet>& sets);

} // namespace bulkq
