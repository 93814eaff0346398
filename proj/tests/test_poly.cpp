#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bulkq/pfe.hpp"
#include "bulkq/poly.hpp"
#include "bulkq/roots.hpp"

#include <random>

using namespace bulkq;

TEST_CASE("polynomial arithmetic basics") {
    Polynomial p({1.0, 2.0, 3.0}); // 1 + 2x + 3x^2
    Polynomial q({0.0, 1.0});      // x
    CHECK(p.eval(2.0) == doctest::Approx(17.0));
    CHECK((p * q).degree() == 3);
    CHECK((p * q).eval(2.0) == doctest::Approx(34.0));
    CHECK((p + q).eval(-1.0) == doctest::Approx(2.0 - 1.0));
    CHECK(p.derivative().eval(2.0) == doctest::Approx(14.0));

    Polynomial z;
    CHECK(z.is_zero());
    CHECK((z * p).is_zero());
}

TEST_CASE("trim drops negligible trailing coefficients") {
    Polynomial p({1.0, 1.0, 1e-20});
    CHECK(p.degree() == 1);
}

TEST_CASE("divmod reconstructs the dividend") {
    Polynomial num({3.0, -2.0, 0.5, 1.0, 2.0});
    Polynomial den({1.0, 1.0, 1.0});
    Polynomial q, r;
    Polynomial::divmod(num, den, q, r);
    Polynomial back = q * den + r;
    for (int k = 0; k <= num.degree(); ++k)
        CHECK(back[k] == doctest::Approx(num[k]).epsilon(1e-12));
    CHECK(r.degree() < den.degree());
}

TEST_CASE("series division: 1/(1-x) is all ones") {
    auto s = Polynomial::series_divide(Polynomial({1.0}), Polynomial({1.0, -1.0}), 6);
    for (double v : s) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("taylor shift matches direct expansion") {
    Polynomial p({1.0, -4.0, 6.0, -4.0, 1.0}); // (1-x)^4
    auto t = p.taylor_at(1.0, 5);
    CHECK(t[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(t[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(t[3] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(t[4] == doctest::Approx(1.0));
    auto tc = p.taylor_at(cplx(0.0, 1.0), 2);
    // p(i) = (1-i)^4 = -4
    CHECK(tc[0].real() == doctest::Approx(-4.0));
    CHECK(std::abs(tc[0].imag()) < 1e-12);
}

TEST_CASE("jet division performs L'Hospital style deflation") {
    // (x^2 - 1)/(x - 1) at x = 1 -> 2, derivative 1
    Polynomial num({-1.0, 0.0, 1.0});
    Polynomial den({-1.0, 1.0});
    auto nj = poly_jet(num, 1.0, 4).deflated(1);
    auto dj = poly_jet(den, 1.0, 4).deflated(1);
    auto q = nj / dj;
    CHECK(q[0] == doctest::Approx(2.0));
    CHECK(q[1] == doctest::Approx(1.0));
}

TEST_CASE("poly_from_roots pairs conjugates into real quadratics") {
    std::vector<cplx> roots = {cplx(2.0, 1.0), cplx(2.0, -1.0), cplx(-3.0, 0.0)};
    Polynomial p = poly_from_roots(roots);
    CHECK(p.degree() == 3);
    CHECK(std::abs(p.eval(cplx(2.0, 1.0))) < 1e-10);
    CHECK(p.eval(-3.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("companion roots with polish find known zeros") {
    // (x - 0.5)(x - 2)(x + 3) = x^3 + 0.5 x^2 - 6.5 x + 3
    Polynomial p({3.0, -6.5, 0.5, 1.0});
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 3);
    std::vector<double> expected = {0.5, 2.0, -3.0};
    for (double e : expected) {
        bool found = false;
        for (const auto& r : roots)
            if (std::abs(r - cplx(e, 0.0)) < 1e-10) found = true;
        CHECK(found);
    }
}

TEST_CASE("classify_roots clusters a repeated root") {
    std::vector<cplx> raw = {cplx(2.0, 1e-9), cplx(2.0, -1e-9), cplx(0.5, 0.0)};
    RootSet rs = classify_roots(raw);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.roots[1].multiplicity == 2);
    CHECK(rs.roots[0].region == RootRegion::inside);
    CHECK(rs.roots[1].region == RootRegion::outside);
}

TEST_CASE("pfe: single simple pole gives a geometric series") {
    // 1/(2 - x): c_1 = 1 at alpha = 2, coefficient of x^n is 2^-(n+1)
    Polynomial lambda({1.0});
    Polynomial d({2.0, -1.0});
    RootSet rs;
    rs.roots.push_back({cplx(2.0, 0.0), 1, RootRegion::outside});
    auto pfe = partial_fractions(lambda, d, rs);
    REQUIRE(pfe.simple.size() == 1);
    CHECK(pfe.simple[0].residue.real() == doctest::Approx(1.0));
    for (int n = 0; n < 8; ++n)
        CHECK(pfe.coeff(n) == doctest::Approx(std::pow(2.0, -(n + 1))).epsilon(1e-12));
}

TEST_CASE("pfe: repeated pole follows the binomial pattern") {
    // 1/(2 - x)^2: coefficient of x^n is (n+1)/2^(n+2)
    Polynomial lambda({1.0});
    Polynomial d({4.0, -4.0, 1.0});
    RootSet rs;
    rs.roots.push_back({cplx(2.0, 0.0), 2, RootRegion::outside});
    auto pfe = partial_fractions(lambda, d, rs);
    REQUIRE(pfe.repeated.size() == 1);
    CHECK(pfe.repeated[0].zeta[0].real() == doctest::Approx(1.0));
    CHECK(std::abs(pfe.repeated[0].zeta[1]) < 1e-12);
    for (int n = 0; n < 12; ++n)
        CHECK(pfe.coeff(n) == doctest::Approx((n + 1) / std::pow(2.0, n + 2)).epsilon(1e-12));
}

TEST_CASE("pfe: x/(2-x)^2 mixes both orders") {
    Polynomial lambda({0.0, 1.0});
    Polynomial d({4.0, -4.0, 1.0});
    RootSet rs;
    rs.roots.push_back({cplx(2.0, 0.0), 2, RootRegion::outside});
    auto pfe = partial_fractions(lambda, d, rs);
    REQUIRE(pfe.repeated.size() == 1);
    CHECK(pfe.repeated[0].zeta[0].real() == doctest::Approx(2.0));
    CHECK(pfe.repeated[0].zeta[1].real() == doctest::Approx(-1.0));
}

TEST_CASE("pfe faithfulness on random factorable rationals") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> mag(1.3, 4.0), ang(0.3, 2.8), coef(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        // random denominator with real roots and conjugate pairs, all outside;
        // roots kept apart so the factorization stays well conditioned
        std::vector<cplx> roots;
        auto well_separated = [&](const cplx& c) {
            for (const auto& r : roots)
                if (std::abs(r - c) < 0.15) return false;
            return true;
        };
        int nreal = 1 + (int)(rng() % 3);
        for (int i = 0; i < nreal; ++i) {
            cplx c(mag(rng), 0.0);
            if (well_separated(c)) roots.push_back(c);
        }
        int npair = (int)(rng() % 2);
        for (int i = 0; i < npair; ++i) {
            double m = mag(rng), t = ang(rng);
            cplx c = std::polar(m, t);
            if (well_separated(c) && well_separated(std::conj(c))) {
                roots.push_back(c);
                roots.push_back(std::conj(c));
            }
        }
        Polynomial den = poly_from_roots(roots);
        int dn = den.degree();
        std::vector<double> nc(dn); // proper numerator
        for (double& v : nc) v = coef(rng);
        Polynomial num(nc);
        if (num.is_zero()) continue;

        RootSet rs = classify_roots(roots);
        auto pfe = partial_fractions(num, den, rs);

        // residues against the analytic product formula
        REQUIRE(pfe.simple.size() == roots.size());
        for (const auto& t : pfe.simple) {
            cplx denom = 1.0;
            for (const auto& r : roots)
                if (std::abs(r - t.pole) > 1e-9) denom *= (t.pole - r);
            cplx analytic = -num.eval(t.pole) / denom;
            CHECK(std::abs(t.residue - analytic) <= 1e-8 * std::max(1.0, std::abs(analytic)));
        }

        // reconstruction at sample points off the poles
        std::uniform_real_distribution<double> re(-0.9, 0.9), im(-0.9, 0.9);
        for (int s = 0; s < 20; ++s) {
            cplx x(re(rng), im(rng));
            cplx direct = num.eval(x) / den.eval(x);
            cplx back = pfe.eval(x);
            CHECK(std::abs(direct - back) <=
                  1e-8 * std::max(1.0, std::abs(direct)));
        }
        // conjugate symmetry of residues
        for (const auto& t : pfe.simple) {
            if (std::abs(t.pole.imag()) > 1e-9) {
                bool partner = false;
                for (const auto& o : pfe.simple)
                    if (std::abs(o.pole - std::conj(t.pole)) < 1e-8 &&
                        std::abs(o.residue - std::conj(t.residue)) < 1e-8)
                        partner = true;
                CHECK(partner);
            }
        }
    }
}

TEST_CASE("pfe requires cancellation at in-disk zeros") {
    // (x - 0.5)(2 - x) has an in-disk zero at 0.5; numerator 1 does not vanish
    Polynomial den = Polynomial({-0.5, 1.0}) * Polynomial({2.0, -1.0});
    RootSet rs;
    rs.roots.push_back({cplx(0.5, 0.0), 1, RootRegion::inside});
    rs.roots.push_back({cplx(2.0, 0.0), 1, RootRegion::outside});
    CHECK_THROWS_AS(partial_fractions(Polynomial({1.0}), den, rs), Error);
    // a numerator that does vanish at 0.5 deflates cleanly
    Polynomial num = Polynomial({-0.5, 1.0}) * Polynomial({1.0});
    auto pfe = partial_fractions(num, den, rs);
    for (int n = 0; n < 6; ++n)
        CHECK(pfe.coeff(n) == doctest::Approx(std::pow(2.0, -(n + 1))).epsilon(1e-10));
}

TEST_CASE("pfe quotient handles deg num >= deg den") {
    // (x^3 + 1)/(2 - x): quotient plus geometric part
    Polynomial num({1.0, 0.0, 0.0, 1.0});
    Polynomial den({2.0, -1.0});
    RootSet rs;
    rs.roots.push_back({cplx(2.0, 0.0), 1, RootRegion::outside});
    auto pfe = partial_fractions(num, den, rs);
    auto direct = Polynomial::series_divide(num, den, 12);
    auto coeffs = pfe.coeffs(12);
    for (int n = 0; n < 12; ++n) CHECK(coeffs[n] == doctest::Approx(direct[n]).epsilon(1e-12));
    CHECK(pfe.quotient.degree() == 2);
}

TEST_CASE("tail sums agree with brute-force accumulation") {
    Polynomial num({0.3, 0.1});
    Polynomial den = Polynomial({2.0, -1.0}) * Polynomial({9.0, -6.0, 1.0}); // (2-x)(3-x)^2
    RootSet rs;
    rs.roots.push_back({cplx(2.0, 0.0), 1, RootRegion::outside});
    rs.roots.push_back({cplx(3.0, 0.0), 2, RootRegion::outside});
    auto pfe = partial_fractions(num, den, rs);
    double total = pfe.total_sum();
    double acc = 0.0;
    for (int n = 0; n < 400; ++n) acc += pfe.coeff(n);
    CHECK(total == doctest::Approx(acc).epsilon(1e-12));
    double tail = pfe.tail_sum_after(10);
    double brute = 0.0;
    for (int n = 11; n < 400; ++n) brute += pfe.coeff(n);
    CHECK(tail == doctest::Approx(brute).epsilon(1e-10));
}
