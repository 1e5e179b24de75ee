#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

using namespace bergman;

TEST_CASE("gauss_legendre01 basics") {
    const Rule1D r = gauss_legendre01(12);
    double s = 0.0, s5 = 0.0;
    for (int i = 0; i < 12; ++i) {
        s += r.w[i];
        s5 += r.w[i] * std::pow(r.x[i], 5);
    }
    CHECK(std::abs(s - 1.0) < 1e-14);
    CHECK(std::abs(s5 - 1.0 / 6.0) < 1e-14);
    CHECK_THROWS_AS(gauss_legendre01(0), std::invalid_argument);
}

TEST_CASE("disk rule: monomial orthogonality for smooth weight") {
    const DiskRule rule = build_disk_rule(fixtures::unit(), 64, 128);
    for (int j = 0; j <= 10; ++j)
        for (int k = 0; k <= 10; ++k) {
            const cx v = integrate_disk(rule, [&](cx z) { return powi(z, j) * powi(std::conj(z), k); });
            const double expect = (j == k) ? 1.0 / (j + 1) : 0.0;
            CHECK(std::abs(v - expect) < 1e-12);
        }
}

TEST_CASE("integrate_disk basics") {
    const DiskRule rule = build_disk_rule(fixtures::unit(), 48, 96);
    CHECK(std::abs(integrate_disk(rule, [](cx) { return cx(1.0); }) - 1.0) < 1e-13);
    CHECK(std::abs(integrate_disk(rule, [](cx z) { return z; })) < 1e-14);
    // |p_2|^2 w for the unit weight, p_2 = sqrt(3) z^2
    CHECK(std::abs(integrate_disk(rule, [](cx z) { return 3.0 * std::norm(z * z); }) - 1.0) < 1e-12);
}

TEST_CASE("disk rule: radial power integrals at a centered singularity") {
    // m = -1: integer exponent, plain mapped rule
    WeightSpec m1{OuterPart::one(), {{cx(0.0), -1.0}}};
    const DiskRule r1 = build_disk_rule(m1, 48, 96);
    const cx v1 = integrate_disk(r1, [&](cx z) { return cx(std::pow(std::abs(z), -1.0)); });
    CHECK(std::abs(v1 - 2.0) < 1e-10); // 2/(m+2)

    // m = -1.5: graded substitution
    WeightSpec m15{OuterPart::one(), {{cx(0.0), -1.5}}};
    const DiskRule r2 = build_disk_rule(m15, 48, 96);
    const cx wmass = integrate_disk(r2, [&](cx z) { return cx(eval_weight(m15, z)); });
    CHECK(wmass.real() > 0.0);
    CHECK(std::isfinite(wmass.real()));
    CHECK(std::abs(wmass - 4.0) < 1e-9); // 2/(m+2) = 4

    // positive fractional exponent
    WeightSpec mh{OuterPart::one(), {{cx(0.0), 0.5}}};
    const DiskRule r3 = build_disk_rule(mh, 48, 96);
    const cx vh = integrate_disk(r3, [&](cx z) { return cx(eval_weight(mh, z)); });
    CHECK(std::abs(vh - 0.8) < 1e-11);
}

TEST_CASE("disk rule invariants for off-center singular specs") {
    for (const WeightSpec& spec : {fixtures::blaschke1(), fixtures::rk0(), fixtures::two_sing()}) {
        const DiskRule rule = build_disk_rule(spec, 96, 256);
        CHECK(std::abs(rule.sum_weights() - 1.0) < 1e-12);
        bool inside = true, clear = true;
        rule.for_each_node([&](cx z, double) {
            if (!(std::abs(z) < 1.0)) inside = false;
            for (const auto& sg : spec.singularities)
                if (z == sg.a) clear = false;
        });
        CHECK(inside);
        CHECK(clear);
    }
}

TEST_CASE("disk rule: smooth integrand across a patch") {
    // int |z-a|^2 dsigma = 1/2 + |a|^2 by expanding the square
    const WeightSpec spec = fixtures::blaschke1();
    const DiskRule rule = build_disk_rule(spec, 96, 256);
    const cx a(0.5, 0.0);
    const cx v = integrate_disk(rule, [&](cx z) { return cx(std::norm(z - a)); });
    CHECK(std::abs(v - 0.75) < 1e-12);
}

TEST_CASE("moment fast path equals direct node summation") {
    for (const WeightSpec& spec : {fixtures::poly1(), fixtures::blaschke1(), fixtures::two_sing()}) {
        const DiskRule rule = build_disk_rule(spec, 32, 64);
        const MomentMatrix& M = rule.moments(6);
        for (int j = 0; j <= 6; ++j)
            for (int k = 0; k <= 6; ++k) {
                const cx direct = integrate_disk(rule, [&](cx z) {
                    return eval_weight(spec, z) * powi(z, j) * powi(std::conj(z), k);
                });
                CHECK(std::abs(M.at(j, k) - direct) < 1e-13);
            }
    }
}

TEST_CASE("self-convergence under order doubling") {
    for (const WeightSpec& spec : {fixtures::blaschke1(), fixtures::poly2(), fixtures::bs_family(),
                                   fixtures::two_sing()}) {
        const auto& lo = fixtures::bundle(spec, 24, 96, 256);
        const auto& hi = fixtures::bundle(spec, 24, 192, 512);
        const Poly& p = lo.basis.polys[24];
        const cx nlo = lo.rule.moments(24).inner(p.coeffs(), p.coeffs());
        const cx nhi = hi.rule.moments(24).inner(p.coeffs(), p.coeffs());
        CHECK(std::abs(nlo - nhi) < 1e-9);
    }
}

TEST_CASE("property: random specs give unit mass and interior nodes") {
    for (std::uint64_t i = 0; i < 24; ++i) {
        const WeightSpec spec = fixtures::random_spec(i);
        const DiskRule rule = build_disk_rule(spec, 48, 128);
        CHECK(std::abs(rule.sum_weights() - 1.0) < 1e-11);
        bool inside = true;
        rule.for_each_node([&](cx z, double w) {
            if (!(std::abs(z) < 1.0) || !(w > 0.0)) inside = false;
        });
        CHECK(inside);
    }
}

TEST_CASE("circle rule values") {
    const CircleRule rule(0.7, 64);
    CHECK(std::abs(integrate_circle(rule, [](cx z) { return 1.0 / z; }) - 1.0) < 1e-14);
    CHECK(std::abs(integrate_circle(rule, [](cx z) { return powi(z, 5); })) < 1e-14);
    CHECK(std::abs(integrate_circle(rule, [](cx z) { return std::exp(z) / powi(z, 3); }) - 0.5) < 1e-14);

    // radius invariance within the annulus of analyticity
    auto f = [](cx z) { return std::exp(z) / (z - cx(0.2)); };
    const cx a = integrate_circle(CircleRule(0.45, 128), f);
    const cx b = integrate_circle(CircleRule(0.9, 128), f);
    CHECK(std::abs(a - b) < 1e-10);

    CHECK_THROWS_AS(CircleRule(0.5, 8), std::invalid_argument);
    CHECK_THROWS_AS(CircleRule(0.5, 33), std::invalid_argument);
    CHECK_THROWS_AS(CircleRule(-0.5, 64), std::invalid_argument);
}

TEST_CASE("rules are reproducible") {
    const DiskRule a = build_disk_rule(fixtures::blaschke1(), 48, 128);
    const DiskRule b = build_disk_rule(fixtures::blaschke1(), 48, 128);
    CHECK(a.node_fingerprint() == b.node_fingerprint());
    CHECK(a.node_count() == b.node_count());
}

TEST_CASE("invalid orders rejected") {
    CHECK_THROWS_AS(build_disk_rule(fixtures::unit(), 2, 128), std::invalid_argument);
    CHECK_THROWS_AS(build_disk_rule(fixtures::unit(), 64, 3), std::invalid_argument);
}
