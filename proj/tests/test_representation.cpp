#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

using namespace bergman;

TEST_CASE("alpha table for the unit weight") {
    const auto& bb = fixtures::bundle(fixtures::unit(), 40, 96, 256);
    const LaurentCoeffs lc = laurent_coeffs(fixtures::unit(), 40);
    const AlphaTable tab = alpha_table(fixtures::unit(), bb.basis, 8, 32, lc);
    for (int n = 8; n <= 32; ++n)
        for (int k = n; k <= 32; ++k) {
            const cx a = tab.alpha(n, k);
            if (k == n) CHECK(std::abs(a - std::sqrt(n + 1.0)) < 1e-10);
            else CHECK(std::abs(a) < 1e-12);
        }
    CHECK(tab.below_diag_max < 1e-12);
    CHECK(tab.crosscheck_max_err < 1e-10);
}

TEST_CASE("alpha structure invariants on shipped specs") {
    for (const WeightSpec& spec : {fixtures::poly2(), fixtures::blaschke1(), fixtures::branch()}) {
        const auto& bb = fixtures::bundle(spec, 48, 96, 256);
        const LaurentCoeffs lc = laurent_coeffs(spec, 48);
        const AlphaTable tab = alpha_table(spec, bb.basis, 8, 40, lc);
        CHECK(tab.below_diag_max < 1e-9);       // triangularity, circle path
        CHECK(tab.diag_identity_max < 1e-9);    // alpha_nn c0 / gamma_n = 1
        CHECK(tab.crosscheck_max_err < 1e-8);   // the two paths agree
        double amax = 0.0;                      // uniform bound for k > n
        for (int k = 9; k <= 40; ++k) amax = std::max(amax, std::abs(tab.alpha(8, k)));
        CHECK(amax < 10.0);
    }
}

TEST_CASE("alpha cross-check divergence throws") {
    const auto& bb = fixtures::bundle(fixtures::poly1(), 64, 96, 256);
    const LaurentCoeffs lc = laurent_coeffs(fixtures::poly1(), 64);
    AlphaOptions opts;
    opts.fail_tol = 1e-18; // below the attainable agreement
    CHECK_THROWS_AS((void)alpha_table(fixtures::poly1(), bb.basis, 8, 24, lc, opts),
                    std::runtime_error);
}

TEST_CASE("alpha decay envelope") {
    const auto& bb = fixtures::bundle(fixtures::blaschke1(), 64, 96, 256);
    const LaurentCoeffs lc = laurent_coeffs(fixtures::blaschke1(), 64);
    const ConvergenceReport rep = alpha_decay_report(fixtures::blaschke1(), bb.basis, 16, 32, lc);
    CHECK(rep.pass);
}

TEST_CASE("h/g recursion") {
    const auto& bu = fixtures::bundle(fixtures::unit(), 40, 96, 256);
    const LaurentCoeffs lu = laurent_coeffs(fixtures::unit(), 40);
    const AlphaTable tu = alpha_table(fixtures::unit(), bu.basis, 6, 31, lu);
    const HSeries hu = hg_recursion(tu, 24);
    CHECK(hu.h[0] == cx(1.0));
    for (int j = 1; j <= 24; ++j) CHECK(std::abs(hu.h[j]) < 1e-10);

    const auto& bp = fixtures::bundle(fixtures::poly1(), 64, 96, 256);
    const LaurentCoeffs lp = laurent_coeffs(fixtures::poly1(), 64);
    const AlphaTable tp = alpha_table(fixtures::poly1(), bp.basis, 12, 40, lp);
    const HSeries hp = hg_recursion(tp, 16);
    // one unrolled step: h(n,1) = -alpha_{n,n+1}/alpha_{n+1,n+1}
    CHECK(std::abs(hp.h[1] - (-tp.alpha(12, 13) / tp.alpha(13, 13))) < 1e-13);

    CHECK_THROWS_AS((void)hg_recursion(tp, 40), std::invalid_argument);
}

TEST_CASE("H_n evaluation, vanishing at the origin, and the O(1/n) size") {
    const auto& bp = fixtures::bundle(fixtures::poly1(), 130, 128, 320);
    const LaurentCoeffs lp = laurent_coeffs(fixtures::poly1(), 130);
    double prev_sup_scaled = 0.0;
    for (int n : {16, 32, 64}) {
        const AlphaTable tab = alpha_table(fixtures::poly1(), bp.basis, n, std::min(130, n + 49), lp);
        const HSeries hs = hg_recursion(tab, 48);
        CHECK(eval_Hn(hs, cx(0.0)).value == cx(0.0));
        double sup = 0.0;
        for (int i = 0; i < 64; ++i)
            sup = std::max(sup, std::abs(eval_Hn(hs, std::polar(0.5, 2.0 * kPi * i / 64.0)).value));
        const double scaled = sup * n;
        if (n > 16) CHECK(scaled < 2.0 * prev_sup_scaled + 1e-12);
        prev_sup_scaled = std::max(prev_sup_scaled, scaled);
        // coefficient decay profile: |h(n,j)| (n+j) stays within a slack
        // factor of its early maximum (lambda = 1/2 envelope)
        double early = 0.0, late = 0.0;
        for (int j = 1; j <= 8; ++j) early = std::max(early, std::abs(hs.h[j]) * (n + j));
        for (int j = 9; j <= 48; ++j) late = std::max(late, std::abs(hs.h[j]) * (n + j));
        CHECK(late <= 1.5 * early + 1e-12);
    }
}

TEST_CASE("eval_Hn rejects points outside the open disk") {
    HSeries hs;
    hs.n = 4;
    hs.h = {cx(1.0), cx(0.25)};
    CHECK_THROWS_AS((void)eval_Hn(hs, cx(1.0)), std::domain_error);
    CHECK(eval_Hn(hs, cx(0.5)).value == cx(0.125));
}

TEST_CASE("Q_n for the unit weight and radius independence") {
    const KernelL Lu(fixtures::unit());
    const cx z(0.3, 0.2);
    for (int n : {3, 9}) {
        const cx q = Qn_eval(fixtures::unit(), n, 0.8, z, Lu);
        CHECK(std::abs(q - double(n + 1) * powi(z, n)) < 1e-13);
    }

    const KernelL Lp(fixtures::poly1());
    const cx q06 = Qn_eval(fixtures::poly1(), 8, 0.6, cx(0.3), Lp);
    const cx q075 = Qn_eval(fixtures::poly1(), 8, 0.75, cx(0.3), Lp);
    const cx q09 = Qn_eval(fixtures::poly1(), 8, 0.9, cx(0.3), Lp);
    CHECK(std::abs(q06 - q075) < 1e-9);
    CHECK(std::abs(q075 - q09) < 1e-9);

    CHECK_THROWS_AS((void)Qn_eval(fixtures::poly1(), 8, 0.4, cx(0.1), Lp), std::invalid_argument);
    CHECK_THROWS_AS((void)Qn_eval(fixtures::poly1(), 8, 0.7, cx(0.8), Lp), std::invalid_argument);
}

TEST_CASE("Q_n matches the residue expansion for a pure Blaschke weight") {
    // s=1, r_k = 0 prototype: residues at zeta = z and zeta = a
    const WeightSpec spec = fixtures::rk0();
    const KernelL L(spec);
    const cx a(0.6, 0.0);
    const double m = 2.0;
    for (const cx z : {cx(0.25, 0.1), cx(-0.3, 0.35)}) {
        for (int n : {6, 13}) {
            const cx direct = Qn_eval(spec, n, 0.8, z, L);
            const cx lead = double(n + 1) * powi(z, n);
            const cx polez = powi(z, n + 1) * (0.5 * m) * (1.0 - std::norm(a)) /
                             ((z - a) * (1.0 - z * std::conj(a)));
            const cx polea = powi(a, n + 1) * (0.5 * m) * (1.0 - std::norm(a)) /
                             ((a - z) * (1.0 - z * std::conj(a)));
            CHECK(std::abs(direct - (lead + polez + polea)) < 1e-12);
        }
    }
}

TEST_CASE("series consistency: alpha_nn p_n = sum_j h(n,j) Q_{n+j}") {
    const WeightSpec spec = fixtures::poly1();
    const auto& bb = fixtures::bundle(spec, 64, 96, 256);
    const LaurentCoeffs lc = laurent_coeffs(spec, 64);
    const KernelL L(spec);
    const int n = 8;
    const AlphaTable tab = alpha_table(spec, bb.basis, n, 41, lc);
    const HSeries hs = hg_recursion(tab, 32);
    const cx z(0.3, 0.0);
    const cx target = tab.alpha(n, n) * bb.basis.eval(n, z);

    double prev = 1e300;
    bool shrinking = true;
    for (int J : {0, 4, 8, 16, 32}) {
        cx acc(0.0);
        for (int j = 0; j <= J; ++j) acc += hs.h[j] * Qn_eval(spec, n + j, 0.75, z, L);
        const double err = std::abs(acc - target);
        if (J >= 8 && err > prev * 1.05 + 1e-13) shrinking = false;
        prev = err;
    }
    CHECK(shrinking);
    CHECK(prev < 1e-10);
}

TEST_CASE("representation_eval against the oracle") {
    // unit weight with H: exactly (n+1) z^n
    const auto& bu = fixtures::bundle(fixtures::unit(), 40, 96, 256);
    const LaurentCoeffs lu = laurent_coeffs(fixtures::unit(), 40);
    const KernelL Lu(fixtures::unit());
    {
        const int n = 10;
        const AlphaTable tab = alpha_table(fixtures::unit(), bu.basis, n, 31, lu);
        const HSeries hs = hg_recursion(tab, 20);
        const cx z(0.45, -0.3);
        CHECK(std::abs(representation_eval(fixtures::unit(), n, 0.8, z, &hs, Lu) -
                       double(n + 1) * powi(z, n)) < 1e-12);
    }

    // poly1 weight, n = 32: relative 1e-6 against v(0) gamma_n p_n
    const WeightSpec spec = fixtures::poly1();
    const auto& bb = fixtures::bundle(spec, 130, 128, 320);
    const LaurentCoeffs lc = laurent_coeffs(spec, 130);
    const KernelL L(spec);
    const double v0 = std::real(eval_outer(spec, cx(0.0)));
    {
        const int n = 32;
        const AlphaTable tab = alpha_table(spec, bb.basis, n, n + 65, lc);
        const HSeries hs = hg_recursion(tab, 64);
        for (const cx z : {cx(0.62, 0.0), cx(0.0, 0.66), cx(-0.55, 0.3)}) {
            const cx oracle = v0 * bb.basis.gammas[n] * bb.basis.eval(n, z);
            const cx wh = representation_eval(spec, n, 0.8, z, &hs, L);
            CHECK(std::abs(wh - oracle) / std::abs(oracle) < 1e-6);
            // radius independence
            const cx wh2 = representation_eval(spec, n, 0.9, z, &hs, L);
            CHECK(std::abs(wh - wh2) < 1e-9 * std::abs(wh));
        }
    }

    // without H_n the relative error scales as 1/n; the sample radius grows
    // with n so the oracle value stays above the coefficient noise floor
    double prev_scaled = 0.0;
    for (int n : {16, 32, 64, 128}) {
        const cx z(std::min(0.85, std::max(0.6, std::exp(-18.4 / n))), 0.0);
        const cx oracle = v0 * bb.basis.gammas[n] * bb.basis.eval(n, z);
        const cx noh = representation_eval(spec, n, std::min(0.92, std::abs(z) + 0.07), z, nullptr, L);
        const double scaled = n * std::abs(noh - oracle) / std::abs(oracle);
        if (n > 16) CHECK(scaled < 1.5 * prev_scaled + 1e-9);
        prev_scaled = std::max(prev_scaled, scaled);
    }
}

TEST_CASE("representation_eval_dz derivative against finite differences") {
    const WeightSpec spec = fixtures::rk0();
    const KernelL L(spec);
    const cx z(0.5, 0.1), h(1e-6);
    const RepValue rv = representation_eval_dz(spec, 12, 0.8, z, nullptr, L);
    const cx fd = (representation_eval(spec, 12, 0.8, z + h, nullptr, L) -
                   representation_eval(spec, 12, 0.8, z - h, nullptr, L)) /
                  (2.0 * h);
    CHECK(std::abs(rv.dz - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    CHECK(std::abs(rv.value - representation_eval(spec, 12, 0.8, z, nullptr, L)) < 1e-14);
}
