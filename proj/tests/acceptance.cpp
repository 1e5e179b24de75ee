// Acceptance suite: one quantitative criterion per entry, each printing a
// single PASS/FAIL line. Run all with no arguments or one criterion by index.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include "bergman/asymptotics.hpp"
#include "bergman/report.hpp"
#include "bergman/representation.hpp"
#include "bergman/roots.hpp"

using namespace bergman;

namespace {

WeightSpec unit_spec() { return {OuterPart::one(), {}}; }
WeightSpec poly1_spec() { return {OuterPart::poly({{cx(0.5, 0.0), 1.0}}), {}}; }
WeightSpec poly2_spec() { return {OuterPart::poly({{cx(0.5, 0.0), 2.0}}), {}}; }
WeightSpec expz_spec() { return {OuterPart::expPoly({cx(0.0), cx(1.0)}), {}}; }
WeightSpec blaschke1_spec() { return {OuterPart::one(), {{cx(0.5, 0.0), 1.0}}}; }
WeightSpec bs_spec() { return {OuterPart::power({{cx(0.5, 0.0), -1.0}}), {{cx(0.5, 0.0), 2.0}}}; }
WeightSpec rk0_spec() { return {OuterPart::one(), {{cx(0.6, 0.0), 2.0}}}; }
WeightSpec branch_spec() { return {OuterPart::power({{cx(0.6, 0.0), 0.5}}), {}}; }
WeightSpec two_sing_spec() {
    return {OuterPart::one(), {{cx(0.3, 0.0), 2.0}, {cx(0.0, -0.4), 1.0}}};
}

struct Bundle {
    DiskRule rule;
    OrthoBasis basis;
};

const Bundle& bundle(const WeightSpec& spec, int N, int radial, int angular) {
    static std::map<std::tuple<std::uint64_t, int, int, int>, Bundle> cache;
    const auto key = std::make_tuple(fingerprint(spec), N, radial, angular);
    auto it = cache.find(key);
    if (it == cache.end()) {
        DiskRule rule = build_disk_rule(spec, radial, angular);
        OrthoBasis basis = bergman_orthonormalize(spec, N, rule);
        it = cache.emplace(key, Bundle{std::move(rule), std::move(basis)}).first;
    }
    return it->second;
}

double scaled_max(const ConvergenceReport& r) {
    double m = 0.0;
    for (const auto& row : r.rows) m = std::max(m, std::abs(row.scaled));
    return m;
}

// 1. Unit-weight exactness: coefficients of p_n equal sqrt(n+1) z^n, and the
//    integral representation with H_n reproduces (n+1) z^n, both to 1e-10.
bool criterion1(std::string& detail) {
    const WeightSpec spec = unit_spec();
    const auto& bb = bundle(spec, 121, 96, 320);
    double coef_err = 0.0;
    for (int n = 0; n <= 40; ++n) {
        const auto& c = bb.basis.polys[std::size_t(n)].coeffs();
        for (int j = 0; j < n; ++j) coef_err = std::max(coef_err, std::abs(c[std::size_t(j)]));
        coef_err = std::max(coef_err, std::abs(c[std::size_t(n)] - std::sqrt(n + 1.0)));
    }

    const LaurentCoeffs lc = laurent_coeffs(spec, 121);
    const KernelL L(spec);
    AlphaOptions aopts;
    aopts.crosscheck = false;
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> ur(0.0, 0.7), ut(0.0, 2.0 * kPi);
    double rep_err = 0.0;
    for (int n = 1; n <= 40; ++n) {
        const AlphaTable tab = alpha_table(spec, bb.basis, n, 3 * n + 1, lc, aopts);
        const HSeries hs = hg_recursion(tab, 2 * n);
        for (int t = 0; t < 50; ++t) {
            const cx z = std::polar(ur(rng), ut(rng));
            const double rc = std::min(0.92, std::max(0.77, std::abs(z) + 0.05));
            const cx got = representation_eval(spec, n, rc, z, &hs, L);
            rep_err = std::max(rep_err, std::abs(got - double(n + 1) * powi(z, n)));
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "coef err %.2e, representation err %.2e (tol 1e-10)", coef_err,
                  rep_err);
    detail = buf;
    return coef_err < 1e-10 && rep_err < 1e-10;
}

// 2. gamma_n rate: n |gamma_n v(0)/sqrt(n) - 1| bounded for n up to 256 on
//    v = (1-0.5z)^2 and v = exp(z).
bool criterion2(std::string& detail) {
    const std::vector<int> ns{16, 32, 64, 128, 256};
    bool ok = true;
    detail.clear();
    for (const WeightSpec& spec : {poly2_spec(), expz_spec()}) {
        const auto& bb = bundle(spec, 256, 192, 640);
        const ConvergenceReport rep = gamma_rate_report(spec, bb.basis, ns);
        ok = ok && rep.pass;
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%smax scaled %.3f", detail.empty() ? "" : "; ",
                      scaled_max(rep));
        detail += buf;
    }
    return ok;
}

// 3. Strong asymptotics on |z| = 1 for the two s=0 specs plus the s=1 spec.
bool criterion3(std::string& detail) {
    const std::vector<int> ns{16, 32, 64, 128, 256};
    bool ok = true;
    detail.clear();
    for (const WeightSpec& spec : {poly2_spec(), expz_spec(), blaschke1_spec()}) {
        const bool singular = spec.s() > 0;
        const auto& bb = bundle(spec, 256, 192, singular ? 1024 : 640);
        const ConvergenceReport rep = strong_asymptotics_report(spec, bb.basis, ns, 0.75);
        ok = ok && rep.pass;
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%smax scaled %.3f", detail.empty() ? "" : "; ",
                      scaled_max(rep));
        detail += buf;
    }
    return ok;
}

// 4. alpha structure on every shipped spec: triangularity, diagonal
//    identity, and agreement of the two computation paths, all at 1e-8.
bool criterion4(std::string& detail) {
    const std::vector<int> ns{8, 16, 32};
    double worst = 0.0;
    bool ok = true;
    for (const WeightSpec& spec : {unit_spec(), poly1_spec(), poly2_spec(), expz_spec(),
                                   blaschke1_spec(), bs_spec(), rk0_spec(), branch_spec(),
                                   two_sing_spec()}) {
        const auto& bb = bundle(spec, 48, 96, 256);
        const LaurentCoeffs lc = laurent_coeffs(spec, 56);
        const ConvergenceReport rep = alpha_structure_report(spec, bb.basis, ns, lc, 1e-8);
        ok = ok && rep.pass;
        for (const auto& r : rep.rows) worst = std::max(worst, r.observed);
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "worst violation %.2e (tol 1e-8)", worst);
    detail = buf;
    return ok;
}

// 5. alpha decay envelope |alpha_{n,k}| sqrt(k)/(eta^{k-n} + rho_a^{k-n})
//    bounded across k-n in [1,32] on the s=1 spec, eta midway rho_v..1.
bool criterion5(std::string& detail) {
    const WeightSpec spec = blaschke1_spec();
    const auto& bb = bundle(spec, 48, 96, 256);
    const LaurentCoeffs lc = laurent_coeffs(spec, 56);
    const ConvergenceReport rep = alpha_decay_report(spec, bb.basis, 16, 32, lc);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max envelope ratio %.3f", scaled_max(rep));
    detail = buf;
    return rep.pass;
}

// 6. Faber norms: |n int |F_n|^2 w - 1| * n bounded on two specs for n up to
//    256, log-log slope of the deviation in [-1.4, -0.6].
bool criterion6(std::string& detail) {
    const std::vector<int> ns{16, 32, 64, 128, 256};
    bool ok = true;
    detail.clear();
    for (const WeightSpec& spec : {poly2_spec(), blaschke1_spec()}) {
        const bool singular = spec.s() > 0;
        const auto& bb = bundle(spec, 256, 192, singular ? 1024 : 640);
        const LaurentCoeffs lc = laurent_coeffs(spec, 260);
        const ConvergenceReport rep = faber_norm_report(spec, bb.rule, lc, ns);
        ok = ok && rep.pass;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s%s", detail.empty() ? "" : "; ", rep.note.c_str());
        detail += buf;
    }
    return ok;
}

// 7. Representation fidelity: with H_n (Jmax = 2n) relative 1e-6 for n <= 40
//    at 20 interior points; without H_n, n * relative error bounded.
bool criterion7(std::string& detail) {
    bool ok = true;
    detail.clear();
    for (const WeightSpec& spec : {poly1_spec(), blaschke1_spec(), two_sing_spec()}) {
        const bool singular = spec.s() > 0;
        const auto& bb = bundle(spec, 134, 128, singular ? 512 : 384);
        const LaurentCoeffs lc = laurent_coeffs(spec, 140);
        const KernelL L(spec);
        const ConvergenceReport wh = representation_report(spec, bb.basis, L, lc, {16, 24, 32, 40}, true);
        const ConvergenceReport nh =
            representation_report(spec, bb.basis, L, lc, {16, 32, 64, 128}, false);
        ok = ok && wh.pass && nh.pass;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%swithH %.2e / noH*n %.2f", detail.empty() ? "" : "; ",
                      scaled_max(wh), scaled_max(nh));
        detail += buf;
    }
    return ok;
}

// 8. |e^z|^2 identity between Bergman and Szego polynomials: residual below
//    1e-7 for all n <= 24 over a 100-point grid in the closed disk.
bool criterion8(std::string& detail) {
    const DiskRule rule = build_disk_rule(expz_spec(), 96, 256);
    const ConvergenceReport rep = exp_weight_identity_residual(24, 2048, rule, 1e-7);
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, r.observed);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "max residual %.2e (tol 1e-7)", worst);
    detail = buf;
    return rep.pass;
}

// 9. Bernstein-Szego zero drift n^2 |z_{n,1} - (0.5 - 1/n)| bounded and the
//    gamma_n^2 expansion residual times n bounded, n up to 256.
bool criterion9(std::string& detail) {
    const WeightSpec spec = bs_spec();
    const auto& bb = bundle(spec, 256, 192, 1024);
    const KernelL L(spec);
    const BsZeroReports reps = bs_zero_report(spec, bb.basis, {32, 64, 128, 256}, L);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "zeros max n^2|dz| %.3f, gamma2 max scaled %.3f",
                  scaled_max(reps.zeros), scaled_max(reps.gamma2));
    detail = buf;
    return reps.zeros.pass && reps.gamma2.pass;
}

// 10. r_k = 0 on-singularity value: the monic normalization of the residue
//     formula, n |gamma_n^{-1} p_n(0.6)/(2 * 0.6^n) - 1| bounded, n up to 256.
bool criterion10(std::string& detail) {
    const WeightSpec spec = rk0_spec();
    const auto& bb = bundle(spec, 256, 192, 1024);
    const KernelL L(spec);
    const Rk0Reports reps = rk0_point_report(spec, bb.basis, {32, 64, 128, 256}, L);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "on-singularity max scaled %.3f, interior max scaled %.3f",
                  scaled_max(reps.on_singularity), scaled_max(reps.interior));
    detail = buf;
    return reps.on_singularity.pass && reps.interior.pass;
}

// 11. Branch-point formula at z = 0 for v = (1 - 0.6 z)^{1/2}: ratio error
//     decreasing over n in {32,64,128,256} with final value <= 0.05.
bool criterion11(std::string& detail) {
    const ConvergenceReport rep =
        branch_ratio_report(cx(0.6, 0.0), 0.5, cx(0.0), {32, 64, 128, 256});
    // oracle anchoring at n = 32: the contour evaluation agrees with the
    // discrete orthonormalization oracle
    const auto& bb = bundle(branch_spec(), 48, 96, 256);
    const KernelL L(branch_spec());
    const cx oracle = bb.basis.gammas[32] * bb.basis.eval(32, cx(0.0));
    const cx rep32 = representation_eval(branch_spec(), 32, 0.6 + 3.3 / 32.0, cx(0.0), nullptr, L);
    const double anchor = std::abs(rep32 - oracle) / std::abs(oracle);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "final ratio err %.4f, oracle anchor %.2e", rep.rows.back().observed,
                  anchor);
    detail = buf;
    return rep.pass && anchor < 0.05;
}

// 12. Kernel consistency: zeta^2 L(z,zeta) equals the series reconstruction
//     of K_h(z, 1/conj(zeta)) to 1e-7 on the grid, and the s=2 constant J is
//     stable to 1e-7 under quadrature refinement.
bool criterion12(std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    std::string note;
    for (const WeightSpec& spec : {blaschke1_spec(), two_sing_spec()}) {
        const ConvergenceReport rep = kernel_consistency_report(spec, 1e-7);
        ok = ok && rep.pass;
        for (const auto& r : rep.rows) worst = std::max(worst, r.observed);
        if (!rep.note.empty()) note = rep.note;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max grid deviation %.2e (tol 1e-7); %s", worst, note.c_str());
    detail = buf;
    return ok;
}

struct Criterion {
    int index;
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "unit-weight exactness", criterion1},
    {2, "gamma_n rate", criterion2},
    {3, "strong asymptotics on |z|=1", criterion3},
    {4, "alpha structure, both paths", criterion4},
    {5, "alpha decay envelope", criterion5},
    {6, "Faber weighted norms", criterion6},
    {7, "representation fidelity", criterion7},
    {8, "exp weight Bergman-Szego identity", criterion8},
    {9, "Bernstein-Szego zero drift", criterion9},
    {10, "r_k=0 on-singularity value", criterion10},
    {11, "branch-point formula", criterion11},
    {12, "kernel consistency", criterion12},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.index != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
            ok = false;
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d: %s (%s) [%.1f s]\n", ok ? "PASS" : "FAIL", c.index, c.name,
                    detail.c_str(), secs);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
