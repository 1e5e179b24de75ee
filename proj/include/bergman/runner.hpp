#ifndef BERGMAN_RUNNER_HPP
#define BERGMAN_RUNNER_HPP

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "bergman/asymptotics.hpp"
#include "bergman/config.hpp"
#include "bergman/report.hpp"

namespace bergman {

struct FamilyOutcome {
    std::string family;
    std::string verdict; // "pass", "fail", "skipped(<reason>)", "failed(<diagnostic>)"
    std::vector<ConvergenceReport> reports;
};

struct RunSummary {
    std::vector<FamilyOutcome> outcomes;
    int exit_code = 0; // 0 all pass, 1 verdict failures, 3 numerical failures
};

namespace detail {

struct SharedState {
    RunConfig cfg;
    DiskRule rule;
    OrthoBasis basis;
    LaurentCoeffs laurent;
    std::optional<KernelL> kernel; // absent for s > 2
    CriticalRadii radii;
};

inline double tol_or(const RunConfig& cfg, const std::string& key, double dflt) {
    auto it = cfg.tol.find(key);
    return it == cfg.tol.end() ? dflt : it->second;
}

inline std::vector<int> filter_n(const std::vector<int>& n_list, int lo, int hi) {
    std::vector<int> out;
    for (int n : n_list)
        if (n >= lo && n <= hi) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

inline FamilyOutcome run_family(const SharedState& st, const std::string& family) {
    const RunConfig& cfg = st.cfg;
    FamilyOutcome out;
    out.family = family;
    try {
        if (family == "strong") {
            const auto ns = filter_n(cfg.n_list, 1, cfg.nmax);
            if (ns.empty()) { out.verdict = "skipped(no usable n in n_list)"; return out; }
            out.reports.push_back(strong_asymptotics_report(cfg.weight, st.basis, ns, cfg.radius));
        } else if (family == "gamma") {
            const auto ns = filter_n(cfg.n_list, 1, cfg.nmax);
            if (ns.empty()) { out.verdict = "skipped(no usable n in n_list)"; return out; }
            out.reports.push_back(gamma_rate_report(cfg.weight, st.basis, ns));
        } else if (family == "alpha") {
            const auto ns = filter_n(cfg.n_list, 0, cfg.nmax - 16);
            if (ns.empty()) { out.verdict = "skipped(n_list too close to nmax)"; return out; }
            out.reports.push_back(alpha_structure_report(cfg.weight, st.basis, ns, st.laurent,
                                                         tol_or(cfg, "alpha", 1e-8)));
        } else if (family == "alphadecay") {
            int base = -1;
            for (int n : cfg.n_list)
                if (n + 32 <= cfg.nmax) base = std::max(base, n);
            if (base < 1) { out.verdict = "skipped(need n with n+32 <= nmax)"; return out; }
            out.reports.push_back(alpha_decay_report(cfg.weight, st.basis, base, 32, st.laurent));
        } else if (family == "faber") {
            const auto ns = filter_n(cfg.n_list, 1, cfg.nmax);
            if (ns.empty()) { out.verdict = "skipped(no usable n in n_list)"; return out; }
            out.reports.push_back(faber_norm_report(cfg.weight, st.rule, st.laurent, ns));
        } else if (family == "representation") {
            if (!st.kernel) { out.verdict = "skipped(kernel unavailable for s > 2)"; return out; }
            const auto ns_h = filter_n(cfg.n_list, 1, (cfg.nmax - 1) / 3);
            const auto ns = filter_n(cfg.n_list, 1, cfg.nmax);
            if (ns.empty()) { out.verdict = "skipped(no usable n in n_list)"; return out; }
            RepresentationOptions opts;
            opts.tol_with_h = tol_or(cfg, "representation_h", 1e-6);
            opts.circle_count = cfg.quad.circle_n;
            if (!ns_h.empty())
                out.reports.push_back(
                    representation_report(cfg.weight, st.basis, *st.kernel, st.laurent, ns_h, true, opts));
            out.reports.push_back(
                representation_report(cfg.weight, st.basis, *st.kernel, st.laurent, ns, false, opts));
        } else if (family == "bszero") {
            if (!st.kernel) { out.verdict = "skipped(kernel unavailable for s > 2)"; return out; }
            const auto ns = filter_n(cfg.n_list, 2, cfg.nmax);
            BsZeroReports r = bs_zero_report(cfg.weight, st.basis, ns, *st.kernel);
            out.reports.push_back(std::move(r.zeros));
            out.reports.push_back(std::move(r.gamma2));
        } else if (family == "rk0") {
            if (!st.kernel) { out.verdict = "skipped(kernel unavailable for s > 2)"; return out; }
            const auto ns = filter_n(cfg.n_list, 2, cfg.nmax);
            Rk0Reports r = rk0_point_report(cfg.weight, st.basis, ns, *st.kernel);
            out.reports.push_back(std::move(r.on_singularity));
            out.reports.push_back(std::move(r.interior));
        } else if (family == "branch") {
            if (cfg.weight.outer.kind != OuterPart::Kind::Power || cfg.weight.outer.factors.size() != 1 ||
                cfg.weight.s() != 0) {
                out.verdict = "skipped(weight is not a single power factor with s=0)";
                return out;
            }
            const auto& [b, r] = cfg.weight.outer.factors[0];
            if (!(r > 0.0 && r < 1.0)) { out.verdict = "skipped(branch exponent outside (0,1))"; return out; }
            const auto ns = filter_n(cfg.n_list, 2, cfg.nmax);
            out.reports.push_back(branch_ratio_report(b, r, cx(0.0), ns, &st.basis));
        } else if (family == "expid") {
            if (cfg.weight.outer.kind != OuterPart::Kind::Exp) {
                out.verdict = "skipped(weight outer part is not exp)";
                return out;
            }
            const int N = std::min(cfg.nmax, 24);
            out.reports.push_back(exp_weight_identity_residual(N, cfg.quad.circle_n, st.rule,
                                                               tol_or(cfg, "expid", 1e-7)));
        } else if (family == "rational") {
            if (cfg.weight.outer.kind != OuterPart::Kind::Poly || cfg.weight.s() != 0) {
                out.verdict = "skipped(weight is not s=0 with polynomial v)";
                return out;
            }
            const auto ns = filter_n(cfg.n_list, 2, cfg.nmax);
            std::vector<cx> zsamp;
            for (int i = 0; i < 6; ++i) zsamp.push_back(std::polar(0.85, 2.0 * kPi * i / 6.0 + 0.21));
            out.reports.push_back(rational_v_residue_report(cfg.weight, st.basis, ns, zsamp));
        } else if (family == "tau") {
            ConvergenceReport rep;
            rep.family = "tau";
            const double tol = tol_or(cfg, "tau", st.basis.degree() >= 200 ? 0.02 : 0.05);
            rep.slack = tol;
            const std::vector<cx> zetas{std::polar(0.2, 0.4), std::polar(0.4, 2.1), std::polar(0.65, 4.0)};
            bool ok = true;
            int idx = 0;
            for (const cx& zeta : zetas) {
                const TauEstimate te = tau_estimate(st.basis, zeta, st.radii, &cfg.weight);
                rep.rows.push_back({idx++, te.estimate, te.predicted, te.deviation});
                if (!te.possibly_exceptional) ok = ok && te.deviation <= tol;
            }
            rep.pass = ok;
            out.reports.push_back(std::move(rep));
        } else if (family == "kernel") {
            if (cfg.weight.s() < 1 || cfg.weight.s() > 2) {
                out.verdict = "skipped(kernel consistency requires 1 <= s <= 2)";
                return out;
            }
            out.reports.push_back(kernel_consistency_report(cfg.weight, tol_or(cfg, "kernel", 1e-7)));
        } else {
            throw ConfigError("unknown family: " + family);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        out.verdict = std::string("skipped(") + e.what() + ")";
        return out;
    } catch (const std::exception& e) {
        out.verdict = std::string("failed(") + e.what() + ")";
        return out;
    }
    const bool pass = std::all_of(out.reports.begin(), out.reports.end(),
                                  [](const ConvergenceReport& r) { return r.pass; });
    out.verdict = pass ? "pass" : "fail";
    return out;
}

inline int thread_cap() {
    const char* env = std::getenv("BERGMAN_SEED_THREADS");
    if (!env) return 1;
    const int t = std::atoi(env);
    return std::clamp(t, 1, 16);
}

} // namespace detail

/// Builds the quadrature, basis and kernel once, runs the requested
/// validator families, and writes one CSV + one JSON per report plus a
/// summary JSON. Returns exit code 0 iff every family verdict is pass;
/// verdict failures give 1, numerical failures 3.
inline RunSummary run(const RunConfig& cfg) {
    detail::SharedState st{cfg,
                           build_disk_rule(cfg.weight, cfg.quad.radial, cfg.quad.angular),
                           {},
                           {},
                           std::nullopt,
                           critical_radii(cfg.weight)};
    st.basis = bergman_orthonormalize(cfg.weight, cfg.nmax, st.rule);
    st.laurent = laurent_coeffs(cfg.weight, cfg.nmax + 8);
    if (cfg.weight.s() <= 2) st.kernel.emplace(cfg.weight);

    RunSummary summary;
    const int threads = detail::thread_cap();
    if (threads <= 1 || cfg.families.size() <= 1) {
        for (const auto& fam : cfg.families) summary.outcomes.push_back(detail::run_family(st, fam));
    } else {
        std::vector<std::future<FamilyOutcome>> futs;
        std::vector<FamilyOutcome> results(cfg.families.size());
        std::size_t next = 0;
        while (next < cfg.families.size()) {
            const std::size_t batch = std::min<std::size_t>(threads, cfg.families.size() - next);
            futs.clear();
            for (std::size_t i = 0; i < batch; ++i)
                futs.push_back(std::async(std::launch::async, detail::run_family, std::cref(st),
                                          cfg.families[next + i]));
            for (std::size_t i = 0; i < batch; ++i) results[next + i] = futs[i].get();
            next += batch;
        }
        summary.outcomes = std::move(results);
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    nlohmann::json jfam = nlohmann::json::array();
    bool any_fail = false, any_numeric = false;
    for (const auto& oc : summary.outcomes) {
        for (const auto& rep : oc.reports) {
            write_text_file(fs::path(cfg.out_dir) / (rep.family + ".csv"), report_csv(rep));
            write_text_file(fs::path(cfg.out_dir) / (rep.family + ".json"),
                            report_json(rep).dump(2) + "\n");
        }
        jfam.push_back({{"family", oc.family}, {"verdict", oc.verdict}});
        if (oc.verdict.rfind("failed", 0) == 0) any_numeric = true;
        else if (oc.verdict != "pass") any_fail = true;
    }
    nlohmann::json jsummary{{"families", jfam},
                            {"nmax", cfg.nmax},
                            {"radius", cfg.radius},
                            {"quad", {{"radial", cfg.quad.radial},
                                      {"angular", cfg.quad.angular},
                                      {"circle_n", cfg.quad.circle_n}}}};
    write_text_file(fs::path(cfg.out_dir) / "summary.json", jsummary.dump(2) + "\n");

    summary.exit_code = any_numeric ? 3 : (any_fail ? 1 : 0);
    return summary;
}

/// Re-runs `run` for each value of the swept parameter, concatenates the
/// summaries, and flags verdict flips across the sweep.
inline int sweep(const RunConfig& base, const std::string& param, const std::vector<double>& values) {
    static const std::vector<std::string> allowed{"nmax", "radius", "quad.radial", "quad.angular",
                                                  "quad.circle_n"};
    if (std::find(allowed.begin(), allowed.end(), param) == allowed.end())
        throw ConfigError("sweep parameter must be one of nmax, radius, quad.radial, quad.angular, "
                          "quad.circle_n");
    if (values.empty()) throw ConfigError("sweep requires at least one value");

    namespace fs = std::filesystem;
    nlohmann::json jruns = nlohmann::json::array();
    std::map<std::string, std::vector<std::string>> verdicts;
    int exit_code = 0;

    for (double v : values) {
        RunConfig cfg = base;
        if (param == "nmax") cfg.nmax = int(v);
        else if (param == "radius") cfg.radius = v;
        else if (param == "quad.radial") cfg.quad.radial = int(v);
        else if (param == "quad.angular") cfg.quad.angular = int(v);
        else cfg.quad.circle_n = int(v);
        // revalidate the touched preconditions
        if (param == "radius") {
            const CriticalRadii radii = critical_radii(cfg.weight);
            if (!(cfg.radius > radii.rho_w && cfg.radius < 1.0))
                throw ConfigError("sweep radius violates rho_w < radius < 1");
        }
        for (int n : cfg.n_list)
            if (n > cfg.nmax) throw ConfigError("sweep nmax drops below entries of n_list");

        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s_%g", param.c_str(), v);
        std::string tag(buf);
        for (auto& c : tag)
            if (c == '.') c = '_';
        cfg.out_dir = (fs::path(base.out_dir) / tag).string();
        const RunSummary rs = run(cfg);
        exit_code = std::max(exit_code, rs.exit_code);
        nlohmann::json jf = nlohmann::json::array();
        for (const auto& oc : rs.outcomes) {
            jf.push_back({{"family", oc.family}, {"verdict", oc.verdict}});
            verdicts[oc.family].push_back(oc.verdict);
        }
        jruns.push_back({{"value", v}, {"out_dir", cfg.out_dir}, {"families", jf}});
    }

    nlohmann::json flips = nlohmann::json::array();
    for (const auto& [fam, vs] : verdicts)
        if (std::adjacent_find(vs.begin(), vs.end(), std::not_equal_to<>()) != vs.end())
            flips.push_back(fam);
    if (!flips.empty()) exit_code = std::max(exit_code, 1);

    fs::create_directories(base.out_dir);
    nlohmann::json jsweep{{"param", param}, {"runs", jruns}, {"verdict_flips", flips}};
    write_text_file(fs::path(base.out_dir) / "sweep_summary.json", jsweep.dump(2) + "\n");
    return exit_code;
}

} // namespace bergman

#endif
