// Batch front-end for the Bergman polynomial validators: parses weight
// configs, orchestrates basis construction and validator suites, and emits
// CSV/JSON reports.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bergman/config.hpp"
#include "bergman/representation.hpp"
#include "bergman/runner.hpp"

namespace {

struct Overrides {
    int nmax = -1;
    double radius = -1.0;
    int quad_radial = -1;
    int quad_angular = -1;
    int circle_n = -1;
    std::string out;
    std::vector<std::string> tol;
};

void add_override_flags(CLI::App* app, Overrides& ov) {
    app->add_option("--nmax", ov.nmax, "override nmax");
    app->add_option("--radius", ov.radius, "override contour radius");
    app->add_option("--quad-radial", ov.quad_radial, "override radial quadrature order");
    app->add_option("--quad-angular", ov.quad_angular, "override angular quadrature order");
    app->add_option("--circle-n", ov.circle_n, "override circle trapezoid count");
    app->add_option("--out", ov.out, "override output directory");
    app->add_option("--tol", ov.tol, "tolerance override key=value (repeatable)");
}

bergman::RunConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    bergman::RunConfig cfg = bergman::load_run_config(path);
    if (ov.nmax >= 0) { cfg.nmax = ov.nmax; }
    if (ov.radius >= 0.0) cfg.radius = ov.radius;
    if (ov.quad_radial > 0) cfg.quad.radial = ov.quad_radial;
    if (ov.quad_angular > 0) cfg.quad.angular = ov.quad_angular;
    if (ov.circle_n > 0) cfg.quad.circle_n = ov.circle_n;
    if (!ov.out.empty()) cfg.out_dir = ov.out;
    for (const auto& kv : ov.tol) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw bergman::ConfigError("--tol expects key=value: " + kv);
        cfg.tol[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    bergman::validate_run_config(cfg);
    return cfg;
}

int cmd_validate(const std::string& config_path, const Overrides& ov) {
    const bergman::RunConfig cfg = load_with_overrides(config_path, ov);
    const bergman::RunSummary rs = bergman::run(cfg);
    for (const auto& oc : rs.outcomes)
        std::printf("%-12s %s\n", oc.family.c_str(), oc.verdict.c_str());
    std::printf("reports written to %s\n", cfg.out_dir.c_str());
    return rs.exit_code;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov, const std::string& param,
              const std::vector<double>& values) {
    const bergman::RunConfig cfg = load_with_overrides(config_path, ov);
    const int code = bergman::sweep(cfg, param, values);
    std::printf("sweep summary written to %s/sweep_summary.json\n", cfg.out_dir.c_str());
    return code;
}

int cmd_basis(const std::string& config_path, const Overrides& ov, const std::string& export_path) {
    const bergman::RunConfig cfg = load_with_overrides(config_path, ov);
    const bergman::DiskRule rule =
        bergman::build_disk_rule(cfg.weight, cfg.quad.radial, cfg.quad.angular);
    const bergman::OrthoBasis basis = bergman::bergman_orthonormalize(cfg.weight, cfg.nmax, rule);
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& p : basis.polys) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : p.coeffs()) row.push_back({c.real(), c.imag()});
        jc.push_back(row);
    }
    nlohmann::json j{{"degree", basis.degree()}, {"gammas", basis.gammas}, {"coeffs", jc}};
    bergman::write_text_file(export_path, j.dump(2) + "\n");
    std::printf("basis (degree %d) exported to %s\n", basis.degree(), export_path.c_str());
    return 0;
}

int cmd_alpha(const std::string& config_path, const Overrides& ov, int n, int kmax,
              const std::string& export_path) {
    const bergman::RunConfig cfg = load_with_overrides(config_path, ov);
    if (kmax <= 0) kmax = std::min(cfg.nmax, n + 32);
    if (kmax > cfg.nmax) throw bergman::ConfigError("alpha: --kmax must not exceed nmax");
    const bergman::DiskRule rule =
        bergman::build_disk_rule(cfg.weight, cfg.quad.radial, cfg.quad.angular);
    const bergman::OrthoBasis basis = bergman::bergman_orthonormalize(cfg.weight, cfg.nmax, rule);
    const bergman::LaurentCoeffs lc = bergman::laurent_coeffs(cfg.weight, kmax);
    const bergman::AlphaTable tab = bergman::alpha_table(cfg.weight, basis, n, kmax, lc);
    nlohmann::json jrows = nlohmann::json::array();
    for (int r = tab.n0; r <= tab.K; ++r) {
        nlohmann::json ja = nlohmann::json::array();
        for (int k = r; k <= tab.K; ++k) {
            const bergman::cx a = tab.alpha(r, k);
            ja.push_back({a.real(), a.imag()});
        }
        jrows.push_back({{"row", r}, {"alpha", ja}});
    }
    nlohmann::json jh = nlohmann::json::array();
    if (kmax >= n + 2) {
        const bergman::HSeries hs = bergman::hg_recursion(tab, kmax - n - 1);
        for (const auto& h : hs.h) jh.push_back({h.real(), h.imag()});
    }
    nlohmann::json j{{"n", tab.n0},
                     {"kmax", tab.K},
                     {"crosscheck_max_err", tab.crosscheck_max_err},
                     {"below_diag_max", tab.below_diag_max},
                     {"h_series", jh},
                     {"rows", jrows}};
    bergman::write_text_file(export_path, j.dump(2) + "\n");
    std::printf("alpha table (rows %d..%d) exported to %s\n", tab.n0, tab.K, export_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bergman orthogonal polynomial validators for disk weights "
                 "|v|^2 prod |(z-a_k)/(1-conj(a_k)z)|^{m_k}"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path, param, export_path = "basis.json", alpha_path = "alpha.json";
    std::vector<double> values;
    int alpha_n = 8, alpha_kmax = 0;

    CLI::App* validate = app.add_subcommand("validate", "run validator families from a config");
    validate->add_option("config", config_path, "JSON run configuration")->required();
    add_override_flags(validate, ov);

    CLI::App* sw = app.add_subcommand("sweep", "re-run validation across a parameter sweep");
    sw->add_option("config", config_path, "JSON run configuration")->required();
    sw->add_option("--param", param, "nmax | radius | quad.radial | quad.angular | quad.circle_n")
        ->required();
    sw->add_option("--values", values, "sweep values")->required()->delimiter(',');
    add_override_flags(sw, ov);

    CLI::App* ba = app.add_subcommand("basis", "export the orthonormal basis as JSON");
    ba->add_option("config", config_path, "JSON run configuration")->required();
    ba->add_option("--export", export_path, "output path");
    add_override_flags(ba, ov);

    CLI::App* al = app.add_subcommand("alpha", "export an alpha coefficient table as JSON");
    al->add_option("config", config_path, "JSON run configuration")->required();
    al->add_option("--n", alpha_n, "base row");
    al->add_option("--kmax", alpha_kmax, "last column (default n+32 capped at nmax)");
    al->add_option("--export", alpha_path, "output path");
    add_override_flags(al, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(config_path, ov);
        if (sw->parsed()) return cmd_sweep(config_path, ov, param, values);
        if (ba->parsed()) return cmd_basis(config_path, ov, export_path);
        if (al->parsed()) return cmd_alpha(config_path, ov, alpha_n, alpha_kmax, alpha_path);
    } catch (const bergman::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
