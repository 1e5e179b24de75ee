#ifndef BERGMAN_CONFIG_HPP
#define BERGMAN_CONFIG_HPP

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/weight.hpp"

namespace bergman {

/// Raised for malformed or precondition-violating configuration. The CLI
/// maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadConfig {
    int radial = 96;
    int angular = 256;
    int circle_n = 512;
};

struct RunConfig {
    WeightSpec weight;
    int nmax = 64;
    std::vector<int> n_list;
    QuadConfig quad;
    double radius = 0.75;
    std::vector<std::string> families;
    std::string out_dir = "out";
    std::map<std::string, double> tol;
};

/// Weight schema:
///   {"outer": {"kind": "poly"|"power"|"exp",
///              "factors": [[re,im,r],...]        (poly/power)
///              "coeffs":  [[re,im],...],          (exp)
///              "scale": 1.0},
///    "singularities": [[re,im,m],...]}
inline WeightSpec parse_weight_json(const nlohmann::json& j) {
    WeightSpec spec;
    try {
        if (j.contains("outer")) {
            const auto& jo = j.at("outer");
            const std::string kind = jo.value("kind", "poly");
            OuterPart o;
            if (kind == "poly") o.kind = OuterPart::Kind::Poly;
            else if (kind == "power") o.kind = OuterPart::Kind::Power;
            else if (kind == "exp") o.kind = OuterPart::Kind::Exp;
            else throw ConfigError("weight.outer.kind must be poly, power or exp");
            o.scale = jo.value("scale", 1.0);
            if (o.kind == OuterPart::Kind::Exp) {
                for (const auto& c : jo.value("coeffs", nlohmann::json::array())) {
                    if (!c.is_array() || c.size() != 2) throw ConfigError("outer.coeffs entries must be [re,im]");
                    o.exp_coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
                }
            } else {
                for (const auto& f : jo.value("factors", nlohmann::json::array())) {
                    if (!f.is_array() || f.size() != 3) throw ConfigError("outer.factors entries must be [re,im,r]");
                    o.factors.emplace_back(cx(f[0].get<double>(), f[1].get<double>()), f[2].get<double>());
                }
            }
            spec.outer = o;
        }
        for (const auto& s : j.value("singularities", nlohmann::json::array())) {
            if (!s.is_array() || s.size() != 3) throw ConfigError("singularities entries must be [re,im,m]");
            spec.singularities.push_back({cx(s[0].get<double>(), s[1].get<double>()), s[2].get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("weight config malformed: ") + e.what());
    }
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("weight config invalid: ") + e.what());
    }
    return spec;
}

inline void validate_run_config(RunConfig& cfg) {
    if (cfg.nmax < 0) throw ConfigError("nmax must be nonnegative");
    if (cfg.n_list.empty())
        for (int n = 8; n <= cfg.nmax; n *= 2) cfg.n_list.push_back(n);
    for (int n : cfg.n_list)
        if (n < 0 || n > cfg.nmax) throw ConfigError("n_list must be contained in [0, nmax]");
    const CriticalRadii radii = critical_radii(cfg.weight);
    if (!(cfg.radius > radii.rho_w && cfg.radius < 1.0))
        throw ConfigError("radius violates the precondition rho_w < radius < 1 (rho_w = " +
                          std::to_string(radii.rho_w) + ")");
    if (cfg.quad.radial < 4 || cfg.quad.angular < 4) throw ConfigError("quad orders must be >= 4");
    if (cfg.quad.circle_n < 16 || cfg.quad.circle_n % 2 != 0)
        throw ConfigError("quad.circle_n must be even and >= 16");
    if (cfg.families.empty()) throw ConfigError("families must not be empty");
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        if (!j.contains("weight")) throw ConfigError("config missing required key: weight");
        cfg.weight = parse_weight_json(j.at("weight"));
        cfg.nmax = j.value("nmax", 64);
        cfg.radius = j.value("radius", 0.75);
        cfg.out_dir = j.value("out_dir", "out");
        if (j.contains("n_list"))
            for (const auto& n : j.at("n_list")) cfg.n_list.push_back(n.get<int>());
        if (j.contains("quad")) {
            const auto& q = j.at("quad");
            cfg.quad.radial = q.value("radial", cfg.quad.radial);
            cfg.quad.angular = q.value("angular", cfg.quad.angular);
            cfg.quad.circle_n = q.value("circle_n", cfg.quad.circle_n);
        }
        if (j.contains("families"))
            for (const auto& f : j.at("families")) cfg.families.push_back(f.get<std::string>());
        if (j.contains("tol"))
            for (const auto& [key, val] : j.at("tol").items()) cfg.tol[key] = val.get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config malformed: ") + e.what());
    }

    validate_run_config(cfg);
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    return parse_run_config(j);
}

} // namespace bergman

#endif
