#ifndef BERGMAN_REPORT_HPP
#define BERGMAN_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bergman/asymptotics.hpp"

namespace bergman {

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// CSV columns: family,n,observed,predicted,scaled_error
inline std::string report_csv(const ConvergenceReport& rep) {
    std::string out = "family,n,observed,predicted,scaled_error\n";
    for (const auto& r : rep.rows) {
        out += rep.family;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += format_g17(r.observed);
        out += ',';
        out += format_g17(r.predicted);
        out += ',';
        out += format_g17(r.scaled);
        out += '\n';
    }
    return out;
}

inline nlohmann::json report_json(const ConvergenceReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n}, {"observed", r.observed}, {"predicted", r.predicted},
                        {"scaled_error", r.scaled}});
    nlohmann::json j{{"family", rep.family},
                     {"verdict", rep.pass ? "pass" : "fail"},
                     {"slack", rep.slack},
                     {"rows", rows}};
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << body;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

} // namespace bergman

#endif
