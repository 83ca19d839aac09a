#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "starkpacket/packet.hpp"
#include "starkpacket/params.hpp"

namespace starkpacket {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat scenario description. Defaults reproduce the natural-unit setting:
/// gamma_1d = 1, c = 1, rho_1d = 1/(2 pi), carrier reference 1e6, resonant
/// mode-matched packet, dt = 1e-3 out to t = 10, emitter starting empty.
struct ScenarioConfig {
    double gamma_1d = 1.0;
    double omega0 = 1.0e6;
    double rho_1d = 1.0 / two_pi;
    double c = 1.0;

    std::string packet_kind = "exponential";
    double delta = 0.0;
    double linewidth = 1.0;
    std::string packet_file;

    double dt = 1.0e-3;
    double t_max = 10.0;

    double psi0_re = 0.0;
    double psi0_im = 0.0;
    double c0_re = 0.0;
    double c0_im = 0.0;

    std::string output_directory = ".";
    std::vector<std::string> output_series;  // empty means every column

    bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline const std::vector<std::string>& csv_column_names()
{
    static const std::vector<std::string> names{"re_psi", "im_psi",       "population", "shift",
                                                "rate",   "valid",        "I0",         "Ia",
                                                "Ib",     "diff_dynamic", "diff_static"};
    return names;
}

inline std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& value, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects a number, got '" +
                          value + "'");
    }
    if (used != value.size())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects a number, got '" +
                          value + "'");
    return v;
}

inline std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline void apply_key(ScenarioConfig& cfg, const std::string& key, const std::string& value, std::size_t line)
{
    if (key == "params.gamma_1d") cfg.gamma_1d = parse_double(key, value, line);
    else if (key == "params.omega0") cfg.omega0 = parse_double(key, value, line);
    else if (key == "params.rho_1d") cfg.rho_1d = parse_double(key, value, line);
    else if (key == "params.c") cfg.c = parse_double(key, value, line);
    else if (key == "packet.kind") cfg.packet_kind = value;
    else if (key == "packet.delta") cfg.delta = parse_double(key, value, line);
    else if (key == "packet.linewidth") cfg.linewidth = parse_double(key, value, line);
    else if (key == "packet.file") cfg.packet_file = value;
    else if (key == "grid.dt") cfg.dt = parse_double(key, value, line);
    else if (key == "grid.t_max") cfg.t_max = parse_double(key, value, line);
    else if (key == "initial.psi0_re") cfg.psi0_re = parse_double(key, value, line);
    else if (key == "initial.psi0_im") cfg.psi0_im = parse_double(key, value, line);
    else if (key == "initial.c0_re") cfg.c0_re = parse_double(key, value, line);
    else if (key == "initial.c0_im") cfg.c0_im = parse_double(key, value, line);
    else if (key == "output.directory") cfg.output_directory = value;
    else if (key == "output.series") cfg.output_series = split_list(value);
    else
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
}

inline std::string format_full(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void validate_config(const ScenarioConfig& cfg)
{
    const auto fail = [](const std::string& key, const std::string& what) {
        throw ConfigError("config key '" + key + "': " + what);
    };
    if (!(cfg.gamma_1d > 0.0)) fail("params.gamma_1d", "must be positive");
    if (!(cfg.rho_1d > 0.0)) fail("params.rho_1d", "must be positive");
    if (!(cfg.c > 0.0)) fail("params.c", "must be positive");
    if (!(cfg.omega0 >= 0.0)) fail("params.omega0", "must be non-negative");
    if (cfg.packet_kind != "exponential" && cfg.packet_kind != "tabulated")
        fail("packet.kind", "must be 'exponential' or 'tabulated'");
    if (cfg.packet_kind == "exponential" && !(cfg.linewidth > 0.0))
        fail("packet.linewidth", "must be positive");
    if (cfg.packet_kind == "tabulated" && cfg.packet_file.empty())
        fail("packet.file", "required for tabulated packets");
    if (!(cfg.dt > 0.0)) fail("grid.dt", "must be positive");
    if (!(cfg.t_max > cfg.dt)) fail("grid.t_max", "must exceed grid.dt");
    const double weight = cfg.psi0_re * cfg.psi0_re + cfg.psi0_im * cfg.psi0_im + cfg.c0_re * cfg.c0_re +
                          cfg.c0_im * cfg.c0_im;
    if (weight > 1.0 + 1e-9) fail("initial", "|psi0|^2 + |c0|^2 exceeds 1");
    for (const auto& name : cfg.output_series) {
        const auto& known = detail::csv_column_names();
        if (name != "t" && std::find(known.begin(), known.end(), name) == known.end())
            fail("output.series", "unknown column '" + name + "'");
    }
}

namespace detail {

inline ScenarioConfig parse_config_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("JSON config must be an object");

    ScenarioConfig cfg;
    for (const auto& [section, body] : doc.items()) {
        if (!body.is_object()) throw ConfigError("JSON config section '" + section + "' must be an object");
        for (const auto& [name, value] : body.items()) {
            const std::string key = section + "." + name;
            std::string text_value;
            if (value.is_string()) text_value = value.get<std::string>();
            else if (value.is_number()) text_value = format_full(value.get<double>());
            else if (value.is_array() && key == "output.series") {
                for (const auto& item : value) {
                    if (!item.is_string()) throw ConfigError("key 'output.series': expects strings");
                    cfg.output_series.push_back(item.get<std::string>());
                }
                continue;
            } else
                throw ConfigError("key '" + key + "': unsupported JSON value");
            apply_key(cfg, key, text_value, 0);
        }
    }
    validate_config(cfg);
    return cfg;
}

}  // namespace detail

/// Parses either the flat key=value format ('#' comments) or a JSON document
/// with the same schema; an empty document yields the full defaults.
inline ScenarioConfig parse_config(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return detail::parse_config_json(text);

    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        detail::apply_key(cfg, key, value, line_no);
    }
    validate_config(cfg);
    return cfg;
}

/// Canonical key=value rendering; parse_config(emit_config(c)) == c.
inline std::string emit_config(const ScenarioConfig& cfg)
{
    std::ostringstream out;
    out << "params.gamma_1d=" << detail::format_full(cfg.gamma_1d) << '\n'
        << "params.omega0=" << detail::format_full(cfg.omega0) << '\n'
        << "params.rho_1d=" << detail::format_full(cfg.rho_1d) << '\n'
        << "params.c=" << detail::format_full(cfg.c) << '\n'
        << "packet.kind=" << cfg.packet_kind << '\n'
        << "packet.delta=" << detail::format_full(cfg.delta) << '\n'
        << "packet.linewidth=" << detail::format_full(cfg.linewidth) << '\n'
        << "packet.file=" << cfg.packet_file << '\n'
        << "grid.dt=" << detail::format_full(cfg.dt) << '\n'
        << "grid.t_max=" << detail::format_full(cfg.t_max) << '\n'
        << "initial.psi0_re=" << detail::format_full(cfg.psi0_re) << '\n'
        << "initial.psi0_im=" << detail::format_full(cfg.psi0_im) << '\n'
        << "initial.c0_re=" << detail::format_full(cfg.c0_re) << '\n'
        << "initial.c0_im=" << detail::format_full(cfg.c0_im) << '\n'
        << "output.directory=" << cfg.output_directory << '\n';
    out << "output.series=";
    for (std::size_t i = 0; i < cfg.output_series.size(); ++i)
        out << (i ? "," : "") << cfg.output_series[i];
    out << '\n';
    return out.str();
}

/// Tabulated packet file: CSV with header `x,re,im`, strictly increasing x.
inline TabulatedChannel load_packet_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open packet file: " + path);
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "x,re,im")
        throw std::runtime_error("packet file " + path + ": expected header 'x,re,im'");
    TabulatedChannel ch;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = detail::trim(line);
        if (s.empty()) continue;
        double x, re, im;
        if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
            throw std::runtime_error("packet file " + path + ": bad row at line " + std::to_string(line_no));
        ch.x.push_back(x);
        ch.amp.emplace_back(re, im);
    }
    return ch;
}

}  // namespace starkpacket
