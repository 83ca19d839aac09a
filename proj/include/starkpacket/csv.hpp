#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "starkpacket/scenario.hpp"

namespace starkpacket {

namespace detail {

/// Scientific notation with 12 significant digits, locale-independent.
inline void append_sci(std::string& out, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    out += buf;
}

}  // namespace detail

/// Fixed column set of the time-series export. `output.series` in the config
/// selects a subset; t is always first. The shift column is the rotating-frame
/// value unless absolute_shift adds omega0 back.
inline std::string csv_text(const SimulationResult& result, bool absolute_shift = false,
                            double detector_delay = 0.0)
{
    const auto& wanted = result.config.output_series;
    auto selected = [&](const char* name) {
        if (wanted.empty()) return true;
        for (const auto& w : wanted)
            if (w == name) return true;
        return false;
    };

    std::string out;
    out.reserve(result.grid.n_samples * 200);
    out += "t";
    for (const auto& name : detail::csv_column_names())
        if (selected(name.c_str())) out += "," + name;
    out += '\n';

    const double omega0 = result.params.omega0;
    for (std::size_t k = 0; k < result.grid.n_samples; ++k) {
        detail::append_sci(out, result.grid.time(k) + detector_delay);
        auto column = [&](const char* name, double v) {
            if (!selected(name)) return;
            out += ',';
            detail::append_sci(out, v);
        };
        column("re_psi", result.psi.values[k].real());
        column("im_psi", result.psi.values[k].imag());
        column("population", std::norm(result.psi.values[k]));
        column("shift", result.generator.shift[k] + (absolute_shift ? omega0 : 0.0));
        column("rate", result.generator.rate[k]);
        if (selected("valid")) out += result.generator.valid[k] ? ",1" : ",0";
        column("I0", result.intensity.i0[k]);
        column("Ia", result.intensity.ia[k]);
        column("Ib", result.intensity.ib[k]);
        column("diff_dynamic", result.diff_dynamic[k]);
        column("diff_static", result.diff_static[k]);
        out += '\n';
    }
    return out;
}

inline void emit_csv(const SimulationResult& result, const std::string& path, bool absolute_shift = false,
                     double detector_delay = 0.0)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << csv_text(result, absolute_shift, detector_delay);
    if (!out) throw std::runtime_error("write failed: " + path);
}

/// Scalar summaries, config echo, version and wall clock as JSON.
inline std::string summary_json(const SimulationResult& result)
{
    nlohmann::json j;
    j["version"] = result.tool_version;
    j["wall_seconds"] = result.wall_seconds;
    j["config"] = emit_config(result.config);
    auto& s = j["summaries"];
    s["max_abs_shift"] = result.summaries.max_abs_shift;
    s["max_population"] = result.summaries.max_population;
    s["integrated_reflection"] = result.summaries.integrated_reflection;
    s["integrated_transmission"] = result.summaries.integrated_transmission;
    s["input_tail_fraction"] = result.summaries.input_tail_fraction;
    if (result.summaries.master_population_dev)
        s["master_population_dev"] = *result.summaries.master_population_dev;
    if (result.summaries.master_coherence_dev)
        s["master_coherence_dev"] = *result.summaries.master_coherence_dev;
    return j.dump(2) + "\n";
}

}  // namespace starkpacket
