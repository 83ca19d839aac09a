// Command-line front end: scenario runs, figure-series reproduction, parameter
// sweeps and the self-validation suite.
//
// Exit codes: 0 success, 1 usage or config error, 2 validation failure,
// 3 I/O error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starkpacket/csv.hpp"
#include "starkpacket/scenario.hpp"
#include "starkpacket/sweep.hpp"
#include "starkpacket/validation.hpp"
#include "starkpacket/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace starkpacket;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
}

std::string trim_zeros(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

int run_simulate(const std::string& config_path, std::string out_dir, bool absolute, double detector_offset)
{
    auto cfg = parse_config(read_file(config_path));
    if (out_dir.empty()) out_dir = cfg.output_directory;
    const auto result = run_scenario(cfg);

    ensure_directory(out_dir);
    const fs::path dir(out_dir);
    const double delay = std::abs(detector_offset) / result.params.c;
    emit_csv(result, (dir / "series.csv").string(), absolute, delay);
    write_file(dir / "summary.json", summary_json(result));
    std::printf("wrote %s and summary.json (max |shift| = %g, wall %.2f s)\n",
                (dir / "series.csv").string().c_str(), result.summaries.max_abs_shift, result.wall_seconds);
    return 0;
}

int run_figures(const std::string& prefix, const std::string& out_dir)
{
    ensure_directory(out_dir);
    const fs::path dir(out_dir);
    for (const auto& [delta, width] : checks::figure_triples()) {
        ScenarioConfig cfg;
        cfg.delta = delta;
        cfg.linewidth = width;
        const auto result = run_scenario(cfg);
        const std::string name =
            prefix + "_delta" + trim_zeros(delta) + "_linewidth" + trim_zeros(width) + ".csv";
        emit_csv(result, (dir / name).string());
        std::printf("wrote %s\n", (dir / name).string().c_str());
    }
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& delta_spec, const std::string& width_spec,
                  const std::string& out_file)
{
    const auto base = parse_config(read_file(config_path));
    const auto deltas = parse_sweep_axis(delta_spec);
    const auto widths = parse_sweep_axis(width_spec);
    const auto rows = run_sweep(base, deltas, widths, sweep_thread_cap());
    const auto table = sweep_table_csv(rows);
    if (out_file.empty()) {
        std::fputs(table.c_str(), stdout);
    } else {
        write_file(out_file, table);
        std::printf("wrote %s (%zu cells)\n", out_file.c_str(), rows.size());
    }
    return 0;
}

int run_validate()
{
    const auto results = run_validation_checks();
    int failures = 0;
    int index = 0;
    for (const auto& r : results) {
        ++index;
        if (!r.pass) ++failures;
        std::printf("%s  %2d  %s  (measured %.3e, tolerance %.3e)\n", r.pass ? "PASS" : "FAIL", index,
                    r.name.c_str(), r.measured, r.tolerance);
        std::printf("      %s\n", r.detail.c_str());
    }
    std::printf("%d/%d checks passed\n", index - failures, index);
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"single-photon packet scattering on a waveguide two-level emitter"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    std::string config_path, out_dir, out_file;
    std::string delta_spec, width_spec;
    bool absolute = false;
    double detector_offset = 0.0;

    auto* simulate = app.add_subcommand("simulate", "run one configured scenario and export its series");
    simulate->add_option("config", config_path, "config file (key=value or JSON)")->required();
    simulate->add_option("-o,--output", out_dir, "output directory (default: config output.directory)");
    simulate->add_flag("--absolute", absolute, "export the shift column as an absolute frequency");
    simulate->add_option("--detector-offset", detector_offset,
                         "detector position; shifts the exported time axis by |x|/c");

    auto* fig2 = app.add_subcommand("fig2", "emit the three shift-series runs");
    fig2->add_option("-o,--output", out_dir, "output directory");

    auto* fig3 = app.add_subcommand("fig3", "emit the three difference-signal runs");
    fig3->add_option("-o,--output", out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "scan the (delta, linewidth) plane");
    sweep->add_option("config", config_path, "base config file")->required();
    sweep->add_option("--delta", delta_spec, "detuning axis start:stop:count")->required();
    sweep->add_option("--linewidth", width_spec, "linewidth axis start:stop:count")->required();
    sweep->add_option("-o,--output", out_file, "write the summary table here instead of stdout");

    app.add_subcommand("validate", "run every built-in correctness check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(config_path, out_dir, absolute, detector_offset);
        if (fig2->parsed()) return run_figures("fig2", out_dir.empty() ? "." : out_dir);
        if (fig3->parsed()) return run_figures("fig3", out_dir.empty() ? "." : out_dir);
        if (sweep->parsed()) return run_sweep_cmd(config_path, delta_spec, width_spec, out_file);
        return run_validate();
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
