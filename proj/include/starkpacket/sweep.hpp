#pragma once

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "starkpacket/csv.hpp"
#include "starkpacket/scenario.hpp"

namespace starkpacket {

/// Inclusive linear range "start:stop:count" for one sweep axis.
struct SweepAxis {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    double at(std::size_t i) const
    {
        if (count < 2) return start;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

inline SweepAxis parse_sweep_axis(const std::string& text)
{
    SweepAxis axis;
    char trailing = 0;
    long long count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lld%c", &axis.start, &axis.stop, &count, &trailing) != 3 ||
        count < 1)
        throw ConfigError("sweep axis must be start:stop:count, got '" + text + "'");
    axis.count = static_cast<std::size_t>(count);
    return axis;
}

struct SweepRow {
    double delta = 0.0;
    double linewidth = 0.0;
    bool ok = false;
    std::string error;
    ScenarioSummaries summaries;
};

/// Parallelism cap: STARK_PACKET_THREADS if set, hardware concurrency otherwise.
inline unsigned sweep_thread_cap()
{
    if (const char* env = std::getenv("STARK_PACKET_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// One scenario per (delta, linewidth) cell, delta as the outer axis. Cells run
/// concurrently but land in fixed grid order, so the table is identical however
/// the work was scheduled. A failing cell records its error and the sweep
/// continues.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepAxis& deltas,
                                       const SweepAxis& widths, unsigned threads = sweep_thread_cap())
{
    const std::size_t total = deltas.count * widths.count;
    std::vector<SweepRow> rows(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            SweepRow& row = rows[i];
            row.delta = deltas.at(i / widths.count);
            row.linewidth = widths.at(i % widths.count);
            try {
                ScenarioConfig cfg = base;
                cfg.delta = row.delta;
                cfg.linewidth = row.linewidth;
                row.summaries = run_scenario(cfg).summaries;
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const unsigned n = std::min<std::size_t>(threads, total);
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline std::string sweep_table_csv(const std::vector<SweepRow>& rows)
{
    std::string out =
        "delta,linewidth,status,max_abs_shift,max_population,integrated_reflection,integrated_transmission,"
        "master_population_dev\n";
    for (const auto& row : rows) {
        detail::append_sci(out, row.delta);
        out += ',';
        detail::append_sci(out, row.linewidth);
        if (row.ok) {
            out += ",ok,";
            detail::append_sci(out, row.summaries.max_abs_shift);
            out += ',';
            detail::append_sci(out, row.summaries.max_population);
            out += ',';
            detail::append_sci(out, row.summaries.integrated_reflection);
            out += ',';
            detail::append_sci(out, row.summaries.integrated_transmission);
            out += ',';
            detail::append_sci(out, row.summaries.master_population_dev.value_or(0.0));
        } else {
            std::string msg = row.error;
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ' ';
            out += ",error: " + msg + ",,,,,";
        }
        out += '\n';
    }
    return out;
}

}  // namespace starkpacket
