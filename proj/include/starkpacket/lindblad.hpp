#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "starkpacket/dynamics.hpp"
#include "starkpacket/generator.hpp"
#include "starkpacket/params.hpp"

namespace starkpacket {

/// Two-level density matrix in the rotating frame, parameterized by the
/// excited population and the e-g coherence. The trace is 1 by construction
/// (gg = 1 - ee) and ge is the conjugate of eg.
struct DensityMatrix2 {
    double ee = 0.0;
    complexd eg = 0.0;

    bool physical(double slack = 1.0e-9) const
    {
        return ee >= -slack && ee <= 1.0 + slack &&
               std::norm(eg) <= ee * (1.0 - ee) + slack;
    }
};

/// Generator coefficients driving the master equation, with linear
/// interpolation between grid samples. Masked entries are bridged by linear
/// interpolation from the neighbouring valid samples (held constant past the
/// ends), so the interpolant is defined everywhere the propagator looks.
struct GeneratorInput {
    GeneratorSeries series;
};

/// Right-hand side of the master equation in the rotating frame:
///   d ee/dt = -rate * ee
///   d eg/dt = (-i shift - rate/2) * eg
/// with shift = omega_s - omega0. Negative rates make the population grow;
/// they are applied as-is.
inline DensityMatrix2 lindblad_rhs(const DensityMatrix2& rho, double shift, double rate)
{
    DensityMatrix2 d;
    d.ee = -rate * rho.ee;
    d.eg = complexd(-0.5 * rate, -shift) * rho.eg;
    return d;
}

namespace detail {

/// Generator samples with masked entries replaced by linear interpolation
/// between valid neighbours; leading/trailing runs hold the nearest valid
/// value. Returns false when nothing is valid.
inline bool bridge_masked(const GeneratorSeries& gen, std::vector<double>& shift, std::vector<double>& rate)
{
    const std::size_t n = gen.valid.size();
    shift = gen.shift;
    rate = gen.rate;
    std::size_t first = n, last = n;
    for (std::size_t k = 0; k < n; ++k)
        if (gen.valid[k]) {
            if (first == n) first = k;
            last = k;
        }
    if (first == n) return false;
    for (std::size_t k = 0; k < first; ++k) {
        shift[k] = shift[first];
        rate[k] = rate[first];
    }
    for (std::size_t k = last + 1; k < n; ++k) {
        shift[k] = shift[last];
        rate[k] = rate[last];
    }
    std::size_t prev = first;
    for (std::size_t k = first + 1; k <= last; ++k) {
        if (!gen.valid[k]) continue;
        for (std::size_t j = prev + 1; j < k; ++j) {
            const double w = static_cast<double>(j - prev) / static_cast<double>(k - prev);
            shift[j] = shift[prev] + w * (shift[k] - shift[prev]);
            rate[j] = rate[prev] + w * (rate[k] - rate[prev]);
        }
        prev = k;
    }
    return true;
}

}  // namespace detail

/// Integration start plus the state there. The amplitude vanishes at early
/// times for packet-driven runs, which makes the extracted rate diverge like
/// -2/t; that region is not integrated but seeded from the exact state.
struct MasterSeed {
    std::size_t index = 0;
    DensityMatrix2 rho;
};

struct MasterOptions {
    /// Largest |rate| * dt the RK4 step with linearly interpolated coefficients
    /// is allowed to start on. Integrating from the first unmasked sample is
    /// not enough: with rate ~ -2/t the per-step quadrature error of the
    /// coefficient decays only like the third power of the sample index, and
    /// summing it from the mask edge leaves a bias far above the target
    /// accuracy. Starting once |rate| dt is below this cap keeps the residual
    /// coefficient bias under ~1e-6 at dt = 1e-3.
    double max_rate_dt = 5.0e-3;
};

/// Exact-dynamics seed for packet-driven runs: the first sample that is both
/// valid and integrable per MasterOptions, with the reduced state there taken
/// from the amplitude solution (ee = |psi|^2, eg = psi c0*).
inline std::optional<MasterSeed> try_exact_master_seed(const GeneratorInput& gen, const AmplitudeSeries& psi,
                                                       complexd c0 = 0.0, const MasterOptions& opt = {})
{
    const std::size_t n = gen.series.valid.size();
    if (psi.values.size() != n)
        throw std::invalid_argument("exact_master_seed: grid mismatch");
    const double cap = opt.max_rate_dt / gen.series.grid.dt;
    for (std::size_t k = 0; k < n; ++k) {
        if (!gen.series.valid[k] || std::abs(gen.series.rate[k]) > cap) continue;
        MasterSeed seed;
        seed.index = k;
        seed.rho.ee = std::norm(psi.values[k]);
        seed.rho.eg = psi.values[k] * std::conj(c0);
        return seed;
    }
    return std::nullopt;
}

inline MasterSeed exact_master_seed(const GeneratorInput& gen, const AmplitudeSeries& psi,
                                    complexd c0 = 0.0, const MasterOptions& opt = {})
{
    const auto seed = try_exact_master_seed(gen, psi, c0, opt);
    if (!seed) throw std::runtime_error("exact_master_seed: no valid support");
    return *seed;
}

/// Density-matrix trace under the time-dependent master equation. RK4 with the
/// coefficients linearly interpolated inside each step. Samples before the
/// seed index are filled from `prefix` when given (the exact-state values the
/// seed was derived from), otherwise held at the seed state; either way
/// integration starts at the seed.
struct MasterSeries {
    TimeGrid grid;
    std::vector<DensityMatrix2> rho;
    std::size_t start_index = 0;
};

inline MasterSeries propagate_master(const GeneratorInput& gen, const MasterSeed& seed, const TimeGrid& grid,
                                     const std::vector<DensityMatrix2>& prefix = {})
{
    const std::size_t n = grid.n_samples;
    if (gen.series.grid.dt != grid.dt || gen.series.valid.size() != n)
        throw std::invalid_argument("propagate_master: generator grid mismatch");
    if (seed.index >= n)
        throw std::invalid_argument("propagate_master: seed index outside the grid");

    std::vector<double> shift, rate;
    if (!detail::bridge_masked(gen.series, shift, rate))
        throw std::runtime_error("propagate_master: no valid support");

    MasterSeries out;
    out.grid = grid;
    out.start_index = seed.index;
    out.rho.resize(n);
    for (std::size_t k = 0; k < seed.index; ++k)
        out.rho[k] = k < prefix.size() ? prefix[k] : seed.rho;
    out.rho[seed.index] = seed.rho;

    const double h = grid.dt;
    DensityMatrix2 state = seed.rho;
    for (std::size_t k = seed.index; k + 1 < n; ++k) {
        const double s0 = shift[k], s1 = shift[k + 1];
        const double r0 = rate[k], r1 = rate[k + 1];
        const double sm = 0.5 * (s0 + s1), rm = 0.5 * (r0 + r1);

        const DensityMatrix2 k1 = lindblad_rhs(state, s0, r0);
        const DensityMatrix2 k2 = lindblad_rhs({state.ee + 0.5 * h * k1.ee, state.eg + 0.5 * h * k1.eg}, sm, rm);
        const DensityMatrix2 k3 = lindblad_rhs({state.ee + 0.5 * h * k2.ee, state.eg + 0.5 * h * k2.eg}, sm, rm);
        const DensityMatrix2 k4 = lindblad_rhs({state.ee + h * k3.ee, state.eg + h * k3.eg}, s1, r1);

        state.ee += (h / 6.0) * (k1.ee + 2.0 * k2.ee + 2.0 * k3.ee + k4.ee);
        state.eg += (h / 6.0) * (k1.eg + 2.0 * k2.eg + 2.0 * k3.eg + k4.eg);
        out.rho[k + 1] = state;
    }
    return out;
}

/// Convenience start at t = 0 for runs whose generator is regular from the
/// first sample (constant coefficients, undriven decay).
inline MasterSeries propagate_master(const GeneratorInput& gen, const DensityMatrix2& rho0, const TimeGrid& grid)
{
    if (gen.series.valid.empty() || !gen.series.valid.front())
        throw std::invalid_argument("propagate_master: first sample masked; use an exact seed");
    return propagate_master(gen, MasterSeed{0, rho0}, grid);
}

/// Largest deviation between the propagated trace and the amplitude solution,
/// over the samples the propagation actually covers and the mask accepts.
struct CrosscheckResult {
    double max_population_dev = 0.0;
    double max_coherence_dev = 0.0;
};

inline CrosscheckResult crosscheck_population(const MasterSeries& master, const AmplitudeSeries& psi,
                                              const GeneratorSeries& gen, complexd c0 = 0.0)
{
    if (master.rho.size() != psi.values.size() || master.grid.dt != psi.grid.dt)
        throw std::invalid_argument("crosscheck_population: grid mismatch");
    CrosscheckResult result;
    for (std::size_t k = master.start_index; k < master.rho.size(); ++k) {
        if (k < gen.valid.size() && !gen.valid[k]) continue;
        result.max_population_dev =
            std::max(result.max_population_dev, std::abs(master.rho[k].ee - std::norm(psi.values[k])));
        if (c0 != complexd{})
            result.max_coherence_dev =
                std::max(result.max_coherence_dev, std::abs(master.rho[k].eg - psi.values[k] * std::conj(c0)));
    }
    return result;
}

}  // namespace starkpacket
