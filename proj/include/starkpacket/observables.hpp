#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "starkpacket/dynamics.hpp"
#include "starkpacket/generator.hpp"
#include "starkpacket/packet.hpp"
#include "starkpacket/params.hpp"

namespace starkpacket {

/// Detector-side intensities in emitter-local retarded time (detector offsets
/// are a pure time shift and are applied at export if requested):
///   I0 = |free forward input at the emitter|^2
///   Ib = beta |psi|^2
///   Ia = |free input + sqrt(beta) psi|^2, summed at the amplitude level.
struct Intensities {
    double i0 = 0.0;
    double ia = 0.0;
    double ib = 0.0;
};

inline Intensities intensities(const PhysicalParams& params, const PacketSpec& packet,
                               const AmplitudeSeries& psi, double t)
{
    const std::size_t k = detail::grid_index(psi.grid, t);
    const complexd input = packet_amplitude_at(packet, -packet.c * t, Channel::forward);
    const complexd emitted = std::sqrt(params.beta) * psi.values[k];
    Intensities out;
    out.i0 = std::norm(input);
    out.ib = std::norm(std::sqrt(params.beta) * psi.values[k]);
    out.ia = std::norm(input + emitted);
    return out;
}

struct IntensitySeries {
    TimeGrid grid;
    std::vector<double> i0;
    std::vector<double> ia;
    std::vector<double> ib;
};

inline IntensitySeries intensity_series(const PhysicalParams& params, const PacketSpec& packet,
                                        const AmplitudeSeries& psi)
{
    IntensitySeries out;
    out.grid = psi.grid;
    const std::size_t n = psi.values.size();
    out.i0.resize(n);
    out.ia.resize(n);
    out.ib.resize(n);
    const double root_beta = std::sqrt(params.beta);
    for (std::size_t k = 0; k < n; ++k) {
        const complexd input = packet_amplitude_at(packet, -packet.c * psi.grid.time(k), Channel::forward);
        out.i0[k] = std::norm(input);
        out.ib[k] = std::norm(root_beta * psi.values[k]);
        out.ia[k] = std::norm(input + root_beta * psi.values[k]);
    }
    return out;
}

namespace detail {

/// Shift samples with masked entries replaced for integration purposes: the
/// leading masked run is a straight line from the continuous-extension value
/// delta/2 at t = 0 to the first valid sample, interior runs interpolate
/// between valid neighbours, a trailing run holds the last valid value.
inline std::vector<double> shift_for_integration(const GeneratorSeries& gen, double delta)
{
    const std::size_t n = gen.shift.size();
    std::vector<double> shift = gen.shift;
    std::size_t first = n;
    for (std::size_t k = 0; k < n; ++k)
        if (gen.valid[k]) {
            first = k;
            break;
        }
    if (first == n)
        throw std::invalid_argument("shift_for_integration: no valid support");

    const double anchor = 0.5 * delta;
    for (std::size_t k = 0; k < first; ++k) {
        const double w = static_cast<double>(k) / static_cast<double>(first);
        shift[k] = anchor + w * (shift[first] - anchor);
    }
    std::size_t prev = first;
    for (std::size_t k = first + 1; k < n; ++k) {
        if (!gen.valid[k]) continue;
        for (std::size_t j = prev + 1; j < k; ++j) {
            const double w = static_cast<double>(j - prev) / static_cast<double>(k - prev);
            shift[j] = shift[prev] + w * (shift[k] - shift[prev]);
        }
        prev = k;
    }
    for (std::size_t k = prev + 1; k < n; ++k) shift[k] = shift[prev];
    return shift;
}

inline std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double dt)
{
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 1; k < f.size(); ++k)
        out[k] = out[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
    return out;
}

}  // namespace detail

/// Accumulated interference phase: the integral of (delta - shift(t')) from 0
/// to each grid sample, masked shift entries bridged as described above.
/// Trapezoid accumulation with the endpoint-derivative correction, so the
/// quadrature bias stays below the interference-equivalence tolerance even for
/// rapidly oscillating shifts.
inline std::vector<double> phase_integral(const GeneratorSeries& gen, double delta)
{
    const auto shift = detail::shift_for_integration(gen, delta);
    std::vector<double> integrand(shift.size());
    for (std::size_t k = 0; k < shift.size(); ++k) integrand[k] = delta - shift[k];
    auto phase = detail::cumulative_trapezoid(integrand, gen.grid.dt);
    const auto slope = detail::sampled_derivative(integrand, gen.grid.dt);
    const double c = gen.grid.dt * gen.grid.dt / 12.0;
    for (std::size_t k = 1; k < phase.size(); ++k) phase[k] -= c * (slope[k] - slope[0]);
    return phase;
}

/// Two-path interference at one instant; phase is the accumulated detuning
/// between the input color and the emitted color, with the pi offset fixed by
/// the sign of the emitted amplitude when the emitter starts empty.
inline double interference_intensity(double i0, double ib, double phase)
{
    return i0 + ib + 2.0 * std::sqrt(i0 * ib) * std::cos(pi + phase);
}

/// Forward intensity reconstructed from the interference formula rather than
/// the amplitudes. Only established for the exponential packet starting from
/// an empty emitter; anything else is refused.
inline std::vector<double> interference_formula(const PhysicalParams& params, const PacketSpec& packet,
                                                const AmplitudeSeries& psi, const InitialCondition& init = {})
{
    if (packet.kind != PacketKind::exponential)
        throw std::domain_error("interference_formula: established for the exponential packet only");
    if (init.psi0 != complexd{})
        throw std::domain_error("interference_formula: established for psi(0) = 0 only");

    const auto series = intensity_series(params, packet, psi);
    const auto gen = stark_shift_numeric(psi);
    const auto phase = phase_integral(gen, packet.delta);
    std::vector<double> ia(phase.size());
    for (std::size_t k = 0; k < ia.size(); ++k)
        ia[k] = interference_intensity(series.i0[k], series.ib[k], phase[k]);
    return ia;
}

enum class FrequencyMode { dynamic_shift, static_frequency };

/// Difference signal (Ia - I0) - Ib, which by the interference formula equals
/// the cross term 2 sqrt(I0 Ib) cos(pi + phase). The dynamic mode accumulates
/// the extracted shift in the phase; the static mode pretends the transition
/// frequency never moves, leaving the bare detuning phase delta * t.
inline std::vector<double> difference_signal(const PhysicalParams& params, const PacketSpec& packet,
                                             const AmplitudeSeries& psi, FrequencyMode mode)
{
    const auto series = intensity_series(params, packet, psi);
    const std::size_t n = series.i0.size();
    std::vector<double> phase(n);
    if (mode == FrequencyMode::dynamic_shift) {
        const auto gen = stark_shift_numeric(psi);
        phase = phase_integral(gen, packet.delta);
    } else {
        for (std::size_t k = 0; k < n; ++k) phase[k] = packet.delta * psi.grid.time(k);
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = 2.0 * std::sqrt(series.i0[k] * series.ib[k]) * std::cos(pi + phase[k]);
    return out;
}

/// Long-packet (monochromatic) scattering ratios. The reflection is computed
/// and the transmission defined as its complement, so the two always sum to 1
/// exactly, bit for bit.
struct ScatterRatios {
    double reflection = 1.0;
    double transmission = 0.0;
};

inline ScatterRatios monochromatic_ratios(double delta, double gamma_1d)
{
    ScatterRatios r;
    r.reflection = gamma_1d * gamma_1d / (gamma_1d * gamma_1d + 4.0 * delta * delta);
    r.transmission = 1.0 - r.reflection;
    return r;
}

/// Trapezoid of a sampled series over its whole grid.
inline double integrate_series(const TimeGrid& grid, const std::vector<double>& values)
{
    double sum = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) sum += 0.5 * grid.dt * (values[k - 1] + values[k]);
    return sum;
}

}  // namespace starkpacket
