#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "starkpacket/packet.hpp"
#include "starkpacket/params.hpp"

namespace starkpacket {

enum class Frame { rotating };

/// Excited-state amplitude sampled on a uniform grid, stored in the frame
/// rotating at omega0 (the fast carrier phase is factored out everywhere).
struct AmplitudeSeries {
    TimeGrid grid;
    std::vector<complexd> values;
    Frame frame = Frame::rotating;
};

namespace detail {

/// Linear interpolation of a series at time tau in [0, t_max]. Times that land
/// on a grid sample (to within a relative eps) return the sample itself.
inline complexd series_at(const AmplitudeSeries& s, double tau)
{
    const double dt = s.grid.dt;
    if (tau < 0.0 || tau > s.grid.t_max() * (1.0 + 1.0e-12) + 1.0e-15)
        throw std::out_of_range("series_at: retarded time outside the simulated horizon");
    const double pos = tau / dt;
    auto k = static_cast<std::size_t>(pos);
    if (k >= s.values.size() - 1) k = s.values.size() - 2;
    const double w = pos - static_cast<double>(k);
    if (w < 1.0e-12) return s.values[k];
    if (w > 1.0 - 1.0e-12) return s.values[k + 1];
    return s.values[k] + w * (s.values[k + 1] - s.values[k]);
}

inline std::size_t grid_index(const TimeGrid& grid, double t)
{
    const double pos = t / grid.dt;
    const auto k = static_cast<std::size_t>(std::llround(pos));
    if (k >= grid.n_samples || std::abs(pos - static_cast<double>(k)) > 1.0e-9)
        throw std::invalid_argument("grid_index: time is not a grid sample");
    return k;
}

}  // namespace detail

/// Rotating-frame amplitude for the exponential packet with psi(0) = 0:
///   psi(t) = -sqrt(gamma_1d * Delta / 2) * (e^{-(Delta/2 + i delta) t} - e^{-gamma_1d t / 2}) / nu,
/// nu = (gamma_1d - Delta)/2 - i delta. Written as a difference of decaying
/// exponentials so no intermediate overflows at long times. The removable
/// point nu = 0 (mode matching at zero detuning) takes the limit branch
/// -sqrt(gamma_1d * Delta / 2) * t * e^{-gamma_1d t / 2}.
inline complexd psi_closed_form(const PhysicalParams& params, double delta, double Delta, double t)
{
    if (t < 0.0)
        throw std::domain_error("psi_closed_form: t must be non-negative");
    if (!(Delta > 0.0))
        throw std::domain_error("psi_closed_form: Delta must be positive");

    const double gamma = params.gamma_1d;
    const double front = -std::sqrt(0.5 * gamma * Delta);
    const complexd nu{0.5 * (gamma - Delta), -delta};
    const double decay = std::exp(-0.5 * gamma * t);
    if (std::abs(nu) < 1.0e-12 * gamma)
        return front * t * decay;
    const complexd packet_like = std::polar(std::exp(-0.5 * Delta * t), -delta * t);
    return front * (packet_like - decay) / nu;
}

/// Free-field drive seen by the emitter at time t: the initial packet evaluated
/// at the retarded positions, forward from the left and backward from the right.
inline complexd drive_at(const PacketSpec& packet, double t)
{
    return packet_amplitude_at(packet, -packet.c * t, Channel::forward) +
           packet_amplitude_at(packet, packet.c * t, Channel::backward);
}

/// Integrates d psi/dt = -(gamma_1d/2) psi - g * drive(t) with classical RK4 on
/// the given grid. The drive is the free initial packet at the retarded
/// positions, so the whole history collapses into a local term and the cost is
/// linear in the number of samples.
inline AmplitudeSeries evolve_psi_ode(const PhysicalParams& params, const PacketSpec& packet,
                                      const TimeGrid& grid, const InitialCondition& init = {})
{
    double fastest = params.gamma_1d;
    if (packet.kind == PacketKind::exponential) fastest = std::max(fastest, packet.linewidth);
    fastest = std::max(fastest, std::abs(packet.delta));
    const double dt_max = 0.01 / fastest;
    if (grid.dt > dt_max * (1.0 + 1.0e-9))
        throw std::invalid_argument("evolve_psi_ode: dt too large for the requested rates; use dt <= " +
                                    std::to_string(dt_max));

    const double gamma_half = 0.5 * params.gamma_1d;
    const double g = params.g;
    const auto rhs = [&](double t, complexd psi) { return -gamma_half * psi - g * drive_at(packet, t); };

    AmplitudeSeries out;
    out.grid = grid;
    out.values.resize(grid.n_samples);
    out.values[0] = init.psi0;

    const double h = grid.dt;
    complexd psi = init.psi0;
    for (std::size_t k = 0; k + 1 < grid.n_samples; ++k) {
        const double t = grid.time(k);
        const complexd k1 = rhs(t, psi);
        const complexd k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1);
        const complexd k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2);
        const complexd k4 = rhs(t + h, psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.values[k + 1] = psi;
    }
    return out;
}

/// Forward field at (x, t): freely propagated input plus the emitted wave
/// sqrt(beta) psi(t - x/c), the latter only behind the emission front and on
/// the emitter's right. At x <= 0 only the free term survives.
inline complexd field_forward(const PhysicalParams& params, const PacketSpec& packet,
                              const AmplitudeSeries& psi, double x, double t)
{
    complexd value = packet_amplitude_at(packet, x - packet.c * t, Channel::forward);
    if (x > 0.0) {
        const double tau = t - x / params.c;
        if (tau >= 0.0) value += std::sqrt(params.beta) * detail::series_at(psi, tau);
    }
    return value;
}

/// Emitted backward field at (x <= 0, t): sqrt(beta) psi(t - |x|/c), exactly
/// zero before the emission front arrives. The backward channel lives on the
/// emitter's left. A freely propagating backward input, when present, is not
/// part of this term; the snapshot and the norm audit add it separately.
inline complexd field_backward(const PhysicalParams& params, const AmplitudeSeries& psi, double x, double t)
{
    if (x > 0.0)
        throw std::domain_error("field_backward: backward channel is defined for x <= 0");
    const double tau = t - std::abs(x) / params.c;
    if (tau < 0.0) return {};
    return std::sqrt(params.beta) * detail::series_at(psi, tau);
}

namespace detail {

/// Total backward field: free left-moving input plus the emitted wave.
inline complexd backward_total(const PhysicalParams& params, const PacketSpec& packet,
                               const AmplitudeSeries& psi, double x, double t)
{
    complexd value = packet_amplitude_at(packet, x + packet.c * t, Channel::backward);
    if (x <= 0.0) value += field_backward(params, psi, x, t);
    return value;
}

}  // namespace detail

/// Field amplitudes over a set of positions at a fixed time. For display the
/// forward value exactly at x = 0 is the left limit (free input only).
struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> positions;
    std::vector<complexd> forward;
    std::vector<complexd> backward;
};

inline FieldSnapshot field_snapshot(const PhysicalParams& params, const PacketSpec& packet,
                                    const AmplitudeSeries& psi, std::vector<double> positions, double t)
{
    FieldSnapshot snap;
    snap.t = t;
    snap.positions = std::move(positions);
    snap.forward.reserve(snap.positions.size());
    snap.backward.reserve(snap.positions.size());
    for (double x : snap.positions) {
        snap.forward.push_back(field_forward(params, packet, psi, x, t));
        snap.backward.push_back(detail::backward_total(params, packet, psi, x, t));
    }
    return snap;
}

struct NormAudit {
    double value = 0.0;        // |psi|^2 plus field probability, should be 1 - |c0|^2
    bool underresolved = false;  // grid extent or spacing below the stated requirements
};

namespace detail {

/// Trapezoid of |amplitude|^2 over [a, b] with spacing <= dx. `eval` must be
/// smooth on the open interval; the endpoints are evaluated as one-sided limits
/// by nudging them into the interior, so jump discontinuities may only sit at
/// the interval ends.
template <typename F>
inline double smooth_piece_probability(F&& eval, double a, double b, double dx)
{
    if (!(b > a)) return 0.0;
    auto n = static_cast<std::size_t>(std::ceil((b - a) / dx));
    n = std::max<std::size_t>(n, 2);
    const double h = (b - a) / static_cast<double>(n);
    const double nudge = 1.0e-9 * h;
    double sum = 0.0;
    double prev = std::norm(eval(a + nudge));
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = i == n ? b - nudge : a + h * static_cast<double>(i);
        const double cur = std::norm(eval(x));
        sum += 0.5 * (prev + cur) * h;
        prev = cur;
    }
    return sum;
}

}  // namespace detail

/// Unitarity audit: emitter population plus integrated field probability at
/// time t. The integration splits at the known fronts (x = -ct, 0, ct) so the
/// trapezoid only ever sees smooth integrands. t must lie on the grid.
inline NormAudit excitation_norm(const PhysicalParams& params, const PacketSpec& packet,
                                 const AmplitudeSeries& psi, double t, const SpatialGrid& grid)
{
    const std::size_t k = detail::grid_index(psi.grid, t);
    NormAudit audit;

    const double ct = params.c * t;
    if (packet.kind == PacketKind::exponential) {
        const double needed = ct + 10.0 * packet.c / packet.linewidth;
        audit.underresolved = grid.x_min > -needed || grid.x_max < ct ||
                              grid.spacing() > 0.01 * packet.c / packet.linewidth;
    }

    // Breakpoints where either field may jump: emission fronts and the emitter.
    std::vector<double> cuts{grid.x_min, -ct, 0.0, ct, grid.x_max};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double dx = grid.spacing();
    double field_prob = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], grid.x_min);
        const double b = std::min(cuts[i + 1], grid.x_max);
        if (!(b > a)) continue;
        field_prob += detail::smooth_piece_probability(
            [&](double x) { return field_forward(params, packet, psi, x, t); }, a, b, dx);
        field_prob += detail::smooth_piece_probability(
            [&](double x) { return detail::backward_total(params, packet, psi, x, t); }, a, b, dx);
    }

    audit.value = std::norm(psi.values[k]) + field_prob / packet.norm_reference();
    return audit;
}

}  // namespace starkpacket
