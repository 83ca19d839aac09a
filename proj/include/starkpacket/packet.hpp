#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "starkpacket/params.hpp"

namespace starkpacket {

enum class PacketKind { exponential, tabulated };
enum class Channel { forward, backward };

/// One tabulated field channel: strictly increasing positions with complex
/// amplitudes, linearly interpolated, zero outside the tabulated range.
struct TabulatedChannel {
    std::vector<double> x;
    std::vector<complexd> amp;

    bool empty() const { return x.empty(); }
};

/// Initial one-photon envelope in the frame rotating at omega0: the stored
/// phases carry only the detuning, exp(i delta x / c) for the forward channel.
/// The exponential kind is the right-moving packet
///   N * exp[(linewidth/2 + i delta) x / c]  for x <= 0  (front included),
/// with N = sqrt(2 pi rho_1d * linewidth), which integrates to unit probability.
/// `scale` multiplies all amplitudes; anything but 1 gives a deliberately
/// unnormalized packet (used when the emitter carries part of the weight).
struct PacketSpec {
    PacketKind kind = PacketKind::exponential;
    double delta = 0.0;      // carrier detuning relative to omega0
    double linewidth = 1.0;  // spectral linewidth of the exponential kind
    double n_factor = 0.0;   // normalization N of the exponential kind
    double c = 1.0;
    double rho_1d = 1.0 / two_pi;
    complexd scale = 1.0;
    TabulatedChannel forward;
    TabulatedChannel backward;

    /// Reference norm 2 pi rho_1d c that a unit-probability packet integrates to.
    double norm_reference() const { return two_pi * rho_1d * c; }
};

inline PacketSpec exponential_packet(double delta, double linewidth, const PhysicalParams& params)
{
    if (!(linewidth > 0.0))
        throw std::domain_error("exponential_packet: linewidth must be positive");
    PacketSpec p;
    p.kind = PacketKind::exponential;
    p.delta = delta;
    p.linewidth = linewidth;
    p.n_factor = std::sqrt(two_pi * params.rho_1d * linewidth);
    p.c = params.c;
    p.rho_1d = params.rho_1d;
    return p;
}

inline PacketSpec tabulated_packet(TabulatedChannel forward, TabulatedChannel backward,
                                   double delta, const PhysicalParams& params)
{
    for (const auto* ch : {&forward, &backward}) {
        if (ch->x.size() != ch->amp.size())
            throw std::invalid_argument("tabulated_packet: position/amplitude size mismatch");
        for (std::size_t i = 1; i < ch->x.size(); ++i)
            if (!(ch->x[i] > ch->x[i - 1]))
                throw std::invalid_argument("tabulated_packet: positions must be strictly increasing");
    }
    PacketSpec p;
    p.kind = PacketKind::tabulated;
    p.delta = delta;
    p.c = params.c;
    p.rho_1d = params.rho_1d;
    p.forward = std::move(forward);
    p.backward = std::move(backward);
    return p;
}

namespace detail {

inline complexd interp_channel(const TabulatedChannel& ch, double x)
{
    if (ch.empty() || x < ch.x.front() || x > ch.x.back()) return {};
    const auto it = std::upper_bound(ch.x.begin(), ch.x.end(), x);
    if (it == ch.x.begin()) return ch.amp.front();
    if (it == ch.x.end()) return ch.amp.back();
    const auto hi = static_cast<std::size_t>(it - ch.x.begin());
    const auto lo = hi - 1;
    const double w = (x - ch.x[lo]) / (ch.x[hi] - ch.x[lo]);
    return ch.amp[lo] + w * (ch.amp[hi] - ch.amp[lo]);
}

}  // namespace detail

/// Initial (t = 0) amplitude of one channel at position x. Total function:
/// positions outside the support return zero.
inline complexd packet_amplitude_at(const PacketSpec& packet, double x, Channel channel = Channel::forward)
{
    if (packet.kind == PacketKind::exponential) {
        if (channel == Channel::backward) return {};
        if (x > 0.0) return {};
        const double u = x / packet.c;
        const double envelope = packet.n_factor * std::exp(0.5 * packet.linewidth * u);
        return packet.scale * std::polar(envelope, packet.delta * u);
    }
    const auto& ch = channel == Channel::forward ? packet.forward : packet.backward;
    return packet.scale * detail::interp_channel(ch, x);
}

/// Uniformly sampled position interval, n_points nodes inclusive of both ends.
struct SpatialGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_points = 2;

    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double position(std::size_t i) const
    {
        return x_min + spacing() * static_cast<double>(i);
    }
};

inline SpatialGrid make_spatial_grid(double x_min, double x_max, std::size_t n_points)
{
    if (!(x_max > x_min))
        throw std::domain_error("make_spatial_grid: x_max must exceed x_min");
    if (n_points < 2)
        throw std::domain_error("make_spatial_grid: need at least two points");
    return SpatialGrid{x_min, x_max, n_points};
}

struct PacketNorm {
    double value = 0.0;    // trapezoid estimate divided by 2 pi rho_1d c
    bool incomplete = false;  // grid does not cover the analytic support requirement
    bool coarse = false;      // grid spacing too wide to trust the quadrature
};

/// Probability carried by the packet over the given grid, relative to the unit
/// reference 2 pi rho_1d c. Exponential packets need extent >= 10 c/linewidth
/// and spacing <= 0.01 c/linewidth for a trustworthy answer; violations are
/// flagged, not fatal.
inline PacketNorm packet_norm(const PacketSpec& packet, const SpatialGrid& grid)
{
    PacketNorm result;
    if (packet.kind == PacketKind::exponential) {
        const double support_scale = packet.c / packet.linewidth;
        const bool covers = grid.x_min <= -10.0 * support_scale && grid.x_max >= 0.0;
        result.incomplete = !covers;
        result.coarse = grid.spacing() > 0.01 * support_scale;
    }

    double sum = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.position(i);
        const double density = std::norm(packet_amplitude_at(packet, x, Channel::forward)) +
                               std::norm(packet_amplitude_at(packet, x, Channel::backward));
        if (i > 0) sum += 0.5 * (prev + density) * grid.spacing();
        prev = density;
    }
    result.value = sum / packet.norm_reference();
    return result;
}

}  // namespace starkpacket
