#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "starkpacket/dynamics.hpp"
#include "starkpacket/packet.hpp"
#include "starkpacket/params.hpp"

namespace starkpacket {

/// Instantaneous frequency shift (relative to omega0) and decay rate extracted
/// from the amplitude. Entries where the amplitude is too small, or changes too
/// fast per step for finite differences to mean anything, carry valid = 0; the
/// stored numbers there are whatever the formulas produced (zero if they were
/// not finite) and must not be used.
struct GeneratorSeries {
    TimeGrid grid;
    std::vector<double> shift;
    std::vector<double> rate;
    std::vector<std::uint8_t> valid;
};

/// Unwrapped phase of a complex series. Valid where the magnitude supports a
/// meaningful phase; unwrapping steps by the nearest multiple of 2 pi.
struct PhaseSeries {
    TimeGrid grid;
    std::vector<double> theta;
    std::vector<std::uint8_t> valid;
};

struct ExtractionOptions {
    double eps_psi = 1.0e-8;        // magnitude floor for a usable phase
    double max_step_change = 0.04;  // relative amplitude change per step a
                                    // central difference is trusted to resolve
};

/// Shift omega_s(t) - omega0 for the exponential packet, as the closed-form
/// derivative of the emitted phase:
///   [delta - E (delta cos(delta t) - mu sin(delta t))] / [1 - 2 E cos(delta t) + E^2],
/// E = e^{mu t}, mu = (Delta - gamma_1d)/2. The 0/0 points (t = 0, and every
/// sample under exact mode matching) continue to the limit delta / 2. Large
/// positive mu t is evaluated with the reciprocal of E so nothing overflows.
inline double stark_shift_closed_form(double delta, double Delta, double gamma_1d, double t)
{
    if (t < 0.0)
        throw std::domain_error("stark_shift_closed_form: t must be non-negative");
    const double mu = 0.5 * (Delta - gamma_1d);
    if (t == 0.0 || std::abs(mu) < 1.0e-12 * gamma_1d) return 0.5 * delta;

    const double s = std::sin(delta * t);
    const double c = std::cos(delta * t);
    const double mu_t = mu * t;
    if (mu_t > 350.0) {
        const double r = std::exp(-mu_t);  // 1/E, safely tiny
        return (delta * r * r - r * (delta * c - mu * s)) / (r * r - 2.0 * r * c + 1.0);
    }
    const double e = std::exp(mu_t);
    return (delta - e * (delta * c - mu * s)) / (1.0 - 2.0 * e * c + e * e);
}

/// Decay rate Gamma(t) from the log-derivative of the closed-form amplitude:
///   gamma_1d - 2 Re[nu e^{nu t} / (e^{nu t} - 1)],   nu = (gamma_1d - Delta)/2 - i delta.
/// Evaluated through e^{-nu t} when Re nu > 0 so long times stay finite. The
/// nu -> 0 limit is gamma_1d - 2/t. Diverges at t -> 0 (the amplitude starts
/// at zero), hence t must be strictly positive.
inline double decay_rate_closed_form(double delta, double Delta, double gamma_1d, double t)
{
    if (!(t > 0.0))
        throw std::domain_error("decay_rate_closed_form: t must be positive");
    const complexd nu{0.5 * (gamma_1d - Delta), -delta};
    if (std::abs(nu) < 1.0e-12 * gamma_1d) return gamma_1d - 2.0 / t;
    complexd ratio;
    if (nu.real() >= 0.0) {
        const complexd em = std::exp(-nu * t);
        ratio = nu / (1.0 - em);
    } else {
        const complexd ep = std::exp(nu * t);
        ratio = nu * ep / (ep - 1.0);
    }
    return gamma_1d - 2.0 * ratio.real();
}

namespace detail {

inline double wrap_to_pi(double angle)
{
    return angle - two_pi * std::round(angle / two_pi);
}

/// Unwrapped phase with a usability mask (magnitude above the floor). Samples
/// below the floor get placeholder phase values so unwrapping can continue
/// across them.
struct PhaseDecomposition {
    std::vector<double> theta;
    std::vector<std::uint8_t> usable;
};

inline PhaseDecomposition unwrap_phase(const AmplitudeSeries& psi, double eps_psi)
{
    const std::size_t n = psi.values.size();
    PhaseDecomposition p;
    p.theta.resize(n);
    p.usable.resize(n);
    double prev_theta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double mag = std::abs(psi.values[k]);
        p.usable[k] = mag >= eps_psi;
        const double raw = p.usable[k] ? std::arg(psi.values[k]) : prev_theta;
        const double theta = prev_theta + wrap_to_pi(raw - prev_theta);
        p.theta[k] = theta;
        prev_theta = theta;
    }
    return p;
}

/// Sampled log-derivative d(ln psi)/dt: five-point differences divided by the
/// local value. The division keeps the error a single pole in 1/t where the
/// amplitude launches from zero (the error term is psi''''': / psi, not a power
/// of the log-derivative itself), which is what makes the extraction usable
/// right up to the validity mask.
inline std::vector<complexd> log_derivative(const std::vector<complexd>& f, double dt)
{
    const std::size_t n = f.size();
    std::vector<complexd> out(n);
    const double w = 12.0 * dt;
    if (n >= 5) {
        out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (w * f[0]);
        out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (w * f[1]);
        for (std::size_t k = 2; k + 2 < n; ++k)
            out[k] = (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / (w * f[k]);
        out[n - 2] =
            (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (w * f[n - 2]);
        out[n - 1] =
            (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) /
            (w * f[n - 1]);
    } else {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt * f[0]);
        for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt * f[k]);
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt * f[n - 1]);
    }
    return out;
}

inline double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

/// Five-point derivative of a real sampled function (three-point fallback for
/// very short series).
inline std::vector<double> sampled_derivative(const std::vector<double>& f, double dt)
{
    const std::size_t n = f.size();
    std::vector<double> out(n);
    const double w = 12.0 * dt;
    if (n >= 5) {
        out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / w;
        out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / w;
        for (std::size_t k = 2; k + 2 < n; ++k)
            out[k] = (-f[k + 2] + 8.0 * f[k + 1] - 8.0 * f[k - 1] + f[k - 2]) / w;
        out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / w;
        out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / w;
    } else {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
        for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    }
    return out;
}

}  // namespace detail

/// Numeric generator extraction: shift = -Im and rate = -2 Re of the sampled
/// log-derivative of the amplitude. Validity needs every stencil sample above
/// the magnitude floor plus a per-step relative change small enough for the
/// differences to resolve.
inline GeneratorSeries stark_shift_numeric(const AmplitudeSeries& psi, const ExtractionOptions& opt = {})
{
    const std::size_t n = psi.values.size();
    if (n < 3)
        throw std::invalid_argument("stark_shift_numeric: need at least three samples");

    const auto ratio = detail::log_derivative(psi.values, psi.grid.dt);
    GeneratorSeries gen;
    gen.grid = psi.grid;
    gen.shift.resize(n);
    gen.rate.resize(n);
    gen.valid.resize(n);

    const std::size_t reach = n >= 5 ? 2 : 1;
    for (std::size_t k = 0; k < n; ++k) {
        gen.shift[k] = detail::finite_or_zero(-ratio[k].imag());
        gen.rate[k] = detail::finite_or_zero(-2.0 * ratio[k].real());

        const std::size_t lo = k >= reach ? k - reach : 0;
        const std::size_t hi = std::min(k + reach, n - 1);
        bool ok = true;
        for (std::size_t j = lo; j <= hi; ++j) ok = ok && std::abs(psi.values[j]) >= opt.eps_psi;
        if (ok) {
            const std::size_t a = k > 0 ? k - 1 : 0;
            const std::size_t b = k + 1 < n ? k + 1 : n - 1;
            const double span = std::abs(psi.values[b] - psi.values[a]);
            ok = span <= opt.max_step_change * static_cast<double>(b - a) * std::abs(psi.values[k]);
        }
        gen.valid[k] = ok;
    }
    return gen;
}

inline GeneratorSeries stark_shift_numeric(const AmplitudeSeries& psi, double eps_psi)
{
    ExtractionOptions opt;
    opt.eps_psi = eps_psi;
    return stark_shift_numeric(psi, opt);
}

/// Mean dipole interaction energy over hbar: 2 g Im[phi_in(0, t) psi*(t)],
/// with phi_in the freely propagated input at the emitter. The emitted part of
/// the on-site field is proportional to psi itself, so it drops out of the
/// imaginary part and the boundary convention at x = 0 is immaterial.
inline double interaction_energy(const PhysicalParams& params, const PacketSpec& packet,
                                 const AmplitudeSeries& psi, double t)
{
    const std::size_t k = detail::grid_index(psi.grid, t);
    const complexd input = drive_at(packet, t);
    return 2.0 * params.g * (input * std::conj(psi.values[k])).imag();
}

/// Unwrapped phase of an amplitude series and its instantaneous color,
/// -d theta/dt, reported relative to omega0 like the shift series. The color
/// derivative is evaluated through the complex log-derivative (identical
/// discretization to the shift extraction), so proportional series give
/// matching values down to rounding.
struct ColorSeries {
    PhaseSeries phase;
    std::vector<double> color;
};

inline ColorSeries effective_color(const AmplitudeSeries& series, double eps)
{
    const std::size_t n = series.values.size();
    if (n < 3)
        throw std::invalid_argument("effective_color: need at least three samples");

    const auto phase = detail::unwrap_phase(series, eps);
    const auto ratio = detail::log_derivative(series.values, series.grid.dt);
    ColorSeries out;
    out.phase.grid = series.grid;
    out.phase.theta = phase.theta;
    out.phase.valid.resize(n);
    out.color.resize(n);
    const std::size_t reach = n >= 5 ? 2 : 1;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= reach ? k - reach : 0;
        const std::size_t hi = std::min(k + reach, n - 1);
        bool ok = true;
        for (std::size_t j = lo; j <= hi; ++j) ok = ok && phase.usable[j];
        out.phase.valid[k] = ok;
        out.color[k] = detail::finite_or_zero(-ratio[k].imag());
    }
    return out;
}

}  // namespace starkpacket
