#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starkpacket {

using complexd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Emitter and waveguide constants. All rates are in units of inverse time;
/// the default constants give the natural unit system gamma_1d = 1, c = 1,
/// rho_1d = 1/(2 pi), where the packet norm and the emission weight come out
/// as 1 and 1/2.
///
/// g and beta are derived from the other four and must never be set by hand:
///   g    = sqrt(gamma_1d / (4 pi rho_1d))
///   beta = gamma_1d * pi * rho_1d
struct PhysicalParams {
    double gamma_1d = 1.0;         // emission rate into the guided continuum
    double omega0 = 1.0e6;         // effective transition frequency (frame reference)
    double rho_1d = 1.0 / two_pi;  // spectral density of guided modes
    double c = 1.0;                // propagation speed in the guide
    double g = std::sqrt(0.5);     // emitter-mode coupling rate (derived)
    double beta = 0.5;             // emission weight (derived)
};

inline PhysicalParams make_params(double gamma_1d, double omega0, double rho_1d, double c)
{
    if (!(gamma_1d > 0.0))
        throw std::domain_error("make_params: gamma_1d must be positive");
    if (!(rho_1d > 0.0))
        throw std::domain_error("make_params: rho_1d must be positive");
    if (!(c > 0.0))
        throw std::domain_error("make_params: c must be positive");
    if (!(omega0 >= 0.0))
        throw std::domain_error("make_params: omega0 must be non-negative");

    PhysicalParams p;
    p.gamma_1d = gamma_1d;
    p.omega0 = omega0;
    p.rho_1d = rho_1d;
    p.c = c;
    p.g = std::sqrt(gamma_1d / (4.0 * pi * rho_1d));
    p.beta = gamma_1d * pi * rho_1d;
    return p;
}

/// Uniform time grid starting at t = 0. Sample times are k * dt computed as a
/// product, never by accumulation, so t(k) is exact for every k.
struct TimeGrid {
    double dt = 1.0e-3;
    std::size_t n_samples = 2;  // includes the t = 0 sample

    double time(std::size_t k) const { return static_cast<double>(k) * dt; }
    double t_max() const { return time(n_samples - 1); }
};

inline TimeGrid make_grid(double dt, std::size_t n_samples)
{
    if (!(dt > 0.0))
        throw std::domain_error("make_grid: dt must be positive");
    if (n_samples < 2)
        throw std::domain_error("make_grid: need at least two samples");
    return TimeGrid{dt, n_samples};
}

inline TimeGrid grid_from_horizon(double dt, double t_max)
{
    if (!(dt > 0.0))
        throw std::domain_error("grid_from_horizon: dt must be positive");
    if (!(t_max > 0.0))
        throw std::domain_error("grid_from_horizon: t_max must be positive");
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt)) + 1;
    return make_grid(dt, n < 2 ? 2 : n);
}

/// Initial emitter amplitudes. c0 is static; the packet carries the remaining
/// probability weight sqrt(1 - |psi0|^2 - |c0|^2).
struct InitialCondition {
    complexd psi0 = 0.0;
    complexd c0 = 0.0;

    double packet_weight() const
    {
        const double w2 = 1.0 - std::norm(psi0) - std::norm(c0);
        return w2 > 0.0 ? std::sqrt(w2) : 0.0;
    }
};

inline InitialCondition make_initial(complexd psi0, complexd c0)
{
    if (std::norm(psi0) + std::norm(c0) > 1.0 + 1.0e-9)
        throw std::domain_error("make_initial: |psi0|^2 + |c0|^2 exceeds 1");
    return InitialCondition{psi0, c0};
}

}  // namespace starkpacket
