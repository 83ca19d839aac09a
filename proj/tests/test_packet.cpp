#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "starkpacket/packet.hpp"

using namespace starkpacket;

namespace {
const PhysicalParams defaults;
}

TEST_CASE("exponential packet normalization factor")
{
    const auto p = exponential_packet(3.0, 0.9, defaults);
    CHECK(p.n_factor == Catch::Approx(std::sqrt(0.9)).epsilon(1e-15));
    CHECK(p.n_factor == Catch::Approx(0.94868).margin(5e-6));

    // N^2 c / Delta = 2 pi rho c for any linewidth
    for (double width : {0.05, 0.5, 1.0, 5.0}) {
        const auto q = exponential_packet(-1.0, width, defaults);
        CHECK(q.n_factor * q.n_factor * q.c / width ==
              Catch::Approx(two_pi * defaults.rho_1d * defaults.c).epsilon(1e-14));
    }

    CHECK_THROWS(exponential_packet(0.0, 0.0, defaults));
    CHECK_THROWS(exponential_packet(0.0, -1.0, defaults));
}

TEST_CASE("packet amplitude honours the front convention and support")
{
    const auto p = exponential_packet(2.0, 0.9, defaults);
    // front included: value N at x = 0
    CHECK(packet_amplitude_at(p, 0.0) == complexd(p.n_factor, 0.0));
    // envelope decays by e^-1 at x = -2c/Delta
    CHECK(std::abs(packet_amplitude_at(p, -2.0 * defaults.c / 0.9)) ==
          Catch::Approx(p.n_factor * std::exp(-1.0)).epsilon(1e-12));
    // nothing ahead of the front
    CHECK(packet_amplitude_at(p, 10.0) == complexd{});
    CHECK(packet_amplitude_at(p, 1e-12) == complexd{});
    // exponential packets are forward-only
    CHECK(packet_amplitude_at(p, -1.0, Channel::backward) == complexd{});
    // detuning phase winds with position
    const double x = -0.7;
    CHECK(std::arg(packet_amplitude_at(p, x)) == Catch::Approx(p.delta * x / p.c).margin(1e-12));
}

TEST_CASE("tabulated packet interpolates linearly and extends by zero")
{
    TabulatedChannel fwd;
    fwd.x = {-2.0, -1.0, 0.0};
    fwd.amp = {{0.0, 0.0}, {1.0, 1.0}, {0.0, 2.0}};
    const auto p = tabulated_packet(fwd, {}, 0.0, defaults);

    CHECK(packet_amplitude_at(p, -1.0) == complexd(1.0, 1.0));
    CHECK(packet_amplitude_at(p, -0.5) == complexd(0.5, 1.5));
    CHECK(packet_amplitude_at(p, -3.0) == complexd{});
    CHECK(packet_amplitude_at(p, 0.5) == complexd{});
    CHECK(packet_amplitude_at(p, -1.0, Channel::backward) == complexd{});

    TabulatedChannel bad;
    bad.x = {0.0, 0.0};
    bad.amp = {{1.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS(tabulated_packet(bad, {}, 0.0, defaults));
}

TEST_CASE("packet norm quadrature against the analytic integral")
{
    const double width = GENERATE(0.3, 0.9, 5.0);
    const auto p = exponential_packet(1.3, width, defaults);
    const double span = defaults.c / width;

    const auto full = packet_norm(p, make_spatial_grid(-20.0 * span, 0.0, 20001));
    CHECK(full.value == Catch::Approx(1.0).margin(1e-6));
    CHECK_FALSE(full.incomplete);
    CHECK_FALSE(full.coarse);

    // truncating the grid at one support length keeps 1 - e^-1 of the weight
    const auto truncated = packet_norm(p, make_spatial_grid(-span, 0.0, 4001));
    CHECK(truncated.value == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-4));
    CHECK(truncated.incomplete);

    const auto coarse = packet_norm(p, make_spatial_grid(-20.0 * span, 0.0, 101));
    CHECK(coarse.coarse);
}

TEST_CASE("norm of an all-zero tabulated packet is zero")
{
    TabulatedChannel fwd;
    fwd.x = {-1.0, 0.0};
    fwd.amp = {{0.0, 0.0}, {0.0, 0.0}};
    const auto p = tabulated_packet(fwd, {}, 0.0, defaults);
    CHECK(packet_norm(p, make_spatial_grid(-2.0, 1.0, 1001)).value == 0.0);
}

TEST_CASE("unit-system closure: rescaled rates give the same dimensionless norm")
{
    // doubling gamma (and all rates with it) while halving lengths/times must
    // reproduce identical dimensionless numbers
    const auto base = make_params(1.0, 1.0e6, 1.0 / two_pi, 1.0);
    const auto scaled = make_params(2.0, 2.0e6, 1.0 / two_pi / 2.0, 1.0);

    const auto p1 = exponential_packet(3.0, 0.9, base);
    const auto p2 = exponential_packet(6.0, 1.8, scaled);

    const auto n1 = packet_norm(p1, make_spatial_grid(-20.0 / 0.9, 0.0, 20001));
    const auto n2 = packet_norm(p2, make_spatial_grid(-10.0 / 0.9, 0.0, 20001));
    CHECK(n1.value == Catch::Approx(n2.value).epsilon(1e-12));
}
