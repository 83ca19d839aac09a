#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "starkpacket/params.hpp"

using namespace starkpacket;

TEST_CASE("make_params derives coupling and emission weight")
{
    const auto p = make_params(1.0, 1.0e6, 1.0 / two_pi, 1.0);
    CHECK(p.g == Catch::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(p.beta == Catch::Approx(0.5).epsilon(1e-15));

    // identities hold bit-for-bit under recomputation
    CHECK(p.g == std::sqrt(p.gamma_1d / (4.0 * pi * p.rho_1d)));
    CHECK(p.beta == p.gamma_1d * pi * p.rho_1d);
}

TEST_CASE("make_params round-trips the coupling identity")
{
    // gamma built from g = 1, rho = 1/(2 pi) is 4 pi g^2 rho = 2
    const double rho = 1.0 / two_pi;
    const double gamma = 4.0 * pi * 1.0 * rho;
    const auto p = make_params(gamma, 1.0e6, rho, 1.0);
    CHECK(p.gamma_1d == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(p.g == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("make_params rejects non-positive inputs by name")
{
    CHECK_THROWS_WITH(make_params(-1.0, 1.0e6, 1.0 / two_pi, 1.0),
                      Catch::Matchers::ContainsSubstring("gamma_1d"));
    CHECK_THROWS_WITH(make_params(1.0, 1.0e6, 0.0, 1.0), Catch::Matchers::ContainsSubstring("rho_1d"));
    CHECK_THROWS_WITH(make_params(1.0, 1.0e6, 1.0 / two_pi, -2.0), Catch::Matchers::ContainsSubstring("c"));
    CHECK_THROWS(make_params(1.0, -1.0, 1.0 / two_pi, 1.0));
}

TEST_CASE("time grid samples are exact products")
{
    const auto grid = make_grid(1.0e-3, 10001);
    CHECK(grid.time(0) == 0.0);
    CHECK(grid.time(7919) == 7919 * 1.0e-3);
    CHECK(grid.t_max() == 10000 * 1.0e-3);

    CHECK_THROWS(make_grid(0.0, 10));
    CHECK_THROWS(make_grid(1e-3, 1));

    const auto g2 = grid_from_horizon(1.0e-3, 10.0);
    CHECK(g2.n_samples == 10001);
}

TEST_CASE("initial condition splits probability with the packet")
{
    const auto ic = make_initial(0.0, 0.6);
    CHECK(ic.packet_weight() == Catch::Approx(0.8).epsilon(1e-12));
    CHECK(std::norm(ic.psi0) + std::norm(ic.c0) + ic.packet_weight() * ic.packet_weight() ==
          Catch::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS(make_initial(1.0, 0.5));
}
