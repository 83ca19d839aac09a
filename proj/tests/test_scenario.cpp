#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "starkpacket/csv.hpp"
#include "starkpacket/scenario.hpp"
#include "starkpacket/sweep.hpp"

using namespace starkpacket;

namespace {

ScenarioConfig red_config()
{
    ScenarioConfig cfg;
    cfg.delta = 3.0;
    cfg.linewidth = 0.9;
    return cfg;
}

std::size_t count_lines(const std::string& text)
{
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("scenario pipeline crosschecks itself")
{
    const auto result = run_scenario(red_config());
    REQUIRE(result.summaries.master_population_dev.has_value());
    CHECK(*result.summaries.master_population_dev <= 1e-6);
    CHECK(result.summaries.max_abs_shift > 1.0);
    CHECK(result.summaries.max_population <= 1.0 + 1e-9);
    CHECK(result.grid.n_samples == 10001);
}

TEST_CASE("shift peaks order across the three figure regimes")
{
    auto peak = [](double delta, double width) {
        ScenarioConfig cfg;
        cfg.delta = delta;
        cfg.linewidth = width;
        return run_scenario(cfg).summaries.max_abs_shift;
    };
    const double red = peak(3.0, 0.9);
    const double blue = peak(5.0, 0.1);
    const double black = peak(0.1, 5.0);
    CHECK(red > blue);
    CHECK(blue > black);
}

TEST_CASE("csv export: header, row count, and repeatability")
{
    const auto result = run_scenario(red_config());
    const auto text = csv_text(result);

    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,re_psi,im_psi,population,shift,rate,valid,I0,Ia,Ib,diff_dynamic,diff_static");
    CHECK(count_lines(text) == result.grid.n_samples + 1);

    // identical bytes for an identical run
    CHECK(text == csv_text(run_scenario(red_config())));

    // absolute export adds the carrier back onto the shift column only
    const auto absolute = csv_text(result, true);
    CHECK(absolute != text);

    // numbers carry 12 significant digits in scientific notation
    std::string first_row;
    std::getline(in, first_row);
    CHECK(first_row.substr(0, 17) == "0.00000000000e+00");
}

TEST_CASE("csv export honours the column selection")
{
    auto cfg = red_config();
    cfg.t_max = 0.5;
    cfg.output_series = {"population", "shift"};
    const auto text = csv_text(run_scenario(cfg));
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,population,shift");
}

TEST_CASE("csv file emission round-trips bytes")
{
    auto cfg = red_config();
    cfg.t_max = 0.2;
    const auto result = run_scenario(cfg);
    const std::string path = "scenario_test_out.csv";
    emit_csv(result, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == csv_text(result));
    std::remove(path.c_str());

    CHECK_THROWS(emit_csv(result, "no_such_dir/out.csv"));
}

TEST_CASE("undriven decay scenario: pure exponential population")
{
    const std::string packet_path = "zero_packet.csv";
    {
        std::ofstream out(packet_path);
        out << "x,re,im\n-1.0,0.0,0.0\n0.0,0.0,0.0\n";
    }
    ScenarioConfig cfg;
    cfg.packet_kind = "tabulated";
    cfg.packet_file = packet_path;
    cfg.psi0_re = 1.0;
    cfg.t_max = 5.0;
    const auto result = run_scenario(cfg);
    std::remove(packet_path.c_str());

    for (std::size_t k = 0; k < result.grid.n_samples; k += 500) {
        const double t = result.grid.time(k);
        CHECK(std::norm(result.psi.values[k]) == Catch::Approx(std::exp(-t)).margin(1e-9));
    }
    REQUIRE(result.summaries.master_population_dev.has_value());
    CHECK(*result.summaries.master_population_dev <= 1e-6);
    CHECK(result.summaries.integrated_reflection == 0.0);
}

TEST_CASE("summary json carries version, config echo and scalars")
{
    auto cfg = red_config();
    cfg.t_max = 0.5;
    const auto result = run_scenario(cfg);
    const auto json_text = summary_json(result);
    const auto j = nlohmann::json::parse(json_text);
    CHECK(j["version"] == version);
    CHECK(j["summaries"].contains("max_abs_shift"));
    const auto echoed = parse_config(j["config"].get<std::string>());
    CHECK(echoed == cfg);
}

TEST_CASE("sweep axis parsing")
{
    const auto axis = parse_sweep_axis("-3:3:3");
    CHECK(axis.at(0) == -3.0);
    CHECK(axis.at(1) == 0.0);
    CHECK(axis.at(2) == 3.0);
    CHECK(parse_sweep_axis("2:5:1").at(0) == 2.0);
    CHECK_THROWS(parse_sweep_axis("1:2"));
    CHECK_THROWS(parse_sweep_axis("1:2:0"));
    CHECK_THROWS(parse_sweep_axis("a:b:c"));
}

TEST_CASE("one-cell sweep equals the scenario summaries")
{
    ScenarioConfig base;
    base.t_max = 5.0;
    const auto rows = run_sweep(base, SweepAxis{3.0, 3.0, 1}, SweepAxis{0.9, 0.9, 1}, 1);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);

    ScenarioConfig cell = base;
    cell.delta = 3.0;
    cell.linewidth = 0.9;
    const auto direct = run_scenario(cell).summaries;
    CHECK(rows[0].summaries.max_abs_shift == direct.max_abs_shift);
    CHECK(rows[0].summaries.integrated_reflection == direct.integrated_reflection);
}

TEST_CASE("sweep over opposite detunings: equal peaks, opposite series")
{
    ScenarioConfig base;
    base.t_max = 5.0;
    const auto rows = run_sweep(base, SweepAxis{-3.0, 3.0, 2}, SweepAxis{0.9, 0.9, 1}, 2);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].ok);
    REQUIRE(rows[1].ok);
    CHECK(rows[0].summaries.max_abs_shift ==
          Catch::Approx(rows[1].summaries.max_abs_shift).margin(1e-10));

    ScenarioConfig plus = base, minus = base;
    plus.delta = 3.0;
    minus.delta = -3.0;
    plus.linewidth = minus.linewidth = 0.9;
    const auto rp = run_scenario(plus);
    const auto rm = run_scenario(minus);
    for (std::size_t k = 0; k < rp.grid.n_samples; k += 97) {
        if (!rp.generator.valid[k] || !rm.generator.valid[k]) continue;
        CHECK(rp.generator.shift[k] == Catch::Approx(-rm.generator.shift[k]).margin(1e-10));
    }
}

TEST_CASE("sweep keeps going past broken cells and stays deterministic")
{
    ScenarioConfig base;
    base.t_max = 2.0;
    base.dt = 1.0e-3;
    // delta = 20 violates the step-size guard at this dt; the row must record
    // the error while the other cells complete
    const auto rows = run_sweep(base, SweepAxis{0.0, 20.0, 2}, SweepAxis{0.9, 0.9, 1}, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ok);
    CHECK_FALSE(rows[1].ok);
    CHECK(rows[1].error.find("dt") != std::string::npos);

    const auto table = sweep_table_csv(rows);
    CHECK(count_lines(table) == 3);

    const auto serial = sweep_table_csv(run_sweep(base, SweepAxis{0.0, 20.0, 2}, SweepAxis{0.9, 0.9, 1}, 1));
    CHECK(table == serial);
}

TEST_CASE("scenario errors carry config context")
{
    ScenarioConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
}
