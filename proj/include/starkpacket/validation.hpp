#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "starkpacket/csv.hpp"
#include "starkpacket/dynamics.hpp"
#include "starkpacket/generator.hpp"
#include "starkpacket/lindblad.hpp"
#include "starkpacket/observables.hpp"
#include "starkpacket/scenario.hpp"
#include "starkpacket/sweep.hpp"

namespace starkpacket {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;   // the binding (worst) measurement
    double tolerance = 0.0;
    std::string detail;
};

namespace checks {

inline const std::vector<std::pair<double, double>>& figure_triples()
{
    // (detuning, linewidth): long detuned, short near-resonant, intermediate
    static const std::vector<std::pair<double, double>> t{{5.0, 0.1}, {0.1, 5.0}, {3.0, 0.9}};
    return t;
}

inline AmplitudeSeries evolve_triple(const PhysicalParams& params, double delta, double width,
                                     double dt = 1.0e-3, double t_max = 10.0)
{
    const auto packet = exponential_packet(delta, width, params);
    return evolve_psi_ode(params, packet, grid_from_horizon(dt, t_max));
}

inline CheckResult closed_form_vs_ode()
{
    const PhysicalParams params;
    double worst = 0.0;
    std::vector<std::pair<double, double>> cases = figure_triples();
    std::mt19937 rng(987654321u);
    std::uniform_real_distribution<double> d_delta(-10.0, 10.0);
    std::uniform_real_distribution<double> d_width(0.05, 10.0);
    for (int i = 0; i < 20; ++i) cases.emplace_back(d_delta(rng), d_width(rng));

    for (const auto& [delta, width] : cases) {
        const auto psi = evolve_triple(params, delta, width);
        for (std::size_t k = 0; k < psi.values.size(); ++k)
            worst = std::max(worst,
                             std::abs(psi.values[k] - psi_closed_form(params, delta, width, psi.grid.time(k))));
    }
    return {"closed-form vs RK4 amplitude, 3 figure pairs + 20 random pairs", worst <= 1e-8, worst, 1e-8,
            "max |psi_ode - psi_closed| over t in [0,10], dt = 1e-3"};
}

inline CheckResult shift_limit_cases()
{
    double worst_ratio = 0.0;  // measured / allowed, per sub-case
    std::ostringstream detail;

    // matched linewidth: exactly half the detuning, for every time
    double worst = 0.0;
    for (double delta : {-4.0, -0.3, 0.7, 5.0})
        for (double t = 0.0; t <= 20.0; t += 0.093)
            worst = std::max(worst, std::abs(stark_shift_closed_form(delta, 1.0, 1.0, t) - 0.5 * delta));
    detail << "matched: " << worst << " (tol 1e-12)";
    worst_ratio = std::max(worst_ratio, worst / 1e-12);

    // zero detuning: no shift at all
    worst = 0.0;
    for (double width : {0.1, 0.9, 5.0})
        for (double t = 0.0; t <= 20.0; t += 0.093)
            worst = std::max(worst, std::abs(stark_shift_closed_form(0.0, width, 1.0, t)));
    detail << "; resonant: " << worst;
    worst_ratio = std::max(worst_ratio, worst / 1e-12);

    // long packet settles on the full detuning
    worst = 0.0;
    const double mu_long = 0.5 * (0.1 - 1.0);
    for (double t = 5.0 / std::abs(mu_long); t <= 20.0; t += 0.0371)
        worst = std::max(worst, std::abs(stark_shift_closed_form(5.0, 0.1, 1.0, t) - 5.0) / 5.0);
    detail << "; long->delta: " << worst << " (tol 0.01)";
    worst_ratio = std::max(worst_ratio, worst / 0.01);

    // short packet: the shift dies relative to the detuning
    worst = 0.0;
    const double mu_short = 0.5 * (5.0 - 1.0);
    for (double t = 10.0 / mu_short; t <= 20.0; t += 0.0371)
        worst = std::max(worst, std::abs(stark_shift_closed_form(0.1, 5.0, 1.0, t)) / 0.1);
    detail << "; short->0: " << worst << " (tol 0.01)";
    worst_ratio = std::max(worst_ratio, worst / 0.01);

    return {"closed-form shift limit cases", worst_ratio <= 1.0, worst_ratio, 1.0, detail.str()};
}

inline CheckResult shift_extraction_consistency()
{
    const PhysicalParams params;
    double worst_ratio = 0.0;
    std::ostringstream detail;
    for (const auto& [delta, width] : figure_triples()) {
        const auto psi = evolve_triple(params, delta, width);
        const auto gen = stark_shift_numeric(psi);
        double max_shift = 0.0, max_rate = 0.0, dev_shift = 0.0, dev_rate = 0.0;
        for (std::size_t k = 0; k < gen.valid.size(); ++k) {
            if (!gen.valid[k]) continue;
            const double t = psi.grid.time(k);
            const double cs = stark_shift_closed_form(delta, width, params.gamma_1d, t);
            const double cr = decay_rate_closed_form(delta, width, params.gamma_1d, t);
            max_shift = std::max(max_shift, std::abs(cs));
            max_rate = std::max(max_rate, std::abs(cr));
            dev_shift = std::max(dev_shift, std::abs(gen.shift[k] - cs));
            dev_rate = std::max(dev_rate, std::abs(gen.rate[k] - cr));
        }
        worst_ratio = std::max(worst_ratio, dev_shift / (1e-4 * max_shift));
        worst_ratio = std::max(worst_ratio, dev_rate / (1e-4 * max_rate));
        detail << "(" << delta << "," << width << "): shift " << dev_shift << "/" << 1e-4 * max_shift
               << ", rate " << dev_rate << "/" << 1e-4 * max_rate << "; ";
    }
    return {"numeric generator extraction vs closed forms (masked region excluded)", worst_ratio <= 1.0,
            worst_ratio, 1.0, detail.str()};
}

inline CheckResult interaction_energy_identity()
{
    const PhysicalParams params;
    double worst_ratio = 0.0;
    for (const auto& [delta, width] : figure_triples()) {
        const auto packet = exponential_packet(delta, width, params);
        const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(1.0e-3, 10.0));
        const auto gen = stark_shift_numeric(psi);
        double max_shift = 0.0, dev = 0.0;
        for (std::size_t k = 0; k < gen.valid.size(); ++k) {
            if (!gen.valid[k]) continue;
            const double t = psi.grid.time(k);
            const double pop = std::norm(psi.values[k]);
            const double identity = interaction_energy(params, packet, psi, t) / (2.0 * pop);
            const double closed = stark_shift_closed_form(delta, width, params.gamma_1d, t);
            max_shift = std::max(max_shift, std::abs(closed));
            dev = std::max(dev, std::abs(identity - closed));
        }
        worst_ratio = std::max(worst_ratio, dev / (1e-6 * max_shift));
    }
    return {"shift equals mean interaction energy over twice the population", worst_ratio <= 1.0, worst_ratio,
            1.0, "normalized to 1e-6 * max |shift| per parameter pair"};
}

inline CheckResult master_equation_exactness()
{
    double pop_dev = 0.0;
    std::ostringstream detail;
    for (const auto& [delta, width] : figure_triples()) {
        ScenarioConfig cfg;
        cfg.delta = delta;
        cfg.linewidth = width;
        const double dev = run_scenario(cfg).summaries.master_population_dev.value_or(1.0);
        pop_dev = std::max(pop_dev, dev);
        detail << "(" << delta << "," << width << "): " << dev << "; ";
    }

    ScenarioConfig cfg;
    cfg.delta = 3.0;
    cfg.linewidth = 0.9;
    cfg.c0_re = 0.6;
    const auto coherent = run_scenario(cfg);
    pop_dev = std::max(pop_dev, coherent.summaries.master_population_dev.value_or(1.0));
    const double coh_dev = coherent.summaries.master_coherence_dev.value_or(1.0);
    const double worst = std::max(pop_dev, coh_dev);
    detail << "coherence dev (c0 = 0.6): " << coh_dev;
    return {"master-equation trace matches the exact amplitudes", worst <= 1e-6, worst, 1e-6, detail.str()};
}

inline CheckResult interference_equivalence()
{
    const PhysicalParams params;
    double worst_ratio = 0.0;
    std::ostringstream detail;
    for (const auto& [delta, width] : figure_triples()) {
        const auto packet = exponential_packet(delta, width, params);
        const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(1.0e-3, 10.0));
        const auto series = intensity_series(params, packet, psi);
        const auto formula = interference_formula(params, packet, psi);
        double i0_max = 0.0, dev = 0.0;
        for (std::size_t k = 0; k < formula.size(); ++k) {
            i0_max = std::max(i0_max, series.i0[k]);
            dev = std::max(dev, std::abs(formula[k] - series.ia[k]));
        }
        worst_ratio = std::max(worst_ratio, dev / (1e-6 * i0_max));
        detail << "(" << delta << "," << width << "): " << dev << "/" << 1e-6 * i0_max << "; ";
    }
    return {"interference formula vs amplitude-level forward intensity", worst_ratio <= 1.0, worst_ratio, 1.0,
            detail.str()};
}

inline CheckResult monochromatic_scattering()
{
    const PhysicalParams params;
    double worst = 0.0;
    std::ostringstream detail;
    for (double delta : {0.0, 0.5, 1.0, 5.0}) {
        const auto packet = exponential_packet(delta, 0.01, params);
        const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(2.0e-3, 2000.0));
        const auto series = intensity_series(params, packet, psi);
        const double r = integrate_series(psi.grid, series.ib) / integrate_series(psi.grid, series.i0);
        const double expect = monochromatic_ratios(delta, params.gamma_1d).reflection;
        const double rel = std::abs(r - expect) / expect;
        worst = std::max(worst, rel);
        detail << "delta=" << delta << ": " << r << " vs " << expect << "; ";
    }

    double sum_defect = 0.0;
    for (double delta = -10.0; delta <= 10.0; delta += 0.0937) {
        const auto r = monochromatic_ratios(delta, 1.0);
        sum_defect = std::max(sum_defect, std::abs(r.reflection + r.transmission - 1.0));
    }
    detail << "max |R+T-1| = " << sum_defect;
    return {"integrated reflection matches the long-packet line shape", worst <= 0.02 && sum_defect == 0.0,
            worst, 0.02, detail.str()};
}

inline CheckResult flux_and_norm_conservation()
{
    const PhysicalParams params;
    double worst_flux = 0.0;
    std::ostringstream detail;
    for (const auto& [delta, width] : figure_triples()) {
        const double horizon = 20.0 / std::min(params.gamma_1d, width);
        const auto packet = exponential_packet(delta, width, params);
        const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(1.0e-3, horizon));
        const auto series = intensity_series(params, packet, psi);
        const double in = integrate_series(psi.grid, series.i0);
        const double out = integrate_series(psi.grid, series.ia) + integrate_series(psi.grid, series.ib);
        worst_flux = std::max(worst_flux, std::abs(out - in) / in);
        detail << "(" << delta << "," << width << "): out/in = " << out / in << "; ";
    }

    const auto packet = exponential_packet(3.0, 0.9, params);
    const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(1.0e-3, 10.0));
    double worst_norm = 0.0;
    for (double t : {0.0, 1.0, 2.0, 4.0, 7.0, 10.0}) {
        const auto grid = make_spatial_grid(-t - 16.0 / 0.9, std::max(t, 1.0), 120001);
        worst_norm = std::max(worst_norm, std::abs(excitation_norm(params, packet, psi, t, grid).value - 1.0));
    }
    detail << "excitation-norm drift = " << worst_norm;
    const bool pass = worst_flux <= 0.01 && worst_norm <= 1e-5;
    return {"flux conservation and excitation-norm constancy", pass, std::max(worst_flux, worst_norm * 1e3),
            0.01, detail.str()};
}

inline CheckResult figure_reproduction()
{
    std::ostringstream detail;
    bool pass = true;

    // peak ordering of the shift magnitude across the three regimes
    double peaks[3] = {};
    std::size_t i = 0;
    ScenarioConfig cfg;
    for (const auto& [delta, width] : std::vector<std::pair<double, double>>{{3.0, 0.9}, {5.0, 0.1}, {0.1, 5.0}}) {
        cfg.delta = delta;
        cfg.linewidth = width;
        peaks[i++] = run_scenario(cfg).summaries.max_abs_shift;
    }
    pass = pass && peaks[0] > peaks[1] && peaks[1] > peaks[2];
    detail << "peaks: " << peaks[0] << " > " << peaks[1] << " > " << peaks[2];

    // dynamic and static signals: near-coincidence for the short packet, the
    // intermediate pair separating them the most in the plotted signal units
    const PhysicalParams params;
    double rel_gap[3] = {}, abs_gap[3] = {};
    i = 0;
    for (const auto& [delta, width] : figure_triples()) {
        const auto packet = exponential_packet(delta, width, params);
        const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(1.0e-3, 10.0));
        const auto dyn = difference_signal(params, packet, psi, FrequencyMode::dynamic_shift);
        const auto stat = difference_signal(params, packet, psi, FrequencyMode::static_frequency);
        double scale = 0.0, gap = 0.0;
        for (std::size_t k = 0; k < dyn.size(); ++k) {
            scale = std::max(scale, std::abs(dyn[k]));
            gap = std::max(gap, std::abs(dyn[k] - stat[k]));
        }
        rel_gap[i] = gap / scale;
        abs_gap[i] = gap;
        ++i;
    }
    pass = pass && rel_gap[1] <= 0.01;                                  // (0.1, 5)
    pass = pass && abs_gap[2] > abs_gap[0] && abs_gap[2] > abs_gap[1];  // (3, 0.9)
    detail << "; gaps (5,0.1)/(0.1,5)/(3,0.9): " << abs_gap[0] << ", " << abs_gap[1] << ", " << abs_gap[2];

    // signal scale halves with the linewidth for the long detuned packet
    auto scale_of = [&](double width) {
        const auto packet = exponential_packet(5.0, width, params);
        const auto psi = evolve_psi_ode(params, packet, grid_from_horizon(2.0e-3, 20.0 / width));
        const auto dyn = difference_signal(params, packet, psi, FrequencyMode::dynamic_shift);
        double scale = 0.0;
        for (double v : dyn) scale = std::max(scale, std::abs(v));
        return scale;
    };
    const double ratio = scale_of(0.1) / scale_of(0.05);
    pass = pass && std::abs(ratio - 2.0) <= 0.2;
    detail << "; halved-linewidth scale ratio = " << ratio;

    return {"figure regimes: peak ordering, signal coincidence and scaling", pass, ratio, 2.2, detail.str()};
}

inline CheckResult symmetry_and_scaling()
{
    const PhysicalParams params;
    std::ostringstream detail;

    // shift odd in the detuning, numeric route
    double worst_odd = 0.0;
    {
        const auto plus = stark_shift_numeric(evolve_triple(params, 3.0, 0.9));
        const auto minus = stark_shift_numeric(evolve_triple(params, -3.0, 0.9));
        for (std::size_t k = 0; k < plus.valid.size(); ++k) {
            if (!plus.valid[k] || !minus.valid[k]) continue;
            worst_odd = std::max(worst_odd, std::abs(plus.shift[k] + minus.shift[k]));
        }
        for (double t = 0.0; t < 10.0; t += 0.0137)
            worst_odd = std::max(worst_odd, std::abs(stark_shift_closed_form(3.0, 0.9, 1.0, t) +
                                                     stark_shift_closed_form(-3.0, 0.9, 1.0, t)));
    }
    detail << "oddness defect " << worst_odd;

    // doubling all rates and halving all times reproduces the dimensionless run
    double worst_scale = 0.0;
    {
        ScenarioConfig base;
        base.delta = 3.0;
        base.linewidth = 0.9;
        ScenarioConfig doubled = base;
        doubled.gamma_1d = 2.0;
        doubled.omega0 = 2.0e6;
        doubled.rho_1d = base.rho_1d / 2.0;
        doubled.delta = 6.0;
        doubled.linewidth = 1.8;
        doubled.dt = 5.0e-4;
        doubled.t_max = 5.0;
        const auto a = run_scenario(base);
        const auto b = run_scenario(doubled);
        for (std::size_t k = 0; k < a.grid.n_samples; ++k) {
            worst_scale = std::max(worst_scale, std::abs(b.psi.values[k] - a.psi.values[k]));
            if (a.generator.valid[k] && b.generator.valid[k])
                worst_scale = std::max(
                    worst_scale, std::abs(b.generator.shift[k] / 2.0 - a.generator.shift[k]) /
                                     std::max(1.0, std::abs(a.generator.shift[k])));
        }
    }
    detail << "; rate-rescaling defect " << worst_scale;

    // the carrier reference never enters the dimensionless series
    double omega_defect = 0.0;
    {
        ScenarioConfig a;
        a.delta = 3.0;
        a.linewidth = 0.9;
        ScenarioConfig b = a;
        b.omega0 = 777.0;
        omega_defect = csv_text(run_scenario(a)) == csv_text(run_scenario(b)) ? 0.0 : 1.0;
    }
    detail << "; carrier-independence defect " << omega_defect;

    const bool pass = worst_odd <= 1e-10 && worst_scale <= 1e-12 && omega_defect == 0.0;
    return {"shift oddness, unit rescaling, carrier independence", pass,
            std::max({worst_odd / 1e-10, worst_scale / 1e-12, omega_defect}), 1.0, detail.str()};
}

inline CheckResult determinism()
{
    ScenarioConfig cfg;
    cfg.delta = 3.0;
    cfg.linewidth = 0.9;
    cfg.t_max = 5.0;
    const auto once = csv_text(run_scenario(cfg));
    const auto twice = csv_text(run_scenario(cfg));
    const bool repeat_ok = once == twice;

    const auto deltas = parse_sweep_axis("-3:3:3");
    const auto widths = parse_sweep_axis("0.5:1.5:2");
    ScenarioConfig base;
    base.t_max = 5.0;
    const auto serial = sweep_table_csv(run_sweep(base, deltas, widths, 1));
    const auto parallel = sweep_table_csv(run_sweep(base, deltas, widths, 4));
    const bool sweep_ok = serial == parallel;

    std::ostringstream detail;
    detail << "repeated run " << (repeat_ok ? "identical" : "DIFFERS") << ", parallel sweep "
           << (sweep_ok ? "identical" : "DIFFERS");
    return {"byte-identical repeated runs and scheduling-independent sweeps", repeat_ok && sweep_ok,
            repeat_ok && sweep_ok ? 0.0 : 1.0, 0.0, detail.str()};
}

}  // namespace checks

/// Every acceptance criterion, in order, as named pass/fail checks.
inline std::vector<CheckResult> run_validation_checks()
{
    return {
        checks::closed_form_vs_ode(),
        checks::shift_limit_cases(),
        checks::shift_extraction_consistency(),
        checks::interaction_energy_identity(),
        checks::master_equation_exactness(),
        checks::interference_equivalence(),
        checks::monochromatic_scattering(),
        checks::flux_and_norm_conservation(),
        checks::figure_reproduction(),
        checks::symmetry_and_scaling(),
        checks::determinism(),
    };
}

}  // namespace starkpacket
