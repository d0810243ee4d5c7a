#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "osw/cli.hpp"
#include "osw/motion.hpp"
#include "osw/optimizer.hpp"
#include "osw/protocols.hpp"
#include "osw/robustness.hpp"

#ifndef OSW_VERSION
#define OSW_VERSION "unknown"
#endif

namespace osw::cli {
namespace {

GateTarget gate_of(const json& cfg) { return {cfg.at("theta_rad").get<double>(), cfg.at("phi_rad").get<double>()}; }

ProtocolId protocol_of(const json& cfg) { return *protocol_from_string(cfg.at("protocol").get<std::string>()); }

std::size_t segments_of(const json& cfg) { return cfg.at("n_segments").get<std::size_t>(); }

SampledControls controls_of(const json& cfg) {
    return make_protocol(protocol_of(cfg), gate_of(cfg), cfg.at("duration_s").get<double>(), segments_of(cfg));
}

Table protocol_dump(const json& cfg) {
    const auto c = controls_of(cfg);
    Table t;
    t.columns = {"t_s", "dt_s", "omega1_abs_rad_per_s", "omega1_arg_rad", "omega2_abs_rad_per_s", "omega2_arg_rad",
                 "light_shift_rad_per_s"};
    for (std::size_t j = 0; j < c.n_segments(); ++j) {
        t.rows.push_back({c.midpoint(j), c.dt(j), std::abs(c.omega1[j]), std::arg(c.omega1[j]), std::abs(c.omega2[j]),
                          std::arg(c.omega2[j]), c.light_shift[j]});
    }
    t.metadata["results"] = {{"antisymmetry_residual", check_antisymmetry(c)}};
    return t;
}

Table sweep_phase(const json& cfg) {
    const auto kx = cfg.at("kx_values_rad").get<std::vector<double>>();
    const auto sweep = sweep_local_phase(controls_of(cfg), target_unitary(gate_of(cfg)), kx);
    Table t;
    t.columns = {"kx_rad", "infidelity"};
    for (std::size_t i = 0; i < kx.size(); ++i) t.rows.push_back({kx[i], sweep.mean_infidelity[i]});
    return t;
}

Table sweep_imbalance(const json& cfg) {
    const auto kx = cfg.at("kx_values_rad").get<std::vector<double>>();
    const auto controls = controls_of(cfg);
    const auto target = target_unitary(gate_of(cfg));
    const auto imbalanced = sweep_intensity_imbalance(controls, target, cfg.at("imbalance").get<double>(), kx);
    const auto balanced = sweep_local_phase(controls, target, kx);
    Table t;
    t.columns = {"kx_rad", "infidelity", "infidelity_balanced"};
    for (std::size_t i = 0; i < kx.size(); ++i) {
        t.rows.push_back({kx[i], imbalanced.mean_infidelity[i], balanced.mean_infidelity[i]});
    }
    return t;
}

Table sweep_noise(const json& cfg, unsigned threads) {
    const auto sigmas = cfg.at("sigmas").get<std::vector<double>>();
    NoiseAveraging avg;
    avg.mode = cfg.at("averaging") == "gauss_hermite" ? AveragingMode::gauss_hermite : AveragingMode::monte_carlo;
    avg.n_samples = cfg.at("n_samples").get<std::size_t>();
    avg.gh_nodes = cfg.at("gh_nodes").get<std::size_t>();
    avg.seed = cfg.at("seed").get<std::uint64_t>();
    avg.threads = threads;
    const auto kind = cfg.at("noise_kind") == "rabi_per_beam" ? NoiseKind::rabi_per_beam : NoiseKind::qubit_frequency;
    const auto role = cfg.at("role") == "target" ? QubitRole::target : QubitRole::non_target;
    const auto sweep = sweep_static_noise(controls_of(cfg), target_unitary(gate_of(cfg)), kind, sigmas, role, avg);

    Table t;
    const bool with_median = !sweep.median_infidelity.empty();
    t.columns = {"sigma", "mean_infidelity", "std_infidelity"};
    if (with_median) t.columns.push_back("median_infidelity");
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        std::vector<double> row{sigmas[i], sweep.mean_infidelity[i], sweep.std_infidelity[i]};
        if (with_median) row.push_back(sweep.median_infidelity[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table sweep_motion(const json& cfg, unsigned threads) {
    const json& tj = cfg.at("trap");
    const TrapSpec trap{.mass = tj.at("mass_kg").get<double>(),
                        .omega_trap = tj.at("trap_frequency_rad_per_s").get<double>(),
                        .temperature = tj.at("temperature_K").get<double>(),
                        .wavevector = 2.0 * std::numbers::pi / tj.at("wavelength_m").get<double>()};
    MotionOptions opts;
    opts.n_trajectories = cfg.at("n_trajectories").get<std::size_t>();
    opts.seed = cfg.at("seed").get<std::uint64_t>();
    opts.rabi_rescale = cfg.at("rabi_rescale").get<double>();
    opts.n_segments = segments_of(cfg);
    opts.threads = threads;

    Table t;
    t.columns = {"gate_time_s",    "gate_time_trap_periods", "mean_infidelity", "median_infidelity",
                 "std_infidelity", "std_error",              "n_trajectories"};
    for (double T : cfg.at("gate_times_s").get<std::vector<double>>()) {
        const auto s = run_motional_ensemble(protocol_of(cfg), gate_of(cfg), T, trap, opts);
        t.rows.push_back({T, T / trap.period(), s.mean, s.median, s.std, s.std_error(),
                          static_cast<double>(s.n_trajectories)});
    }
    t.metadata["results"] = {{"position_sigma_m", trap.position_sigma()},
                             {"kx_sigma_rad", trap.wavevector * trap.position_sigma()},
                             {"trap_period_s", trap.period()}};
    return t;
}

json matrix_json(const Mat2& m) {
    json rows = json::array();
    for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

Table magnus(const json& cfg) {
    const double T = cfg.at("duration_s").get<double>();
    SampledControls controls;
    if (cfg.contains("protocol")) {
        controls = controls_of(cfg);
    } else {
        const json& b = cfg.at("basis");
        PulseBasisParams p{b.at("drive_coeffs").get<std::vector<double>>(), b.at("shift_coeffs").get<std::vector<double>>(),
                           b.at("drive_phase_rad").get<double>()};
        controls = realize_controls(p, T, segments_of(cfg));
    }
    const auto d = magnus_diagnostics(controls);

    Table t;
    t.columns = {"t_s", "r_x", "r_y", "r_z"};
    for (std::size_t j = 0; j < d.curve.size(); ++j) {
        t.rows.push_back({controls.edges[j], d.curve[j][0], d.curve[j][1], d.curve[j][2]});
    }
    json results{{"m1", matrix_json(d.m1)},
                 {"m1_norm", d.m1_norm},
                 {"m1_norm_over_T", d.m1_norm / T},
                 {"m2_norm", d.m2_norm},
                 {"bloch_closure", d.bloch_closure},
                 {"projected_areas", {{"xy", d.projected_areas[0]}, {"xz", d.projected_areas[1]}, {"yz", d.projected_areas[2]}}},
                 {"antisymmetry_residual", check_antisymmetry(controls)}};
    // Direct non-target propagation against the first-order prediction.
    json checks = json::array();
    for (double gT : cfg.at("perturbation_gamma_T").get<std::vector<double>>()) {
        DriveContext ctx;
        ctx.is_target = false;
        ctx.detuning_gamma = gT / T;
        const double direct = infidelity(propagate(controls, ctx), Mat2::identity());
        const double predicted = std::pow(ctx.detuning_gamma * d.m1_norm / 2.0, 2);
        checks.push_back({{"gamma_T", gT}, {"direct", direct}, {"predicted", predicted}});
    }
    results["perturbation_check"] = checks;
    t.metadata["results"] = results;
    return t;
}

Table run_optimize(const json& cfg) {
    OptimizerConfig oc;
    oc.drive_harmonics = cfg.at("drive_harmonics").get<std::vector<int>>();
    oc.shift_harmonics = cfg.at("shift_harmonics").get<std::vector<int>>();
    oc.max_iterations = cfg.at("max_iterations").get<std::size_t>();
    oc.cost_tolerance = cfg.at("cost_tolerance").get<double>();
    oc.restarts = cfg.at("restarts").get<std::size_t>();
    oc.seed = cfg.at("seed").get<std::uint64_t>();
    oc.n_segments = segments_of(cfg);
    oc.drive_init_max = cfg.at("drive_init_max").get<double>();
    oc.shift_init_max = cfg.at("shift_init_max").get<double>();
    const auto best = optimize(oc, gate_of(cfg), cfg.at("duration_s").get<double>());

    Table t;
    t.columns = {"restart", "cost", "infidelity", "m1_norm", "evaluations", "converged"};
    for (std::size_t r = 0; r < best.restarts.size(); ++r) {
        const auto& o = best.restarts[r];
        t.rows.push_back({static_cast<double>(r), o.cost, o.infidelity, o.m1_norm, static_cast<double>(o.evaluations),
                          o.converged ? 1.0 : 0.0});
    }
    t.metadata["results"] = {{"drive_coeffs", best.params.drive_coeffs},
                             {"shift_coeffs", best.params.shift_coeffs},
                             {"drive_phase_rad", best.params.drive_phase},
                             {"final_cost", best.final_cost},
                             {"fidelity", best.fidelity},
                             {"m1_norm", best.m1_norm},
                             {"converged", best.converged}};
    return t;
}

}  // namespace

Table execute(const json& cfg, unsigned threads) {
    const std::string command = cfg.at("command").get<std::string>();
    Table t;
    if (command == "protocol-dump") t = protocol_dump(cfg);
    else if (command == "sweep-phase") t = sweep_phase(cfg);
    else if (command == "sweep-imbalance") t = sweep_imbalance(cfg);
    else if (command == "sweep-noise") t = sweep_noise(cfg, threads);
    else if (command == "sweep-motion") t = sweep_motion(cfg, threads);
    else if (command == "magnus") t = magnus(cfg);
    else if (command == "optimize") t = run_optimize(cfg);
    else throw ConfigError("command", "unknown command");

    json results = t.metadata.contains("results") ? t.metadata["results"] : json::object();
    t.metadata = {{"tool", "oswgate"},  {"version", OSW_VERSION},  {"command", command},
                  {"seed", cfg.at("seed")}, {"config", cfg}, {"columns", t.columns}, {"results", results}};
    return t;
}

int run(const std::filesystem::path& config_path, const RunOverrides& overrides) {
    json raw;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "oswgate: cannot read config " << config_path << '\n';
            return 2;
        }
        try {
            raw = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "oswgate: config is not valid JSON: " << e.what() << '\n';
            return 1;
        }
    }
    try {
        if (raw.is_object()) {
            if (overrides.output) raw["output"] = *overrides.output;
            if (overrides.seed) raw["seed"] = *overrides.seed;
        }
        const json cfg = resolve_config(raw);
        const Table table = execute(cfg, overrides.threads);
        write_table(cfg.at("output").get<std::string>(), table);
    } catch (const ConfigError& e) {
        std::cerr << "oswgate: invalid config key " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        std::cerr << "oswgate: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "oswgate: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace osw::cli
