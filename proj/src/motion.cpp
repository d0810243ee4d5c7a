#include "osw/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "osw/parallel.hpp"

namespace osw {

double TrapSpec::position_sigma() const {
    return std::sqrt(constants::kBoltzmann * temperature / (mass * omega_trap * omega_trap));
}

double TrapSpec::velocity_sigma() const { return std::sqrt(constants::kBoltzmann * temperature / mass); }

double TrapSpec::period() const { return 2.0 * std::numbers::pi / omega_trap; }

void TrapSpec::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(mass)) throw std::invalid_argument("TrapSpec: mass must be positive");
    if (!positive(omega_trap)) throw std::invalid_argument("TrapSpec: trap frequency must be positive");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw std::invalid_argument("TrapSpec: temperature must be >= 0");
    if (!positive(wavevector)) throw std::invalid_argument("TrapSpec: wavevector must be positive");
}

TrapSpec yb171_preset() {
    return {.mass = 171.0 * constants::kAtomicMassUnit,
            .omega_trap = 2.0 * std::numbers::pi * 100e3,
            .temperature = 5e-6,
            .wavevector = 2.0 * std::numbers::pi / 578e-9};
}

InitialCondition sample_thermal(const TrapSpec& trap, std::mt19937_64& rng) {
    const double zx = standard_normal(rng);
    const double zv = standard_normal(rng);
    return {.x0 = trap.position_sigma() * zx, .v0 = trap.velocity_sigma() * zv};
}

std::vector<double> trajectory_phase(const TrapSpec& trap, const InitialCondition& ic, std::span<const double> times) {
    std::vector<double> kx(times.size());
    const double w = trap.omega_trap;
    std::transform(times.begin(), times.end(), kx.begin(), [&](double t) {
        return trap.wavevector * (ic.x0 * std::cos(w * t) + ic.v0 / w * std::sin(w * t));
    });
    return kx;
}

double EnsembleStats::std_error() const {
    return n_trajectories > 0 ? std / std::sqrt(static_cast<double>(n_trajectories)) : 0.0;
}

EnsembleStats ensemble_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("ensemble_stats: empty sample");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);

    std::vector<double> sorted(values.begin(), values.end());
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());

    return {.mean = mean, .median = *mid, .std = std::sqrt(ss / n), .n_trajectories = values.size(), .seed = 0};
}

double default_rabi_rescale(ProtocolId id) { return is_standing_wave(id) ? 1.03 : 1.0; }

std::vector<double> motional_infidelities(ProtocolId protocol, const GateTarget& g, double duration,
                                          const TrapSpec& trap, const MotionOptions& opts) {
    trap.validate();
    if (opts.n_trajectories < 1) throw std::invalid_argument("run_motional_ensemble: n_trajectories must be >= 1");
    if (!(opts.rabi_rescale > 0.0)) throw std::invalid_argument("run_motional_ensemble: rabi_rescale must be positive");

    const SampledControls controls = make_protocol(protocol, g, duration, opts.n_segments);
    const Unitary2 target = target_unitary(g);
    const std::vector<double> times = controls.midpoints();

    std::vector<double> result(opts.n_trajectories);
    parallel_for(opts.n_trajectories, opts.threads, [&](std::size_t i) {
        auto rng = substream(opts.seed, i);
        const InitialCondition ic = sample_thermal(trap, rng);
        DriveContext ctx;
        ctx.phase_kx = trajectory_phase(trap, ic, times);
        ctx.rabi_scale_1 = opts.rabi_rescale;
        ctx.rabi_scale_2 = opts.rabi_rescale;
        result[i] = infidelity(propagate(controls, ctx), target);
    });
    return result;
}

EnsembleStats run_motional_ensemble(ProtocolId protocol, const GateTarget& g, double duration, const TrapSpec& trap,
                                    const MotionOptions& opts) {
    const auto values = motional_infidelities(protocol, g, duration, trap, opts);
    auto stats = ensemble_stats(values);
    stats.seed = opts.seed;
    return stats;
}

double gate_time_for_peak(ProtocolId protocol, const GateTarget& g, double omega_max, double rabi_rescale) {
    if (!(omega_max > 0.0)) throw std::invalid_argument("gate_time_for_peak: omega_max must be positive");
    // Peak amplitudes scale as 1/T; measure the unit-duration peak on a grid
    // whose midpoints hit the envelope maxima.
    const auto unit = make_protocol(protocol, g, 1.0, 4001);
    double peak = 0.0;
    for (std::size_t j = 0; j < unit.n_segments(); ++j) {
        peak = std::max({peak, std::abs(unit.omega1[j]), std::abs(unit.omega2[j])});
    }
    const double budget = is_standing_wave(protocol) ? omega_max / std::numbers::sqrt2 : omega_max;
    return rabi_rescale * peak / budget;
}

}  // namespace osw
