#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "osw/dynamics.hpp"
#include "osw/protocols.hpp"

namespace osw {

namespace constants {
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
}  // namespace constants

// One-dimensional harmonic trap and drive wavevector defining a thermal ensemble.
struct TrapSpec {
    double mass = 0.0;         // kg
    double omega_trap = 0.0;   // rad/s
    double temperature = 0.0;  // K
    double wavevector = 0.0;   // rad/m

    double position_sigma() const;  // m
    double velocity_sigma() const;  // m/s
    double period() const;          // s
    void validate() const;
};

// 171Yb on the 578 nm clock transition, 100 kHz trap, 5 uK.
TrapSpec yb171_preset();

struct InitialCondition {
    double x0 = 0.0;  // m
    double v0 = 0.0;  // m/s
};

InitialCondition sample_thermal(const TrapSpec& trap, std::mt19937_64& rng);

// k x(t) for x(t) = x0 cos(w t) + (v0 / w) sin(w t).
std::vector<double> trajectory_phase(const TrapSpec& trap, const InitialCondition& ic, std::span<const double> times);

struct EnsembleStats {
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;
    std::size_t n_trajectories = 0;
    std::uint64_t seed = 0;

    double std_error() const;
};

// Arithmetic mean, lower median, population standard deviation.
EnsembleStats ensemble_stats(std::span<const double> infidelities);

// 1.03 for standing-wave protocols (spatially averaged intensity), 1 otherwise.
double default_rabi_rescale(ProtocolId id);

struct MotionOptions {
    std::size_t n_trajectories = 2000;
    std::uint64_t seed = 1;
    double rabi_rescale = 1.0;
    std::size_t n_segments = 400;
    unsigned threads = 1;
};

// Per-trajectory infidelities against target_unitary(g); trajectory i uses
// substream(seed, i).
std::vector<double> motional_infidelities(ProtocolId protocol, const GateTarget& g, double duration,
                                          const TrapSpec& trap, const MotionOptions& opts);

EnsembleStats run_motional_ensemble(ProtocolId protocol, const GateTarget& g, double duration, const TrapSpec& trap,
                                    const MotionOptions& opts);

// Shortest gate time whose per-beam peak amplitude (after rabi_rescale) stays
// within the budget: omega_max for a travelling wave, omega_max/sqrt(2) per
// beam for standing waves (fixed total optical power).
double gate_time_for_peak(ProtocolId protocol, const GateTarget& g, double omega_max, double rabi_rescale);

}  // namespace osw
