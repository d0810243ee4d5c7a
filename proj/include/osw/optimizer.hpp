#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "osw/dynamics.hpp"

namespace osw {

// Time-reversal constrained sum-of-sines pulse:
//   per-beam drive  Omega(t) T = sum_n a_n sin(2 pi n t / T) e^{i(phi + pi/2)}
//   light shift     V(t) T     = (sum_m c_m sin(pi m t / T))^2
// drive_coeffs[n-1] holds a_n and shift_coeffs[m-1] holds c_m.
struct PulseBasisParams {
    std::vector<double> drive_coeffs;
    std::vector<double> shift_coeffs;
    double drive_phase = 0.0;
};

SampledControls realize_controls(const PulseBasisParams& params, double duration, std::size_t n);

struct CostBreakdown {
    double infidelity = 0.0;  // target qubit, light shift on
    double m1_norm = 0.0;     // non-target first-order Magnus norm
    double cost = 0.0;        // infidelity + m1_norm / T
};

CostBreakdown evaluate_cost(const PulseBasisParams& params, const GateTarget& target, double duration, std::size_t n);

inline double cost(const PulseBasisParams& params, const GateTarget& target, double duration, std::size_t n) {
    return evaluate_cost(params, target, duration, n).cost;
}

struct OptimizerConfig {
    std::vector<int> drive_harmonics{1};  // free a_n
    std::vector<int> shift_harmonics{2, 4};  // free c_m
    std::size_t max_iterations = 4000;
    double cost_tolerance = 1e-4;
    std::size_t restarts = 20;
    std::uint64_t seed = 1;
    std::size_t n_segments = 400;
    double drive_init_max = 15.0;  // a_n drawn from U(0, drive_init_max)
    double shift_init_max = 3.0;   // c_m drawn from U(-shift_init_max, shift_init_max)
    double simplex_tolerance = 1e-11;

    // Harmonics 1..n_drive and 1..n_shift.
    static OptimizerConfig dense(int n_drive, int n_shift);
    void validate() const;
};

struct RestartOutcome {
    double cost = 0.0;
    double infidelity = 0.0;
    double m1_norm = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct OptimizedPulse {
    PulseBasisParams params;
    double final_cost = 0.0;
    double fidelity = 0.0;
    double m1_norm = 0.0;
    bool converged = false;
    std::vector<RestartOutcome> restarts;
};

// Multi-restart simplex descent; restart r starts from a point drawn from
// substream(seed, r). Returns the lowest-cost pulse found.
OptimizedPulse optimize(const OptimizerConfig& config, const GateTarget& target, double duration);

}  // namespace osw
