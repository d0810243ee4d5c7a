#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osw/dynamics.hpp"

namespace osw {

enum class QubitRole { target, non_target };
enum class NoiseKind { rabi_per_beam, qubit_frequency };
enum class AveragingMode { monte_carlo, gauss_hermite };

std::string_view to_string(QubitRole role);
std::string_view to_string(NoiseKind kind);
std::string_view to_string(AveragingMode mode);

// Tabulated infidelity versus one swept parameter. median/std are empty when
// the sweep is deterministic (one evaluation per point).
struct SweepResult {
    std::string parameter_name;
    std::vector<double> parameter_values;
    std::vector<double> mean_infidelity;
    std::vector<double> median_infidelity;
    std::vector<double> std_infidelity;
    QubitRole qubit_role = QubitRole::target;
};

// Atom at rest at each kx, nominal amplitudes, no detuning.
SweepResult sweep_local_phase(const SampledControls& controls, const Unitary2& target,
                              std::span<const double> kx_values);

// Slope of log(infidelity) against log|kx| over points with kx_min <= |kx| <= kx_max.
// Throws std::invalid_argument with fewer than four points in the window and
// std::domain_error if any infidelity there is at or below 1e-14.
double fit_error_order(const SweepResult& sweep, double kx_min, double kx_max);

struct NoiseAveraging {
    AveragingMode mode = AveragingMode::monte_carlo;
    std::size_t n_samples = 2000;  // Monte Carlo draws per sigma
    std::size_t gh_nodes = 21;     // Gauss-Hermite nodes per noisy dimension
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

// Static noise averaged over normal distributions of width sigma:
//   rabi_per_beam:   beam multipliers (1 + d1), (1 + d2), d_i ~ N(0, sigma) independent
//   qubit_frequency: gamma ~ N(0, sigma / T)
// Non-target qubits see no light shift and are scored against the identity.
SweepResult sweep_static_noise(const SampledControls& controls, const Unitary2& target, NoiseKind kind,
                               std::span<const double> sigmas, QubitRole role, const NoiseAveraging& averaging);

// Beam amplitudes scaled by sqrt(1 + d/2) and sqrt(1 - d/2).
SweepResult sweep_intensity_imbalance(const SampledControls& controls, const Unitary2& target, double imbalance,
                                      std::span<const double> kx_values);

// Euclidean norm of the complex 3-vector (Tr(M sx), Tr(M sy), Tr(M sz)).
double pauli_norm(const Mat2& m);

// First- and second-order Magnus terms of a sz perturbation on the non-target
// (no light shift, zero-error) evolution, per unit detuning, together with the
// equivalent space-curve picture. Curve vertex j is the running integral of
// the Pauli components of M(t) = U_d^dagger(t) sz U_d(t) up to edge j.
struct MagnusDiagnostics {
    Mat2 m1;
    double m1_norm = 0.0;
    double m2_norm = 0.0;
    double bloch_closure = 0.0;
    std::array<double, 3> projected_areas{};  // xy, xz, yz planes
    std::vector<std::array<double, 3>> curve;  // n + 1 vertices, starting at the origin
};

MagnusDiagnostics magnus_diagnostics(const SampledControls& controls);

}  // namespace osw
