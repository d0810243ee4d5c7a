#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "osw/dynamics.hpp"

namespace osw {

enum class ProtocolId { OTW1, OSW1, OSW_BB1, OSW_LS1, OSW_LS2 };

std::string_view to_string(ProtocolId id);
std::optional<ProtocolId> protocol_from_string(std::string_view name);

// Standing-wave protocols drive both beams; only OTW1 is a travelling wave.
bool is_standing_wave(ProtocolId id);
// Light-shift addressed protocols (fixed theta = pi/2, antisymmetric drive).
bool is_light_shift_protocol(ProtocolId id);

struct BB1Phases {
    double p = 4.0;
    double phi_a = 0.0;
    double phi_b = 0.0;
};

BB1Phases bb1_phases(double theta);

// Single half-sine travelling-wave pulse of area theta.
SampledControls make_otw(const GateTarget& g, double duration, std::size_t n);

// Half-sine standing-wave pulse; each beam carries half the travelling-wave amplitude.
SampledControls make_osw(const GateTarget& g, double duration, std::size_t n);

// Four constant-amplitude pieces with phases (phi_a, phi_b, phi_a, phi) and
// combined areas (pi, 2pi, pi, theta). The n segments are distributed over the
// pieces so that every piece boundary is a segment edge.
SampledControls make_osw_bb1(const GateTarget& g, double duration, std::size_t n);

// Light-shift addressed pi/2 gates. The drive is antisymmetric about T/2 so
// non-target qubits (no light shift) return to their initial state.
SampledControls make_osw_ls1(double phi, double duration, std::size_t n);
SampledControls make_osw_ls2(double phi, double duration, std::size_t n);

// Constants of the published light-shift gates, in units of 1/T.
namespace ls_coeffs {
inline constexpr double kLs1Drive = 3.1317;
inline constexpr double kLs1Shift = 3.5859;
inline constexpr double kLs2Drive = 7.5551;
inline constexpr double kLs2ShiftH2 = 2.1366;
inline constexpr double kLs2ShiftH4 = 0.8875;
}  // namespace ls_coeffs

// Drive phase of the light-shift basis, relative to the gate phase phi.
inline constexpr double kLightShiftDrivePhaseOffset = 1.5707963267948966;

// Dispatch by id. Light-shift protocols require theta == pi/2.
SampledControls make_protocol(ProtocolId id, const GateTarget& g, double duration, std::size_t n);

// max_j |Omega(t_j) + Omega(T - t_j)| / max_j |Omega(t_j)| over both beams,
// pairing segment j with n-1-j. Zero for all-zero controls.
double check_antisymmetry(const SampledControls& controls);

}  // namespace osw
