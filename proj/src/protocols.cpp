#include "osw/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace osw {
namespace {

constexpr double kPi = std::numbers::pi;

void require_grid(double duration, std::size_t n) {
    if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("protocol: duration must be positive");
    if (n < 2) throw std::invalid_argument("protocol: need at least 2 segments");
}

SampledControls half_sine(const GateTarget& g, double duration, std::size_t n, double amplitude, bool both_beams) {
    require_grid(duration, n);
    auto c = SampledControls::uniform(duration, n);
    const Complex phase = std::polar(1.0, g.phi);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex w = amplitude * std::sin(kPi * c.midpoint(j) / duration) * phase;
        c.omega1[j] = w;
        if (both_beams) c.omega2[j] = w;
    }
    return c;
}

void require_quarter_turn(const GateTarget& g) {
    if (std::abs(g.theta - kPi / 2) > 1e-12) {
        throw std::invalid_argument("light-shift protocols realize theta = pi/2 only");
    }
}

}  // namespace

std::string_view to_string(ProtocolId id) {
    switch (id) {
        case ProtocolId::OTW1: return "OTW1";
        case ProtocolId::OSW1: return "OSW1";
        case ProtocolId::OSW_BB1: return "OSW_BB1";
        case ProtocolId::OSW_LS1: return "OSW_LS1";
        case ProtocolId::OSW_LS2: return "OSW_LS2";
    }
    return "unknown";
}

std::optional<ProtocolId> protocol_from_string(std::string_view name) {
    for (auto id : {ProtocolId::OTW1, ProtocolId::OSW1, ProtocolId::OSW_BB1, ProtocolId::OSW_LS1, ProtocolId::OSW_LS2}) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

bool is_standing_wave(ProtocolId id) { return id != ProtocolId::OTW1; }

bool is_light_shift_protocol(ProtocolId id) { return id == ProtocolId::OSW_LS1 || id == ProtocolId::OSW_LS2; }

BB1Phases bb1_phases(double theta) {
    const double phi_a = std::acos(-theta / (4.0 * kPi));
    return {.p = theta / kPi + 4.0, .phi_a = phi_a, .phi_b = 3.0 * phi_a};
}

SampledControls make_otw(const GateTarget& g, double duration, std::size_t n) {
    return half_sine(g, duration, n, g.theta * kPi / (2.0 * duration), false);
}

SampledControls make_osw(const GateTarget& g, double duration, std::size_t n) {
    return half_sine(g, duration, n, g.theta * kPi / (4.0 * duration), true);
}

SampledControls make_osw_bb1(const GateTarget& g, double duration, std::size_t n) {
    require_grid(duration, n);
    const auto ph = bb1_phases(g.theta);

    // Piece boundaries in units of T/p.
    const std::array<double, 5> marks{0.0, 1.0, 3.0, 4.0, ph.p};
    const std::array<double, 4> phases{ph.phi_a, ph.phi_b, ph.phi_a, g.phi};

    // Largest-remainder allocation of segments to pieces, at least one per
    // non-empty piece.
    std::array<double, 4> share{};
    std::array<std::size_t, 4> count{};
    std::size_t non_empty = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        share[k] = (marks[k + 1] - marks[k]) / ph.p * static_cast<double>(n);
        if (share[k] > 0.0) ++non_empty;
    }
    if (n < non_empty) throw std::invalid_argument("make_osw_bb1: too few segments for the BB1 pieces");
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        count[k] = share[k] > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(share[k]))) : 0;
        assigned += count[k];
    }
    while (assigned > n) {
        auto k = static_cast<std::size_t>(std::distance(count.begin(), std::max_element(count.begin(), count.end())));
        --count[k];
        --assigned;
    }
    while (assigned < n) {
        std::size_t best = 0;
        double best_rem = -1e300;
        for (std::size_t k = 0; k < 4; ++k) {
            if (share[k] <= 0.0) continue;
            const double rem = share[k] - static_cast<double>(count[k]);
            if (rem > best_rem) {
                best_rem = rem;
                best = k;
            }
        }
        ++count[best];
        ++assigned;
    }

    SampledControls c;
    c.duration = duration;
    c.edges.reserve(n + 1);
    const double amplitude = kPi * ph.p / (2.0 * duration);
    for (std::size_t k = 0; k < 4; ++k) {
        const double t0 = marks[k] * duration / ph.p;
        const double t1 = marks[k + 1] * duration / ph.p;
        const Complex w = std::polar(amplitude, phases[k]);
        for (std::size_t s = 0; s < count[k]; ++s) {
            c.edges.push_back(t0 + (t1 - t0) * static_cast<double>(s) / static_cast<double>(count[k]));
            c.omega1.push_back(w);
            c.omega2.push_back(w);
            c.light_shift.push_back(0.0);
        }
    }
    c.edges.push_back(duration);
    return c;
}

SampledControls make_osw_ls1(double phi, double duration, std::size_t n) {
    require_grid(duration, n);
    auto c = SampledControls::uniform(duration, n);
    const Complex phase = std::polar(1.0, phi + kLightShiftDrivePhaseOffset);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = c.midpoint(j) / duration;
        const Complex w = ls_coeffs::kLs1Drive / duration * std::sin(2.0 * kPi * x) * phase;
        c.omega1[j] = w;
        c.omega2[j] = w;
        const double s = std::sin(kPi * x);
        c.light_shift[j] = ls_coeffs::kLs1Shift / duration * s * s;
    }
    return c;
}

SampledControls make_osw_ls2(double phi, double duration, std::size_t n) {
    require_grid(duration, n);
    auto c = SampledControls::uniform(duration, n);
    const Complex phase = std::polar(1.0, phi + kLightShiftDrivePhaseOffset);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = c.midpoint(j) / duration;
        const Complex w = ls_coeffs::kLs2Drive / duration * std::sin(2.0 * kPi * x) * phase;
        c.omega1[j] = w;
        c.omega2[j] = w;
        const double s = ls_coeffs::kLs2ShiftH2 * std::sin(2.0 * kPi * x) + ls_coeffs::kLs2ShiftH4 * std::sin(4.0 * kPi * x);
        c.light_shift[j] = s * s / duration;
    }
    return c;
}

SampledControls make_protocol(ProtocolId id, const GateTarget& g, double duration, std::size_t n) {
    switch (id) {
        case ProtocolId::OTW1: return make_otw(g, duration, n);
        case ProtocolId::OSW1: return make_osw(g, duration, n);
        case ProtocolId::OSW_BB1: return make_osw_bb1(g, duration, n);
        case ProtocolId::OSW_LS1: require_quarter_turn(g); return make_osw_ls1(g.phi, duration, n);
        case ProtocolId::OSW_LS2: require_quarter_turn(g); return make_osw_ls2(g.phi, duration, n);
    }
    throw std::invalid_argument("make_protocol: unknown protocol id");
}

double check_antisymmetry(const SampledControls& controls) {
    const std::size_t n = controls.n_segments();
    double peak = 0.0;
    double worst = 0.0;
    for (const auto* beam : {&controls.omega1, &controls.omega2}) {
        for (std::size_t j = 0; j < n; ++j) {
            peak = std::max(peak, std::abs((*beam)[j]));
            worst = std::max(worst, std::abs((*beam)[j] + (*beam)[n - 1 - j]));
        }
    }
    return peak == 0.0 ? 0.0 : worst / peak;
}

}  // namespace osw
