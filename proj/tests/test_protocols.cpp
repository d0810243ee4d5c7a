#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "osw/protocols.hpp"

using namespace osw;
using std::numbers::pi;

namespace {

double area(const SampledControls& c, bool beam1) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.n_segments(); ++j) s += std::abs(beam1 ? c.omega1[j] : c.omega2[j]) * c.dt(j);
    return s;
}

}  // namespace

TEST_CASE("protocol names round-trip") {
    for (auto id : {ProtocolId::OTW1, ProtocolId::OSW1, ProtocolId::OSW_BB1, ProtocolId::OSW_LS1, ProtocolId::OSW_LS2}) {
        CHECK(protocol_from_string(to_string(id)) == id);
    }
    CHECK_FALSE(protocol_from_string("OSW9").has_value());
    CHECK_FALSE(is_standing_wave(ProtocolId::OTW1));
    CHECK(is_light_shift_protocol(ProtocolId::OSW_LS2));
}

TEST_CASE("BB1 phases for a quarter rotation") {
    const auto b = bb1_phases(pi / 2);
    CHECK(b.p == doctest::Approx(4.5));
    CHECK(b.phi_a == doctest::Approx(1.69612).epsilon(1e-5));
    CHECK(b.phi_b == doctest::Approx(5.08837).epsilon(1e-5));
}

TEST_CASE("pulse areas equal the rotation angle") {
    const GateTarget g{pi / 2, 0.4};
    const double T = 3.0;
    CHECK(area(make_otw(g, T, 2000), true) == doctest::Approx(pi / 2).epsilon(1e-5));
    CHECK(area(make_otw(g, T, 2000), false) == 0.0);
    // Each standing-wave beam carries half the area.
    CHECK(area(make_osw(g, T, 2000), true) == doctest::Approx(pi / 4).epsilon(1e-5));
    CHECK(area(make_osw(g, T, 2000), false) == doctest::Approx(pi / 4).epsilon(1e-5));
    // BB1: theta + 4 pi total, split over the two beams.
    CHECK(area(make_osw_bb1(g, T, 900), true) == doctest::Approx((pi / 2 + 4 * pi) / 2).epsilon(1e-12));
}

TEST_CASE("ideal gates at an antinode") {
    const GateTarget g{pi / 2, 0.4};
    for (auto id : {ProtocolId::OTW1, ProtocolId::OSW1, ProtocolId::OSW_BB1, ProtocolId::OSW_LS1, ProtocolId::OSW_LS2}) {
        CAPTURE(to_string(id));
        const auto c = make_protocol(id, g, 1.0, 400);
        CHECK(infidelity(propagate(c, {}), target_unitary(g)) < 1e-5);
    }
}

TEST_CASE("BB1 piece boundaries are segment edges") {
    const auto b = bb1_phases(pi / 2);
    const double T = 2.0;
    const auto c = make_osw_bb1({pi / 2, 0.0}, T, 450);
    for (double k : {1.0, 3.0, 4.0}) {
        const double t = k * T / b.p;
        bool found = false;
        for (double e : c.edges) found = found || std::abs(e - t) < 1e-14;
        CHECK(found);
    }
}

TEST_CASE("light-shift protocols are antisymmetric, others are not") {
    CHECK(check_antisymmetry(make_osw_ls1(0.0, 1.0, 400)) < 1e-12);
    CHECK(check_antisymmetry(make_osw_ls2(0.7, 1.0, 400)) < 1e-12);
    CHECK(check_antisymmetry(make_osw({pi / 2, 0.0}, 1.0, 400)) > 0.1);
}

TEST_CASE("light-shift protocols refuse other rotation angles") {
    CHECK_THROWS_AS(make_protocol(ProtocolId::OSW_LS1, {pi, 0.0}, 1.0, 400), std::invalid_argument);
}

TEST_CASE("light shift is non-negative and vanishes at the ends") {
    const auto c = make_osw_ls2(0.0, 1.0, 400);
    for (double v : c.light_shift) CHECK(v >= 0.0);
    CHECK(c.light_shift.front() < 1e-3);
    CHECK(c.light_shift.back() < 1e-3);
}
