#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "osw/motion.hpp"
#include "osw/parallel.hpp"

using namespace osw;
using std::numbers::pi;

TEST_CASE("Yb171 preset thermal widths") {
    const auto trap = yb171_preset();
    // sqrt(kB T / (m w^2)) with m = 171 u, w = 2 pi 100 kHz, T = 5 uK
    const double m = 171 * constants::kAtomicMassUnit;
    const double w = 2 * pi * 1e5;
    const double sx = std::sqrt(constants::kBoltzmann * 5e-6 / (m * w * w));
    CHECK(trap.position_sigma() == doctest::Approx(sx));
    CHECK(trap.position_sigma() == doctest::Approx(24.8e-9).epsilon(0.01));
    CHECK(trap.wavevector * trap.position_sigma() == doctest::Approx(0.27).epsilon(0.01));
    CHECK(trap.velocity_sigma() == doctest::Approx(w * sx));
    CHECK(trap.period() == doctest::Approx(1e-5));
}

TEST_CASE("trajectory phase follows the harmonic orbit") {
    auto trap = yb171_preset();
    const InitialCondition ic{10e-9, 0.01};
    const std::vector<double> t{0.0, 0.25 * trap.period(), 0.5 * trap.period()};
    const auto ph = trajectory_phase(trap, ic, t);
    CHECK(ph[0] == doctest::Approx(trap.wavevector * 10e-9));
    CHECK(ph[1] == doctest::Approx(trap.wavevector * 0.01 / trap.omega_trap));
    CHECK(ph[2] == doctest::Approx(-trap.wavevector * 10e-9));
}

TEST_CASE("ensemble statistics of a small sample") {
    const std::vector<double> v{0.0, 0.0, 0.0, 1.0};
    const auto s = ensemble_stats(v);
    CHECK(s.mean == doctest::Approx(0.25));
    CHECK(s.median == doctest::Approx(0.0));
    CHECK(s.std == doctest::Approx(0.4330127).epsilon(1e-6));
    CHECK(s.std_error() == doctest::Approx(0.4330127 / 2).epsilon(1e-6));
    CHECK_THROWS(ensemble_stats(std::vector<double>{}));
}

TEST_CASE("zero temperature gives the static antinode result") {
    auto trap = yb171_preset();
    trap.temperature = 0.0;
    MotionOptions opts;
    opts.n_trajectories = 5;
    const auto s = run_motional_ensemble(ProtocolId::OSW1, {pi / 2, 0.0}, 5e-6, trap, opts);
    CHECK(s.mean < 1e-10);
}

TEST_CASE("negative temperature is rejected") {
    auto trap = yb171_preset();
    trap.temperature = -1e-6;
    CHECK_THROWS_AS(trap.validate(), std::invalid_argument);
}

TEST_CASE("standing-wave gates are even in the initial condition") {
    // (x0, v0) -> (-x0, -v0) flips kx(t), which leaves a balanced OSW drive unchanged up to phase.
    const auto trap = yb171_preset();
    auto rng = substream(3, 0);
    const auto ic = sample_thermal(trap, rng);
    const InitialCondition flipped{-ic.x0, -ic.v0};
    const std::vector<double> t{1e-6, 2e-6};
    const auto a = trajectory_phase(trap, ic, t);
    const auto b = trajectory_phase(trap, flipped, t);
    CHECK(a[0] == doctest::Approx(-b[0]));
    CHECK(a[1] == doctest::Approx(-b[1]));
}

TEST_CASE("thread count does not change the ensemble") {
    const auto trap = yb171_preset();
    MotionOptions opts;
    opts.n_trajectories = 64;
    opts.seed = 11;
    const auto one = motional_infidelities(ProtocolId::OTW1, {pi / 2, 0.0}, 3e-6, trap, opts);
    opts.threads = 4;
    const auto four = motional_infidelities(ProtocolId::OTW1, {pi / 2, 0.0}, 3e-6, trap, opts);
    CHECK(one == four);
}

TEST_CASE("peak-power gate times") {
    // OTW: peak theta pi / (2T) = Omega_max  ->  T = pi^2 / (4 Omega_max) for theta = pi/2.
    const double om = 2 * pi * 1e5;
    CHECK(gate_time_for_peak(ProtocolId::OTW1, {pi / 2, 0.0}, om, 1.0) ==
          doctest::Approx(pi * pi / (4 * om)).epsilon(1e-5));
    // OSW per-beam budget Omega_max / sqrt(2) with peak theta pi / (4T).
    CHECK(gate_time_for_peak(ProtocolId::OSW1, {pi / 2, 0.0}, om, 1.0) ==
          doctest::Approx(std::sqrt(2.0) * pi * pi / (8 * om)).epsilon(1e-5));
}
