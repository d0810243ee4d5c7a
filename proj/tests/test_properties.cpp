// Standalone property suite; each case is also exercised by the acceptance binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "osw/motion.hpp"
#include "osw/parallel.hpp"
#include "osw/protocols.hpp"
#include "osw/robustness.hpp"

using namespace osw;
using std::numbers::pi;

namespace {

SampledControls random_controls(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    auto c = SampledControls::uniform(1.0, n);
    for (std::size_t j = 0; j < n; ++j) {
        c.omega1[j] = {u(rng), u(rng)};
        c.omega2[j] = {u(rng), u(rng)};
        c.light_shift[j] = std::abs(u(rng));
    }
    return c;
}

}  // namespace

TEST_CASE("propagators are unitary") {
    auto rng = substream(5, 0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = random_controls(rng, 64);
        DriveContext ctx;
        ctx.phase_kx = u(rng);
        ctx.rabi_scale_1 = 1.0 + 0.1 * u(rng);
        ctx.detuning_gamma = u(rng);
        CHECK(unitarity_error(propagate(c, ctx)) < 1e-12);
    }
}

TEST_CASE("fidelity ignores global phase") {
    auto rng = substream(6, 0);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int trial = 0; trial < 50; ++trial) {
        const auto U = propagate(random_controls(rng, 8), {});
        const auto V = target_unitary({std::abs(u(rng)), u(rng)});
        const Complex phase = std::polar(1.0, u(rng));
        CHECK(fidelity(phase * U, V) == doctest::Approx(fidelity(U, V)).epsilon(1e-12));
        CHECK(fidelity(U, phase * U) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("antisymmetric drives leave idle qubits untouched") {
    auto rng = substream(7, 0);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (auto id : {ProtocolId::OSW_LS1, ProtocolId::OSW_LS2}) {
        const auto c = make_protocol(id, {pi / 2, u(rng)}, 1.3, 400);
        for (int trial = 0; trial < 20; ++trial) {
            DriveContext ctx;
            ctx.is_target = false;
            ctx.phase_kx = u(rng);
            ctx.rabi_scale_1 = 1.0 + 0.3 * u(rng);
            ctx.rabi_scale_2 = 1.0 + 0.3 * u(rng);
            CHECK(infidelity(propagate(c, ctx), Mat2::identity()) < 1e-10);
        }
    }
    // Generic antisymmetric drive built by hand.
    auto c = SampledControls::uniform(1.0, 200);
    for (std::size_t j = 0; j < 100; ++j) {
        c.omega1[j] = {u(rng), u(rng)};
        c.omega2[j] = {u(rng), u(rng)};
        c.omega1[199 - j] = -c.omega1[j];
        c.omega2[199 - j] = -c.omega2[j];
    }
    CHECK(check_antisymmetry(c) < 1e-15);
    DriveContext ctx;
    ctx.is_target = false;
    ctx.phase_kx = 0.4;
    CHECK(infidelity(propagate(c, ctx), Mat2::identity()) < 1e-10);
}

TEST_CASE("thermal sampler moments") {
    const auto trap = yb171_preset();
    constexpr std::size_t n = 200000;
    auto rng = substream(9, 0);
    double sx = 0, sxx = 0, sv = 0, svv = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ic = sample_thermal(trap, rng);
        sx += ic.x0;
        sxx += ic.x0 * ic.x0;
        sv += ic.v0;
        svv += ic.v0 * ic.v0;
    }
    const double ps = trap.position_sigma(), vs = trap.velocity_sigma();
    CHECK(std::abs(sx / n) < 5 * ps / std::sqrt(double(n)));
    CHECK(std::abs(sv / n) < 5 * vs / std::sqrt(double(n)));
    CHECK(std::sqrt(sxx / n) == doctest::Approx(ps).epsilon(0.01));
    CHECK(std::sqrt(svv / n) == doctest::Approx(vs).epsilon(0.01));
}

TEST_CASE("fixed seeds are deterministic") {
    const auto trap = yb171_preset();
    MotionOptions opts;
    opts.n_trajectories = 50;
    opts.seed = 123;
    const auto a = run_motional_ensemble(ProtocolId::OSW1, {pi / 2, 0.0}, 3e-6, trap, opts);
    const auto b = run_motional_ensemble(ProtocolId::OSW1, {pi / 2, 0.0}, 3e-6, trap, opts);
    CHECK(a.mean == b.mean);
    CHECK(a.median == b.median);
    opts.seed = 124;
    const auto c = run_motional_ensemble(ProtocolId::OSW1, {pi / 2, 0.0}, 3e-6, trap, opts);
    CHECK(a.mean != c.mean);
}

TEST_CASE("segment count convergence 400 -> 800") {
    const GateTarget g{pi / 2, 0.0};
    for (auto id : {ProtocolId::OTW1, ProtocolId::OSW1, ProtocolId::OSW_BB1}) {
        CAPTURE(to_string(id));
        DriveContext ctx;
        ctx.phase_kx = 0.5;
        const double a = infidelity(propagate(make_protocol(id, g, 1.0, 400), ctx), target_unitary(g));
        const double b = infidelity(propagate(make_protocol(id, g, 1.0, 800), ctx), target_unitary(g));
        CHECK(std::abs(a - b) < 0.01 * b);
    }
    const auto trap = yb171_preset();
    MotionOptions opts;
    opts.n_trajectories = 100;
    const double a = run_motional_ensemble(ProtocolId::OTW1, g, 3e-6, trap, opts).mean;
    opts.n_segments = 800;
    const double b = run_motional_ensemble(ProtocolId::OTW1, g, 3e-6, trap, opts).mean;
    CHECK(std::abs(a - b) < 0.01 * b);
}
