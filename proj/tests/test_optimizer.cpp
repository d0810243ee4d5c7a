#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "osw/optimizer.hpp"
#include "osw/protocols.hpp"
#include "osw/robustness.hpp"

using namespace osw;
using std::numbers::pi;

TEST_CASE("cost of an empty pulse") {
    // F = 1/2 for identity vs a quarter rotation, m1_norm = 2T.
    const PulseBasisParams p{{0.0}, {0.0, 0.0}, 0.0};
    const auto c = evaluate_cost(p, {pi / 2, 0.0}, 1.0, 100);
    CHECK(c.infidelity == doctest::Approx(0.5));
    CHECK(c.m1_norm == doctest::Approx(2.0));
    CHECK(c.cost == doctest::Approx(2.5));
}

TEST_CASE("basis realizes the tabulated second-order gate") {
    const PulseBasisParams p{{ls_coeffs::kLs2Drive}, {0.0, ls_coeffs::kLs2ShiftH2, 0.0, ls_coeffs::kLs2ShiftH4}, 0.3};
    const auto a = realize_controls(p, 1.0, 400);
    const auto b = make_osw_ls2(0.3, 1.0, 400);
    for (std::size_t j = 0; j < 400; ++j) {
        CHECK(std::abs(a.omega1[j] - b.omega1[j]) < 1e-12);
        CHECK(std::abs(a.omega2[j] - b.omega2[j]) < 1e-12);
        CHECK(a.light_shift[j] == doctest::Approx(b.light_shift[j]).epsilon(1e-12).scale(1e-12));
    }
    CHECK(cost(p, {pi / 2, 0.3}, 1.0, 400) < 1e-4);
}

TEST_CASE("config validation") {
    OptimizerConfig c;
    c.drive_harmonics.clear();
    c.shift_harmonics.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = OptimizerConfig::dense(2, 3);
    CHECK(c.drive_harmonics == std::vector<int>{1, 2});
    CHECK(c.shift_harmonics == std::vector<int>{1, 2, 3});
    c.drive_harmonics = {0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("seeded search converges and is reproducible") {
    OptimizerConfig c;
    c.restarts = 4;
    c.n_segments = 200;
    const auto a = optimize(c, {pi / 2, 0.0}, 1.0);
    const auto b = optimize(c, {pi / 2, 0.0}, 1.0);
    CHECK(a.converged);
    CHECK(a.final_cost < 1e-4);
    CHECK(a.final_cost == b.final_cost);
    CHECK(a.params.drive_coeffs == b.params.drive_coeffs);
    CHECK(a.restarts.size() == 4);
    const auto d = magnus_diagnostics(realize_controls(a.params, 1.0, 200));
    CHECK(d.m1_norm < 1e-4);
}
