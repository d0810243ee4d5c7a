#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "osw/protocols.hpp"
#include "osw/robustness.hpp"

using namespace osw;
using std::numbers::pi;

namespace {

SampledControls zero_controls(double T, std::size_t n) {
    auto c = SampledControls::uniform(T, n);
    c.omega1.assign(n, Complex{});
    c.omega2.assign(n, Complex{});
    c.light_shift.assign(n, 0.0);
    return c;
}

}  // namespace

TEST_CASE("error-order fit recovers a synthetic power law") {
    SweepResult s;
    for (int i = -50; i <= 50; ++i) {
        const double kx = 0.02 * i;
        s.parameter_values.push_back(kx);
        s.mean_infidelity.push_back(3.0 * std::pow(std::abs(kx), 4.0));
    }
    CHECK(fit_error_order(s, 0.05, 0.2) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK_THROWS_AS(fit_error_order(s, 0.0, 0.03), std::invalid_argument);
    s.mean_infidelity[55] = 0.0;  // kx = 0.1
    CHECK_THROWS_AS(fit_error_order(s, 0.05, 0.2), std::domain_error);
}

TEST_CASE("phase sweep is symmetric and minimal at the antinode") {
    const GateTarget g{pi / 2, 0.0};
    const std::vector<double> kx{-0.3, 0.0, 0.3};
    const auto s = sweep_local_phase(make_osw(g, 1.0, 400), target_unitary(g), kx);
    CHECK(s.mean_infidelity[0] == doctest::Approx(s.mean_infidelity[2]).epsilon(1e-9));
    CHECK(s.mean_infidelity[1] < 1e-10);
    CHECK(s.mean_infidelity[0] > 1e-4);
}

TEST_CASE("frequency noise on an idle qubit matches the Gaussian average") {
    // U = exp(-i sigma z sz), infidelity sin^2(sigma z), mean (1 - exp(-2 sigma^2)) / 2.
    const auto c = zero_controls(2.0, 10);
    const std::vector<double> sigmas{0.0, 0.1, 0.5};
    NoiseAveraging gh;
    gh.mode = AveragingMode::gauss_hermite;
    const auto r = sweep_static_noise(c, Mat2::identity(), NoiseKind::qubit_frequency, sigmas, QubitRole::non_target, gh);
    NoiseAveraging mc;
    mc.n_samples = 20000;
    const auto m = sweep_static_noise(c, Mat2::identity(), NoiseKind::qubit_frequency, sigmas, QubitRole::non_target, mc);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double expected = 0.5 * (1.0 - std::exp(-2.0 * sigmas[i] * sigmas[i]));
        CHECK(r.mean_infidelity[i] == doctest::Approx(expected).epsilon(1e-9));
        CHECK(std::abs(m.mean_infidelity[i] - expected) <= 5.0 * m.std_infidelity[i] / std::sqrt(20000.0) + 1e-15);
    }
    CHECK(r.median_infidelity.empty());
    CHECK(m.median_infidelity.size() == sigmas.size());
}

TEST_CASE("light-shift gate is first-order insensitive to frequency noise") {
    const GateTarget g{pi / 2, 0.0};
    NoiseAveraging gh;
    gh.mode = AveragingMode::gauss_hermite;
    const std::vector<double> sigmas{0.01, 0.02};
    const auto ls2 = sweep_static_noise(make_osw_ls2(0.0, 1.0, 400), target_unitary(g), NoiseKind::qubit_frequency,
                                        sigmas, QubitRole::target, gh);
    // Quadratic-in-sigma cancellation leaves quartic growth.
    CHECK(ls2.mean_infidelity[1] / ls2.mean_infidelity[0] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("imbalance leaves OSW unchanged at kx = 0 only to second order") {
    const GateTarget g{pi / 2, 0.0};
    const std::vector<double> kx{0.0};
    const auto c = make_osw(g, 1.0, 400);
    const auto s = sweep_intensity_imbalance(c, target_unitary(g), 0.2, kx);
    CHECK(s.mean_infidelity[0] < 1e-5);
    CHECK_THROWS_AS(sweep_intensity_imbalance(c, target_unitary(g), 1.0, kx), std::invalid_argument);
}

TEST_CASE("Magnus terms of an idle qubit") {
    const double T = 1.7;
    const auto d = magnus_diagnostics(zero_controls(T, 20));
    CHECK(max_abs_diff(d.m1, (Complex(T) * Mat2::pauli_z())) < 1e-14);
    CHECK(d.m1_norm == doctest::Approx(2.0 * T));
    CHECK(d.m2_norm == doctest::Approx(0.0));
    CHECK(d.curve.size() == 21);
    CHECK(d.curve.back()[2] == doctest::Approx(2.0 * T));
}

TEST_CASE("curve picture agrees with the Magnus terms") {
    const auto c = make_osw_ls1(0.0, 1.0, 400);
    const auto d = magnus_diagnostics(c);
    const auto& end = d.curve.back();
    CHECK(std::hypot(end[0], end[1], end[2]) == doctest::Approx(d.m1_norm).epsilon(1e-10));
    CHECK(d.bloch_closure == doctest::Approx(d.m1_norm).epsilon(1e-12));
}

TEST_CASE("second-order term equals the enclosed area vector") {
    auto c = SampledControls::uniform(1.0, 300);
    for (std::size_t j = 0; j < 300; ++j) {
        const double t = c.midpoint(j);
        c.omega1[j] = std::polar(4.0 * std::sin(pi * t), 3.0 * t);
        c.omega2[j] = std::polar(2.0, -t);
    }
    const auto d = magnus_diagnostics(c);
    const double area = std::hypot(d.projected_areas[0], d.projected_areas[1], d.projected_areas[2]);
    CHECK(area > 1e-3);
    CHECK(d.m2_norm == doctest::Approx(area).epsilon(1e-9));
}

TEST_CASE("pauli_norm of Pauli matrices") {
    CHECK(pauli_norm(Mat2::pauli_x()) == doctest::Approx(2.0));
    CHECK(pauli_norm(Mat2::identity()) == doctest::Approx(0.0));
}
