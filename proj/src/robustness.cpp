#include "osw/robustness.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "osw/motion.hpp"
#include "osw/parallel.hpp"

namespace osw {
namespace {

struct Quadrature {
    std::vector<double> nodes;    // standard-normal abscissae
    std::vector<double> weights;  // sum to one
};

// Gauss-Hermite rule for expectations over N(0, 1).
Quadrature gauss_hermite(std::size_t n) {
    using Workspace = std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)>;
    Workspace ws(gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0, 0.0),
                 &gsl_integration_fixed_free);
    if (!ws) throw std::runtime_error("gauss_hermite: GSL allocation failed");
    const double* x = gsl_integration_fixed_nodes(ws.get());
    const double* w = gsl_integration_fixed_weights(ws.get());
    Quadrature q;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += w[i];
    for (std::size_t i = 0; i < n; ++i) {
        q.nodes.push_back(std::numbers::sqrt2 * x[i]);
        q.weights.push_back(w[i] / total);
    }
    return q;
}

double evaluate_noise_point(const SampledControls& controls, const Unitary2& reference, NoiseKind kind, QubitRole role,
                            double z1, double z2, double sigma) {
    DriveContext ctx;
    ctx.is_target = role == QubitRole::target;
    if (kind == NoiseKind::rabi_per_beam) {
        ctx.rabi_scale_1 = 1.0 + sigma * z1;
        ctx.rabi_scale_2 = 1.0 + sigma * z2;
    } else {
        ctx.detuning_gamma = sigma * z1 / controls.duration;
    }
    return infidelity(propagate(controls, ctx), reference);
}

}  // namespace

std::string_view to_string(QubitRole role) { return role == QubitRole::target ? "target" : "non_target"; }

std::string_view to_string(NoiseKind kind) {
    return kind == NoiseKind::rabi_per_beam ? "rabi_per_beam" : "qubit_frequency";
}

std::string_view to_string(AveragingMode mode) {
    return mode == AveragingMode::monte_carlo ? "monte_carlo" : "gauss_hermite";
}

SweepResult sweep_local_phase(const SampledControls& controls, const Unitary2& target,
                              std::span<const double> kx_values) {
    SweepResult out;
    out.parameter_name = "kx_rad";
    out.parameter_values.assign(kx_values.begin(), kx_values.end());
    out.mean_infidelity.reserve(kx_values.size());
    for (double kx : kx_values) {
        DriveContext ctx;
        ctx.phase_kx = kx;
        out.mean_infidelity.push_back(infidelity(propagate(controls, ctx), target));
    }
    return out;
}

double fit_error_order(const SweepResult& sweep, double kx_min, double kx_max) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < sweep.parameter_values.size(); ++i) {
        const double a = std::abs(sweep.parameter_values[i]);
        if (a < kx_min || a > kx_max || a == 0.0) continue;
        const double eps = sweep.mean_infidelity[i];
        if (!(eps > 1e-14)) {
            throw std::domain_error("fit_error_order: infidelity at |kx| = " + std::to_string(a) +
                                    " is below the numerical floor");
        }
        lx.push_back(std::log(a));
        ly.push_back(std::log(eps));
    }
    if (lx.size() < 4) throw std::invalid_argument("fit_error_order: fewer than 4 points in window");

    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_error_order: window contains a single |kx| value");
    return sxy / sxx;
}

SweepResult sweep_static_noise(const SampledControls& controls, const Unitary2& target, NoiseKind kind,
                               std::span<const double> sigmas, QubitRole role, const NoiseAveraging& averaging) {
    controls.validate();
    const Unitary2 reference = role == QubitRole::target ? target : Mat2::identity();
    const bool two_dims = kind == NoiseKind::rabi_per_beam;

    // Standard-normal sample points and weights, shared by all sigmas.
    std::vector<double> z1, z2, weight;
    if (averaging.mode == AveragingMode::gauss_hermite) {
        const auto q = gauss_hermite(averaging.gh_nodes);
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            if (two_dims) {
                for (std::size_t k = 0; k < q.nodes.size(); ++k) {
                    z1.push_back(q.nodes[i]);
                    z2.push_back(q.nodes[k]);
                    weight.push_back(q.weights[i] * q.weights[k]);
                }
            } else {
                z1.push_back(q.nodes[i]);
                z2.push_back(0.0);
                weight.push_back(q.weights[i]);
            }
        }
    } else {
        if (averaging.n_samples < 1) throw std::invalid_argument("sweep_static_noise: n_samples must be >= 1");
        const double w = 1.0 / static_cast<double>(averaging.n_samples);
        for (std::size_t i = 0; i < averaging.n_samples; ++i) {
            auto rng = substream(averaging.seed, i);
            z1.push_back(standard_normal(rng));
            z2.push_back(standard_normal(rng));
            weight.push_back(w);
        }
    }

    SweepResult out;
    out.parameter_name = "sigma";
    out.parameter_values.assign(sigmas.begin(), sigmas.end());
    out.qubit_role = role;
    std::vector<double> values(z1.size());
    for (double sigma : sigmas) {
        parallel_for(values.size(), averaging.threads, [&](std::size_t i) {
            values[i] = evaluate_noise_point(controls, reference, kind, role, z1[i], z2[i], sigma);
        });
        double mean = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) mean += weight[i] * values[i];
        double var = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) var += weight[i] * (values[i] - mean) * (values[i] - mean);
        out.mean_infidelity.push_back(mean);
        out.std_infidelity.push_back(std::sqrt(var));
        if (averaging.mode == AveragingMode::monte_carlo) out.median_infidelity.push_back(ensemble_stats(values).median);
    }
    return out;
}

SweepResult sweep_intensity_imbalance(const SampledControls& controls, const Unitary2& target, double imbalance,
                                      std::span<const double> kx_values) {
    if (!(imbalance >= 0.0 && imbalance < 1.0)) throw std::invalid_argument("sweep_intensity_imbalance: d must be in [0, 1)");
    SweepResult out;
    out.parameter_name = "kx_rad";
    out.parameter_values.assign(kx_values.begin(), kx_values.end());
    for (double kx : kx_values) {
        DriveContext ctx;
        ctx.phase_kx = kx;
        ctx.rabi_scale_1 = std::sqrt(1.0 + 0.5 * imbalance);
        ctx.rabi_scale_2 = std::sqrt(1.0 - 0.5 * imbalance);
        out.mean_infidelity.push_back(infidelity(propagate(controls, ctx), target));
    }
    return out;
}

double pauli_norm(const Mat2& m) {
    const Complex tx = (m * Mat2::pauli_x()).trace();
    const Complex ty = (m * Mat2::pauli_y()).trace();
    const Complex tz = (m * Mat2::pauli_z()).trace();
    return std::sqrt(std::norm(tx) + std::norm(ty) + std::norm(tz));
}

MagnusDiagnostics magnus_diagnostics(const SampledControls& controls) {
    DriveContext ctx;
    ctx.is_target = false;
    const auto trace = propagate_with_midpoints(controls, ctx);
    const Mat2 sz = Mat2::pauli_z();

    MagnusDiagnostics d;
    Mat2 running{};  // sum_{l<j} M_l dt_l
    Mat2 second{};
    std::array<double, 3> r{0.0, 0.0, 0.0};
    d.curve.reserve(controls.n_segments() + 1);
    d.curve.push_back(r);
    for (std::size_t j = 0; j < controls.n_segments(); ++j) {
        const Mat2& u = trace.at_midpoints[j];
        const Mat2 m = u.adjoint() * sz * u;
        const double dt = controls.dt(j);
        second = second + Complex{0.5 * dt} * (m * running - running * m);
        running = running + Complex{dt} * m;
        r[0] += (m * Mat2::pauli_x()).trace().real() * dt;
        r[1] += (m * Mat2::pauli_y()).trace().real() * dt;
        r[2] += (m * Mat2::pauli_z()).trace().real() * dt;
        d.curve.push_back(r);
    }
    d.m1 = running;
    d.m1_norm = pauli_norm(running);
    d.m2_norm = pauli_norm(second);
    d.bloch_closure = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);

    // Signed shoelace areas; the closing edge back to the origin contributes nothing.
    auto area = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < d.curve.size(); ++j) {
            s += d.curve[j][a] * d.curve[j + 1][b] - d.curve[j + 1][a] * d.curve[j][b];
        }
        return 0.5 * s;
    };
    d.projected_areas = {area(0, 1), area(0, 2), area(1, 2)};
    return d;
}

}  // namespace osw
