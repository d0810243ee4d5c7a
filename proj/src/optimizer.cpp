#include "osw/optimizer.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "osw/parallel.hpp"
#include "osw/protocols.hpp"
#include "osw/robustness.hpp"

namespace osw {
namespace {

constexpr double kPi = std::numbers::pi;

struct Problem {
    const OptimizerConfig* config;
    GateTarget target;
    double duration;
    PulseBasisParams base;
    std::size_t evaluations = 0;

    PulseBasisParams unpack(const gsl_vector* x) const {
        PulseBasisParams p = base;
        std::size_t k = 0;
        for (int h : config->drive_harmonics) p.drive_coeffs[static_cast<std::size_t>(h - 1)] = gsl_vector_get(x, k++);
        for (int h : config->shift_harmonics) p.shift_coeffs[static_cast<std::size_t>(h - 1)] = gsl_vector_get(x, k++);
        return p;
    }
};

double objective(const gsl_vector* x, void* data) {
    auto* problem = static_cast<Problem*>(data);
    ++problem->evaluations;
    const double c = cost(problem->unpack(x), problem->target, problem->duration, problem->config->n_segments);
    return std::isfinite(c) ? c : 1e300;
}

using VectorPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;

// One simplex descent from `start`; returns the final point.
std::vector<double> descend(Problem& problem, const std::vector<double>& start) {
    const std::size_t dim = start.size();
    VectorPtr x(gsl_vector_alloc(dim), &gsl_vector_free);
    VectorPtr step(gsl_vector_alloc(dim), &gsl_vector_free);
    for (std::size_t i = 0; i < dim; ++i) {
        gsl_vector_set(x.get(), i, start[i]);
        gsl_vector_set(step.get(), i, std::max(0.1, 0.1 * std::abs(start[i])));
    }
    gsl_multimin_function fn{&objective, dim, &problem};
    MinimizerPtr solver(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim),
                        &gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get());

    for (std::size_t it = 0; it < problem.config->max_iterations; ++it) {
        if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), problem.config->simplex_tolerance) ==
            GSL_SUCCESS) {
            break;
        }
    }
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = gsl_vector_get(solver->x, i);
    return out;
}

}  // namespace

SampledControls realize_controls(const PulseBasisParams& params, double duration, std::size_t n) {
    if (!(duration > 0.0)) throw std::invalid_argument("realize_controls: duration must be positive");
    if (n < 2) throw std::invalid_argument("realize_controls: need at least 2 segments");
    auto c = SampledControls::uniform(duration, n);
    const Complex phase = std::polar(1.0, params.drive_phase + kLightShiftDrivePhaseOffset);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = c.midpoint(j) / duration;
        double drive = 0.0;
        for (std::size_t k = 0; k < params.drive_coeffs.size(); ++k) {
            drive += params.drive_coeffs[k] * std::sin(2.0 * kPi * static_cast<double>(k + 1) * x);
        }
        double shift = 0.0;
        for (std::size_t k = 0; k < params.shift_coeffs.size(); ++k) {
            shift += params.shift_coeffs[k] * std::sin(kPi * static_cast<double>(k + 1) * x);
        }
        c.omega1[j] = drive / duration * phase;
        c.omega2[j] = c.omega1[j];
        c.light_shift[j] = shift * shift / duration;
    }
    return c;
}

CostBreakdown evaluate_cost(const PulseBasisParams& params, const GateTarget& target, double duration, std::size_t n) {
    const SampledControls controls = realize_controls(params, duration, n);
    CostBreakdown b;
    b.infidelity = infidelity(propagate(controls, DriveContext{}), target_unitary(target));
    b.m1_norm = magnus_diagnostics(controls).m1_norm;
    b.cost = b.infidelity + b.m1_norm / duration;
    return b;
}

OptimizerConfig OptimizerConfig::dense(int n_drive, int n_shift) {
    OptimizerConfig c;
    c.drive_harmonics.clear();
    c.shift_harmonics.clear();
    for (int h = 1; h <= n_drive; ++h) c.drive_harmonics.push_back(h);
    for (int h = 1; h <= n_shift; ++h) c.shift_harmonics.push_back(h);
    return c;
}

void OptimizerConfig::validate() const {
    auto positive_harmonics = [](const std::vector<int>& hs) {
        return std::all_of(hs.begin(), hs.end(), [](int h) { return h >= 1; });
    };
    if (drive_harmonics.empty() && shift_harmonics.empty()) throw std::invalid_argument("OptimizerConfig: no free parameters");
    if (!positive_harmonics(drive_harmonics) || !positive_harmonics(shift_harmonics)) {
        throw std::invalid_argument("OptimizerConfig: harmonics must be >= 1");
    }
    if (max_iterations < 1 || restarts < 1) throw std::invalid_argument("OptimizerConfig: counts must be positive");
    if (!(cost_tolerance > 0.0)) throw std::invalid_argument("OptimizerConfig: cost_tolerance must be positive");
    if (n_segments < 2) throw std::invalid_argument("OptimizerConfig: n_segments must be >= 2");
}

OptimizedPulse optimize(const OptimizerConfig& config, const GateTarget& target, double duration) {
    config.validate();
    const int max_drive = config.drive_harmonics.empty()
                              ? 0
                              : *std::max_element(config.drive_harmonics.begin(), config.drive_harmonics.end());
    const int max_shift = config.shift_harmonics.empty()
                              ? 0
                              : *std::max_element(config.shift_harmonics.begin(), config.shift_harmonics.end());
    Problem problem{&config, target, duration, {}};
    problem.base.drive_coeffs.assign(static_cast<std::size_t>(max_drive), 0.0);
    problem.base.shift_coeffs.assign(static_cast<std::size_t>(max_shift), 0.0);
    problem.base.drive_phase = target.phi;

    const std::size_t dim = config.drive_harmonics.size() + config.shift_harmonics.size();
    VectorPtr probe(gsl_vector_alloc(dim), &gsl_vector_free);

    OptimizedPulse best;
    best.final_cost = INFINITY;
    for (std::size_t r = 0; r < config.restarts; ++r) {
        auto rng = substream(config.seed, r);
        std::uniform_real_distribution<double> drive_init(0.0, config.drive_init_max);
        std::uniform_real_distribution<double> shift_init(-config.shift_init_max, config.shift_init_max);
        std::vector<double> point;
        for (std::size_t k = 0; k < config.drive_harmonics.size(); ++k) point.push_back(drive_init(rng));
        for (std::size_t k = 0; k < config.shift_harmonics.size(); ++k) point.push_back(shift_init(rng));

        problem.evaluations = 0;
        for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(probe.get(), i, point[i]);
        if (objective(probe.get(), &problem) >= config.cost_tolerance) {
            point = descend(problem, point);
            // A second descent from the first minimum re-expands the simplex
            // around a possibly kinked optimum.
            point = descend(problem, point);
        }
        for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(probe.get(), i, point[i]);
        const PulseBasisParams params = problem.unpack(probe.get());
        const CostBreakdown b = evaluate_cost(params, target, duration, config.n_segments);

        best.restarts.push_back({.cost = b.cost,
                                 .infidelity = b.infidelity,
                                 .m1_norm = b.m1_norm,
                                 .evaluations = problem.evaluations,
                                 .converged = b.cost < config.cost_tolerance});
        if (b.cost < best.final_cost) {
            best.params = params;
            best.final_cost = b.cost;
            best.fidelity = 1.0 - b.infidelity;
            best.m1_norm = b.m1_norm;
        }
    }
    best.converged = best.final_cost < config.cost_tolerance;
    return best;
}

}  // namespace osw
