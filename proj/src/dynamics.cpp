#include "osw/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace osw {

Mat2 Mat2::adjoint() const {
    return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
             x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {{x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2], x.a[3] + y.a[3]}};
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {{x.a[0] - y.a[0], x.a[1] - y.a[1], x.a[2] - y.a[2], x.a[3] - y.a[3]}};
}

Mat2 operator*(Complex s, const Mat2& x) { return {{s * x.a[0], s * x.a[1], s * x.a[2], s * x.a[3]}}; }

double max_abs_diff(const Mat2& x, const Mat2& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

double unitarity_error(const Mat2& u) { return max_abs_diff(u.adjoint() * u, Mat2::identity()); }

SampledControls SampledControls::uniform(double duration, std::size_t n) {
    SampledControls c;
    c.duration = duration;
    c.edges.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) c.edges[j] = duration * static_cast<double>(j) / static_cast<double>(n);
    c.edges[n] = duration;
    c.omega1.assign(n, Complex{});
    c.omega2.assign(n, Complex{});
    c.light_shift.assign(n, 0.0);
    return c;
}

std::vector<double> SampledControls::midpoints() const {
    std::vector<double> t(n_segments());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = midpoint(j);
    return t;
}

void SampledControls::validate() const {
    const std::size_t n = omega1.size();
    if (omega2.size() != n || light_shift.size() != n || edges.size() != n + 1) {
        throw DimensionError("SampledControls: omega1, omega2, light_shift must have n entries and edges n+1");
    }
    if (n < 2) throw std::invalid_argument("SampledControls: need at least 2 segments");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("SampledControls: duration must be positive");
    for (std::size_t j = 0; j < n; ++j) {
        if (!(edges[j + 1] >= edges[j])) throw std::invalid_argument("SampledControls: edges must be non-decreasing");
        if (!std::isfinite(omega1[j].real()) || !std::isfinite(omega1[j].imag()) || !std::isfinite(omega2[j].real()) ||
            !std::isfinite(omega2[j].imag()) || !std::isfinite(light_shift[j])) {
            throw std::invalid_argument("SampledControls: non-finite envelope value at segment " + std::to_string(j));
        }
        if (light_shift[j] < 0.0) throw std::invalid_argument("SampledControls: light_shift must be >= 0");
    }
}

double DriveContext::phase_at(std::size_t j) const {
    if (const auto* c = std::get_if<double>(&phase_kx)) return *c;
    return std::get<std::vector<double>>(phase_kx)[j];
}

void DriveContext::validate(std::size_t n_segments) const {
    if (const auto* v = std::get_if<std::vector<double>>(&phase_kx); v && v->size() != n_segments) {
        throw DimensionError("DriveContext: phase_kx profile has " + std::to_string(v->size()) + " entries, controls have " +
                             std::to_string(n_segments));
    }
    if (!(rabi_scale_1 > 0.0) || !(rabi_scale_2 > 0.0)) {
        throw std::invalid_argument("DriveContext: rabi scales must be positive");
    }
}

HamiltonianCoeffs assemble_hamiltonian(std::size_t j, const SampledControls& controls, const DriveContext& ctx) {
    const std::size_t n = controls.n_segments();
    if (controls.omega2.size() != n || controls.light_shift.size() != n) {
        throw DimensionError("assemble_hamiltonian: control arrays differ in length");
    }
    if (j >= n) throw DimensionError("assemble_hamiltonian: sample index out of range");
    if (const auto* v = std::get_if<std::vector<double>>(&ctx.phase_kx); v && v->size() != n) {
        throw DimensionError("assemble_hamiltonian: phase_kx profile length mismatch");
    }

    const double kx = ctx.phase_at(j);
    const Complex eff = ctx.rabi_scale_1 * controls.omega1[j] * std::polar(1.0, kx) +
                        ctx.rabi_scale_2 * controls.omega2[j] * std::polar(1.0, -kx);
    const double v = ctx.is_target ? controls.light_shift[j] : 0.0;

    // (1/2) eff |1><0| + h.c. + V |1><1| + gamma sz
    return {.c0 = 0.5 * v, .cx = 0.5 * eff.real(), .cy = 0.5 * eff.imag(), .cz = ctx.detuning_gamma - 0.5 * v};
}

Unitary2 su2_step(const HamiltonianCoeffs& h, double dt) {
    const double norm = std::sqrt(h.cx * h.cx + h.cy * h.cy + h.cz * h.cz);
    const Complex global = std::polar(1.0, -h.c0 * dt);
    if (norm == 0.0) return global * Mat2::identity();

    const double c = std::cos(norm * dt);
    const double s = std::sin(norm * dt) / norm;
    const Complex i{0.0, 1.0};
    // cos I - i sin (n . sigma)
    Mat2 u{{Complex{c, -s * h.cz}, -i * s * Complex{h.cx, -h.cy}, -i * s * Complex{h.cx, h.cy}, Complex{c, s * h.cz}}};
    return global * u;
}

Unitary2 propagate(const SampledControls& controls, const DriveContext& ctx) {
    controls.validate();
    ctx.validate(controls.n_segments());
    Unitary2 u = Mat2::identity();
    for (std::size_t j = 0; j < controls.n_segments(); ++j) {
        u = su2_step(assemble_hamiltonian(j, controls, ctx), controls.dt(j)) * u;
    }
    return u;
}

PropagationTrace propagate_with_midpoints(const SampledControls& controls, const DriveContext& ctx) {
    controls.validate();
    ctx.validate(controls.n_segments());
    PropagationTrace trace{Mat2::identity(), {}};
    trace.at_midpoints.reserve(controls.n_segments());
    for (std::size_t j = 0; j < controls.n_segments(); ++j) {
        const auto h = assemble_hamiltonian(j, controls, ctx);
        trace.at_midpoints.push_back(su2_step(h, 0.5 * controls.dt(j)) * trace.final);
        trace.final = su2_step(h, controls.dt(j)) * trace.final;
    }
    return trace;
}

double fidelity(const Unitary2& u, const Unitary2& target) {
    const double f = std::norm((target.adjoint() * u).trace()) / 4.0;
    return std::clamp(f, 0.0, 1.0);
}

Unitary2 target_unitary(const GateTarget& g) {
    const double c = std::cos(0.5 * g.theta);
    const double s = std::sin(0.5 * g.theta);
    const Complex mi{0.0, -1.0};
    return {{Complex{c}, mi * s * std::polar(1.0, -g.phi), mi * s * std::polar(1.0, g.phi), Complex{c}}};
}

}  // namespace osw
