#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace osw {

using Complex = std::complex<double>;

// Thrown when control arrays, phase profiles or segment grids disagree in length.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Dense 2x2 complex matrix in the (|0>, |1>) basis, row-major.
struct Mat2 {
    std::array<Complex, 4> a{};

    static Mat2 identity() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}}}; }
    static Mat2 pauli_x() { return {{Complex{}, Complex{1.0}, Complex{1.0}, Complex{}}}; }
    static Mat2 pauli_y() { return {{Complex{}, Complex{0.0, -1.0}, Complex{0.0, 1.0}, Complex{}}}; }
    static Mat2 pauli_z() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{-1.0}}}; }

    Complex& operator()(int r, int c) { return a[static_cast<std::size_t>(2 * r + c)]; }
    const Complex& operator()(int r, int c) const { return a[static_cast<std::size_t>(2 * r + c)]; }

    Mat2 adjoint() const;
    Complex trace() const { return a[0] + a[3]; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y);
    friend Mat2 operator+(const Mat2& x, const Mat2& y);
    friend Mat2 operator-(const Mat2& x, const Mat2& y);
    friend Mat2 operator*(Complex s, const Mat2& x);
};

using Unitary2 = Mat2;

// Largest entrywise modulus of (U^dagger U - I).
double unitarity_error(const Mat2& u);

// Largest entrywise modulus of (x - y).
double max_abs_diff(const Mat2& x, const Mat2& y);

// Rotation target of the form
//   |0> -> cos(theta/2)|0> - i sin(theta/2) e^{i phi}|1>
//   |1> -> cos(theta/2)|1> - i sin(theta/2) e^{-i phi}|0>
struct GateTarget {
    double theta = 0.0;
    double phi = 0.0;
};

// H = c0 I + cx sx + cy sy + cz sz, all coefficients in angular frequency units.
struct HamiltonianCoeffs {
    double c0 = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double cz = 0.0;
};

// Piecewise-constant drive of a single gate. Segment j spans [edges[j], edges[j+1]]
// and carries the envelope values sampled at its midpoint. Amplitudes are complex
// Rabi frequencies of the two counter-propagating beams; light_shift is the
// addressing ac Stark shift applied to |1> of target qubits.
struct SampledControls {
    double duration = 1.0;
    std::vector<double> edges;
    std::vector<Complex> omega1;
    std::vector<Complex> omega2;
    std::vector<double> light_shift;

    // Uniform grid of n segments over [0, duration] with all envelopes zero.
    static SampledControls uniform(double duration, std::size_t n);

    std::size_t n_segments() const { return omega1.size(); }
    double dt(std::size_t j) const { return edges[j + 1] - edges[j]; }
    double midpoint(std::size_t j) const { return 0.5 * (edges[j] + edges[j + 1]); }
    std::vector<double> midpoints() const;

    // Throws DimensionError on length mismatch, std::invalid_argument on
    // non-finite values, negative light shift, fewer than two segments or a
    // non-increasing grid.
    void validate() const;
};

// Local optical phase kx at the atom: constant, or one value per segment midpoint.
using LocalPhase = std::variant<double, std::vector<double>>;

struct DriveContext {
    LocalPhase phase_kx = 0.0;
    double rabi_scale_1 = 1.0;
    double rabi_scale_2 = 1.0;
    double detuning_gamma = 0.0;
    bool is_target = true;

    double phase_at(std::size_t j) const;
    void validate(std::size_t n_segments) const;
};

HamiltonianCoeffs assemble_hamiltonian(std::size_t sample_index, const SampledControls& controls,
                                       const DriveContext& ctx);

// exp(-i H dt), evaluated in closed form.
Unitary2 su2_step(const HamiltonianCoeffs& h, double dt);

// Time-ordered product of segment propagators, latest segment leftmost.
Unitary2 propagate(const SampledControls& controls, const DriveContext& ctx);

// Same as propagate but also returns the propagator accumulated up to each
// segment midpoint (entry j = U(t_j)). Used by the Magnus diagnostics.
struct PropagationTrace {
    Unitary2 final;
    std::vector<Unitary2> at_midpoints;
};
PropagationTrace propagate_with_midpoints(const SampledControls& controls, const DriveContext& ctx);

// |Tr(target^dagger u)|^2 / 4, clamped into [0, 1].
double fidelity(const Unitary2& u, const Unitary2& target);

inline double infidelity(const Unitary2& u, const Unitary2& target) { return 1.0 - fidelity(u, target); }

Unitary2 target_unitary(const GateTarget& g);

}  // namespace osw
