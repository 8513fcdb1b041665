#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "dimersim/errors.hpp"

namespace dimersim {

using Complex = std::complex<double>;

// Dynamical state of the two-level emitter in the rotating frame.
// population_difference runs from -1 (ground) to +1 (inverted); coherence is
// the slowly varying off-diagonal amplitude, normalized so that
// population_difference^2 + |coherence|^2 <= 1 for physical states.
struct BlochState {
    double population_difference = -1.0;
    Complex coherence{0.0, 0.0};

    double ball_norm_sq() const {
        return population_difference * population_difference + std::norm(coherence);
    }
};

// Drive and relaxation parameters entering the equations of motion.  The
// instantaneous Rabi rate is drive_amplitude - i * self_action * coherence.
struct DriveParams {
    Complex drive_amplitude{0.0, 0.0};  // renormalized external Rabi rate, ns^-1
    double detuning = 0.0;              // ns^-1
    double population_decay_rate = 1.0; // ns^-1
    double dephasing_rate = 1.0;        // ns^-1
    Complex self_action{0.0, 0.0};      // feedback constant, ns^-1
};

struct BlochDerivative {
    double d_population = 0.0;
    Complex d_coherence{0.0, 0.0};
};

// Equations of motion with the coherence feedback folded into the Rabi rate.
BlochDerivative rhs(const BlochState& state, const DriveParams& drive);

// Analytic Jacobian of rhs in real coordinates (Re coherence, Im coherence,
// population difference), row-major.  The feedback makes the population
// equation quadratic in the coherence, so the Jacobian is state dependent.
using Matrix3 = std::array<std::array<double, 3>, 3>;
Matrix3 jacobian(const BlochState& state, const DriveParams& drive);

// Eigenvalues of a real 3x3 matrix via its characteristic cubic.
std::array<Complex, 3> eigenvalues(const Matrix3& m);

// One steady-state solution with its linear-stability classification.
struct BranchPoint {
    double population_difference = 0.0;
    Complex coherence{0.0, 0.0};
    bool stable = false;
    std::array<Complex, 3> eigenvalues{};
    bool at_fold = false;  // double root merged within tolerance
};

// All physical steady states for a constant drive, sorted by increasing
// population difference.  Returns 1 or 3 points (2 at a fold).  For zero
// drive amplitude this is exactly the ground state.
std::vector<BranchPoint> steady_states(const DriveParams& drive);

// Relative residual of the steady-state cubic at z, used by tests and by
// consistency checks.
double steady_state_residual(const DriveParams& drive, double z);

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 0.0;   // 0: choose automatically
    double max_step = 0.0;       // 0: no cap
    double min_step = 0.0;       // 0: machine-level underflow guard
    double sample_stride = 0.0;  // 0: record accepted steps only
};

struct TrajectoryPoint {
    double t = 0.0;
    BlochState state;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    // Extremes over every accepted step, for physicality audits.
    double max_ball_excess = 0.0;  // max(0, Z^2+|R|^2 - 1)
    double min_population = 1.0;
    double max_population = -1.0;

    const BlochState& final_state() const { return points.back().state; }
};

// Drive as a function of time (ns); must return finite parameters.
using DriveProtocol = std::function<DriveParams(double)>;

// Adaptive embedded Runge-Kutta integration of rhs from t0 to t1.  Samples
// are recorded every options.sample_stride ns (plus the endpoints).  Throws
// IntegrationError on step-size underflow or when the state leaves the
// physical ball by more than invariant_abort_tolerance.
Trajectory integrate(const BlochState& initial, const DriveProtocol& protocol, double t0,
                     double t1, const IntegratorOptions& options = {});

inline constexpr double invariant_abort_tolerance = 1e-6;

namespace detail {

// Roots of x^3 + p x^2 + q x + r, Newton-polished; real roots carry zero
// imaginary part exactly.
std::array<Complex, 3> monic_cubic_roots(double p, double q, double r);

// One Dormand-Prince 5(4) step; returns the 5th-order solution and the
// embedded error estimate.  Exposed for order-of-convergence tests.
using Rhs3 = std::function<std::array<double, 3>(double, const std::array<double, 3>&)>;
void dp45_step(const Rhs3& f, double t, const std::array<double, 3>& y, double h,
               std::array<double, 3>& y_out, std::array<double, 3>& err_out);

}  // namespace detail

}  // namespace dimersim
