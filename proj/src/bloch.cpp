#include "dimersim/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dimersim {

namespace {

constexpr double pi = 3.14159265358979323846;

Complex instantaneous_rabi(const BlochState& state, const DriveParams& drive) {
    return drive.drive_amplitude - Complex(0.0, 1.0) * drive.self_action * state.coherence;
}

}  // namespace

BlochDerivative rhs(const BlochState& state, const DriveParams& drive) {
    const Complex omega = instantaneous_rabi(state, drive);
    const Complex r = state.coherence;
    const double z = state.population_difference;

    BlochDerivative d;
    d.d_population = -drive.population_decay_rate * (z + 1.0) - (omega * std::conj(r)).real();
    d.d_coherence = -(Complex(0.0, drive.detuning) + drive.dephasing_rate) * r + omega * z;
    return d;
}

Matrix3 jacobian(const BlochState& state, const DriveParams& drive) {
    const double x = state.coherence.real();
    const double y = state.coherence.imag();
    const double z = state.population_difference;
    const double w_re = drive.drive_amplitude.real();
    const double w_im = drive.drive_amplitude.imag();
    const double g_re = drive.self_action.real();
    const double g_im = drive.self_action.imag();
    const double gamma = drive.population_decay_rate;
    const double big_gamma = drive.dephasing_rate;
    const double delta = drive.detuning;

    // With R = x + iy the instantaneous Rabi rate splits into
    //   Re Omega = w_re + g_im*x + g_re*y,   Im Omega = w_im - g_re*x + g_im*y,
    // and the population equation expands to
    //   dZ/dt = -gamma(Z+1) - w_re*x - w_im*y - g_im*(x^2+y^2),
    // i.e. the feedback contributes -Im(G)|R|^2.
    Matrix3 j;
    j[0][0] = -big_gamma + g_im * z;
    j[0][1] = delta + g_re * z;
    j[0][2] = w_re + g_im * x + g_re * y;
    j[1][0] = -delta - g_re * z;
    j[1][1] = -big_gamma + g_im * z;
    j[1][2] = w_im - g_re * x + g_im * y;
    j[2][0] = -w_re - 2.0 * g_im * x;
    j[2][1] = -w_im - 2.0 * g_im * y;
    j[2][2] = -gamma;
    return j;
}

namespace detail {

std::array<Complex, 3> monic_cubic_roots(double p, double q, double r) {
    // Depressed form t^3 + P t + Q with x = t - p/3.
    const double shift = p / 3.0;
    const double P = q - p * p / 3.0;
    const double Q = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    const double disc = 0.25 * Q * Q + P * P * P / 27.0;

    std::array<Complex, 3> roots;
    if (disc > 0.0) {
        // One real root; pick the non-cancelling cube root first.
        const double sq = std::sqrt(disc);
        double big = 0.0, small = 0.0;
        if (Q <= 0.0) {
            big = std::cbrt(-0.5 * Q + sq);
            small = (big != 0.0) ? -P / (3.0 * big) : 0.0;
        } else {
            small = std::cbrt(-0.5 * Q - sq);
            big = (small != 0.0) ? -P / (3.0 * small) : 0.0;
        }
        const double t_real = big + small;
        const double re = -0.5 * t_real;
        const double im = 0.5 * std::sqrt(3.0) * (big - small);
        roots[0] = Complex(t_real - shift, 0.0);
        roots[1] = Complex(re - shift, im);
        roots[2] = Complex(re - shift, -im);
    } else {
        // Three real roots (trigonometric form); P <= 0 here.
        const double m = 2.0 * std::sqrt(std::max(0.0, -P / 3.0));
        double theta = 0.0;
        if (m > 0.0) {
            const double c = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
            theta = std::acos(c) / 3.0;
        }
        for (int k = 0; k < 3; ++k) {
            roots[k] = Complex(m * std::cos(theta - 2.0 * pi * k / 3.0) - shift, 0.0);
        }
    }

    // Newton polish; keeps real roots exactly real.
    for (auto& root : roots) {
        if (root.imag() == 0.0) {
            double x = root.real();
            for (int it = 0; it < 2; ++it) {
                const double f = ((x + p) * x + q) * x + r;
                const double df = (3.0 * x + 2.0 * p) * x + q;
                if (df == 0.0) break;
                x -= f / df;
            }
            root = Complex(x, 0.0);
        } else {
            Complex x = root;
            for (int it = 0; it < 2; ++it) {
                const Complex f = ((x + p) * x + q) * x + r;
                const Complex df = (3.0 * x + 2.0 * p) * x + q;
                if (df == Complex(0.0, 0.0)) break;
                x -= f / df;
            }
            root = x;
        }
    }
    // Restore exact conjugacy of a polished complex pair.
    if (roots[1].imag() != 0.0) {
        roots[2] = std::conj(roots[1]);
    }
    return roots;
}

}  // namespace detail

std::array<Complex, 3> eigenvalues(const Matrix3& m) {
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                          (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                          (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return detail::monic_cubic_roots(-tr, minors, -det);
}

namespace {

struct SteadyCubic {
    // a z^3 + b2 z^2 + b1 z + b0, assembled from the steady-state condition.
    double a, b2, b1, b0;

    double eval(double z) const { return ((a * z + b2) * z + b1) * z + b0; }
    double deriv(double z) const { return (3.0 * a * z + 2.0 * b2) * z + b1; }
    double magnitude_scale(double z) const {
        const double az = std::abs(z);
        return std::abs(a) * az * az * az + std::abs(b2) * az * az + std::abs(b1) * az +
               std::abs(b0);
    }
};

SteadyCubic steady_cubic(const DriveParams& drive) {
    const double w = std::norm(drive.drive_amplitude);
    const double g_re = drive.self_action.real();
    const double g_im = drive.self_action.imag();
    const double gamma = drive.population_decay_rate;
    const double big_gamma = drive.dephasing_rate;
    const double delta = drive.detuning;

    const double a = g_re * g_re + g_im * g_im;
    const double b = 2.0 * (delta * g_re - big_gamma * g_im);
    const double c = big_gamma * big_gamma + delta * delta;
    const double pump = w * big_gamma / gamma;
    return SteadyCubic{a, a + b, b + c + pump, c};
}

Complex steady_coherence(const DriveParams& drive, double z) {
    const Complex denom(drive.dephasing_rate - drive.self_action.imag() * z,
                        drive.detuning + drive.self_action.real() * z);
    return drive.drive_amplitude * z / denom;
}

BranchPoint make_branch_point(const DriveParams& drive, double z, bool at_fold) {
    BranchPoint pt;
    pt.population_difference = z;
    pt.coherence = steady_coherence(drive, z);
    pt.at_fold = at_fold;
    BlochState state{pt.population_difference, pt.coherence};
    pt.eigenvalues = eigenvalues(jacobian(state, drive));
    pt.stable = true;
    for (const auto& ev : pt.eigenvalues) {
        if (ev.real() >= 0.0) pt.stable = false;
    }
    return pt;
}

constexpr double root_clamp_margin = 1e-12;
constexpr double fold_merge_tolerance = 1e-8;

}  // namespace

double steady_state_residual(const DriveParams& drive, double z) {
    const SteadyCubic cubic = steady_cubic(drive);
    const double scale = cubic.magnitude_scale(z);
    if (scale == 0.0) return 0.0;
    return std::abs(cubic.eval(z)) / scale;
}

std::vector<BranchPoint> steady_states(const DriveParams& drive) {
    if (drive.population_decay_rate <= 0.0 || drive.dephasing_rate <= 0.0) {
        throw ConfigError("steady_states requires positive relaxation rates");
    }

    const double w = std::norm(drive.drive_amplitude);
    if (w == 0.0) {
        DriveParams undriven = drive;
        undriven.drive_amplitude = Complex(0.0, 0.0);
        return {make_branch_point(undriven, -1.0, false)};
    }

    const SteadyCubic cubic = steady_cubic(drive);

    std::vector<double> real_roots;
    if (cubic.a == 0.0) {
        // No feedback: the cubic collapses to a linear saturation law.
        real_roots.push_back(-cubic.b0 / cubic.b1);
    } else {
        const auto roots =
            detail::monic_cubic_roots(cubic.b2 / cubic.a, cubic.b1 / cubic.a, cubic.b0 / cubic.a);
        for (const auto& root : roots) {
            if (root.imag() != 0.0) continue;
            double z = root.real();
            // Final Newton polish on the unnormalized cubic.
            const double df = cubic.deriv(z);
            if (df != 0.0) z -= cubic.eval(z) / df;
            real_roots.push_back(z);
        }
    }

    // Physical window [-1, 0]; tolerate rounding-level excursions only.
    std::vector<double> kept;
    for (double z : real_roots) {
        if (z > 0.0) {
            if (z > root_clamp_margin) continue;
            z = 0.0;
        }
        if (z < -1.0) {
            if (z < -1.0 - root_clamp_margin) continue;
            z = -1.0;
        }
        kept.push_back(z);
    }
    std::sort(kept.begin(), kept.end());

    std::vector<BranchPoint> out;
    for (std::size_t i = 0; i < kept.size();) {
        std::size_t j = i + 1;
        while (j < kept.size() && kept[j] - kept[i] < fold_merge_tolerance) ++j;
        const bool merged = (j - i) > 1;
        out.push_back(make_branch_point(drive, kept[i], merged));
        i = j;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with FSAL and standard step control.

namespace detail {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights of the embedded pair.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

using Vec3 = std::array<double, 3>;

Vec3 axpy(const Vec3& y, double h, std::initializer_list<std::pair<double, const Vec3*>> terms) {
    Vec3 out = y;
    for (const auto& [coeff, k] : terms) {
        for (int i = 0; i < 3; ++i) out[i] += h * coeff * (*k)[i];
    }
    return out;
}

}  // namespace

void dp45_step(const Rhs3& f, double t, const std::array<double, 3>& y, double h,
               std::array<double, 3>& y_out, std::array<double, 3>& err_out) {
    const Vec3 k1 = f(t, y);
    const Vec3 k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const Vec3 k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec3 k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec3 k5 = f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec3 k6 =
        f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    y_out = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec3 k7 = f(t + h, y_out);
    const Vec3 y4 =
        axpy(y, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    for (int i = 0; i < 3; ++i) err_out[i] = y_out[i] - y4[i];
}

}  // namespace detail

namespace {

using Vec3 = std::array<double, 3>;

Vec3 to_vec(const BlochState& s) {
    return {s.coherence.real(), s.coherence.imag(), s.population_difference};
}

BlochState from_vec(const Vec3& v) { return BlochState{v[2], Complex(v[0], v[1])}; }

Vec3 rhs_vec(const DriveProtocol& protocol, double t, const Vec3& v) {
    const BlochDerivative d = rhs(from_vec(v), protocol(t));
    return {d.d_coherence.real(), d.d_coherence.imag(), d.d_population};
}

[[noreturn]] void throw_invariant(double t, const BlochState& s) {
    std::ostringstream os;
    os << "state left the physical ball at t=" << t << " ns: Z=" << s.population_difference
       << ", |R|=" << std::abs(s.coherence) << ", Z^2+|R|^2-1=" << s.ball_norm_sq() - 1.0;
    throw IntegrationError(os.str());
}

}  // namespace

Trajectory integrate(const BlochState& initial, const DriveProtocol& protocol, double t0,
                     double t1, const IntegratorOptions& options) {
    if (options.rel_tol <= 0.0 || options.abs_tol <= 0.0) {
        throw ConfigError("integrator tolerances must be positive");
    }
    if (t1 < t0) throw ConfigError("integration requires t1 >= t0");

    const double span = t1 - t0;
    const double min_step = options.min_step > 0.0
                                ? options.min_step
                                : 64.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, std::abs(t1));

    Trajectory traj;
    Vec3 y = to_vec(initial);
    double t = t0;

    auto record = [&](double at) { traj.points.push_back({at, from_vec(y)}); };
    auto audit = [&](double at) {
        const BlochState s = from_vec(y);
        if (!std::isfinite(s.population_difference) || !std::isfinite(s.coherence.real()) ||
            !std::isfinite(s.coherence.imag())) {
            throw IntegrationError("non-finite state at t=" + std::to_string(at) + " ns");
        }
        const double excess = s.ball_norm_sq() - 1.0;
        traj.max_ball_excess = std::max(traj.max_ball_excess, excess);
        traj.min_population = std::min(traj.min_population, s.population_difference);
        traj.max_population = std::max(traj.max_population, s.population_difference);
        if (excess > invariant_abort_tolerance ||
            std::abs(s.population_difference) > 1.0 + invariant_abort_tolerance) {
            throw_invariant(at, s);
        }
    };

    audit(t);
    record(t);
    if (span == 0.0) return traj;

    const double stride = options.sample_stride;
    double next_sample = stride > 0.0 ? t0 + stride : t1;

    auto f = [&](double tt, const Vec3& v) { return rhs_vec(protocol, tt, v); };

    // Initial step heuristic: small fraction of the span, shrunk when the
    // right-hand side is fast.
    double h = options.initial_step;
    if (h <= 0.0) {
        const Vec3 f0 = f(t0, y);
        const double fmag = std::sqrt(f0[0] * f0[0] + f0[1] * f0[1] + f0[2] * f0[2]);
        h = std::min(1e-3 * span, 0.1 / (1.0 + fmag));
    }
    if (options.max_step > 0.0) h = std::min(h, options.max_step);

    while (t < t1) {
        // Land exactly on sample times and the end point.
        const double target = std::min(next_sample, t1);
        bool clipped = false;
        if (t + h >= target) {
            h = target - t;
            clipped = true;
        }
        if (h < min_step && !clipped) {
            throw IntegrationError("step size underflow at t=" + std::to_string(t) + " ns (h=" +
                                   std::to_string(h) + ")");
        }

        Vec3 y_new, err;
        detail::dp45_step(f, t, y, h, y_new, err);

        double err_norm = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double scale =
                options.abs_tol + options.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double e = err[i] / scale;
            err_norm += e * e;
        }
        err_norm = std::sqrt(err_norm / 3.0);

        if (!std::isfinite(err_norm)) {
            throw IntegrationError("non-finite error estimate at t=" + std::to_string(t) + " ns");
        }

        if (err_norm <= 1.0) {
            t += h;
            y = y_new;
            ++traj.steps_accepted;
            audit(t);
            if (stride > 0.0 && t >= next_sample) {
                record(t);
                next_sample += stride;
            } else if (stride <= 0.0) {
                record(t);
            }
        } else {
            ++traj.steps_rejected;
        }

        double factor = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;
        if (options.max_step > 0.0) h = std::min(h, options.max_step);
        if (h < min_step) {
            if (t >= t1) break;
            throw IntegrationError("step size underflow at t=" + std::to_string(t) + " ns (h=" +
                                   std::to_string(h) + ")");
        }
    }

    if (stride > 0.0 && traj.points.back().t != t1) record(t1);
    return traj;
}

}  // namespace dimersim
