#pragma once

// Control laws: the known-b backstepping feedback, the adaptive controller u0
// that only uses observer data, the update law for the reciprocal estimate
// zeta, and the series that builds servo dynamics for a reference r(t).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "heatadapt/domain.hpp"
#include "heatadapt/fdm.hpp"

namespace heatadapt::control {

/// Default bound on the first omitted servo-series term.
inline constexpr double kServoTailTolerance = 1e-10;

/// Boundary values of the servo profile v at x = 1.
struct ServoTerms {
    double v1 = 0.0;
    double vx1 = 0.0;
    int truncation = 0;
    double tail_bound = 0.0;
};

/// f(1) + q * int_0^1 e^{q(1-x)} f(x) dx, the backstepping functional.
inline double backstepping_functional(const GridFunction& f, double q) {
    const Grid& g = f.grid();
    std::vector<double> weighted(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) weighted[i] = std::exp(q * (1.0 - g.node(i))) * f[i];
    return f.right() + q * fdm::quad(GridFunction(g, std::move(weighted)));
}

/// Full-state feedback that needs the true b.
inline double backstepping_known_b(const GridFunction& w, const Params& p) {
    return -((p.q() + p.c0()) / p.b()) * backstepping_functional(w, p.q());
}

/// Observer-based controller. `what` is the observer field (w^ when
/// stabilizing, z^ when tracking); the servo term is added only when tracking.
inline double adaptive_u0(const GridFunction& what, const EstimatorView& p,
                          const std::optional<ServoTerms>& servo = std::nullopt) {
    const double u0 = -(p.q() + p.c0()) * backstepping_functional(what, p.q());
    return servo ? u0 + servo->vx1 : u0;
}

/// One explicit Euler step of zeta' = -sign_b * innovation * u0.
[[nodiscard]] constexpr double zeta_step(double zeta, int sign_b, double innovation, double u0, double dt) noexcept {
    return zeta - static_cast<double>(sign_b) * innovation * u0 * dt;
}

namespace detail {

// Bound used for tail estimates: the uniform derivative bound when the
// reference provides one, else the current derivative value.
inline double derivative_scale(const ReferenceSignal& ref, int j, double t) {
    const double bound = ref.derivative_bound(j);
    return std::isfinite(bound) ? bound : std::abs(ref.derivative(j, t));
}

inline void check_tail(double tail, double tolerance, int J) {
    if (!std::isfinite(tail) || tail > tolerance) {
        throw Error(ErrorCode::TruncationInsufficient,
                    "servo series truncated at J = " + std::to_string(J) + " leaves a tail of " + std::to_string(tail));
    }
}

}  // namespace detail

/// Partial sum j = 0..J of
///   v(x,t) = sum_j r^(j)(t) [x^{2j}/(2j)! - q x^{2j+1}/(2j+1)!].
inline double servo_eval(const ReferenceSignal& ref, double q, double x, double t, int J,
                         double tolerance = kServoTailTolerance) {
    if (J < 0) throw Error(ErrorCode::InvalidConfig, "servo truncation must be >= 0");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::InvalidConfig, "servo position outside [0, 1]");

    double even = 1.0;  // x^{2j}/(2j)!
    double odd = x;     // x^{2j+1}/(2j+1)!
    double sum = 0.0;
    for (int j = 0; j <= J; ++j) {
        sum += ref.derivative(j, t) * (even - q * odd);
        even = odd * x / (2.0 * j + 2.0);
        odd = even * x / (2.0 * j + 3.0);
    }
    detail::check_tail(detail::derivative_scale(ref, J + 1, t) * (even + q * odd), tolerance, J);
    return sum;
}

/// Truncated series for v(1,t) and v_x(1,t).
inline ServoTerms servo_boundary(const ReferenceSignal& ref, double q, double t, int J,
                                 double tolerance = kServoTailTolerance) {
    if (J < 0) throw Error(ErrorCode::InvalidConfig, "servo truncation must be >= 0");
    ServoTerms s;
    s.truncation = J;

    // inv_even = 1/(2j)!, inv_odd = 1/(2j+1)!, inv_prev_odd = 1/(2j-1)!.
    double inv_even = 1.0;
    double inv_odd = 1.0;
    double inv_prev_odd = 1.0;
    for (int j = 0; j <= J; ++j) {
        const double r = ref.derivative(j, t);
        s.v1 += r * (inv_even - q * inv_odd);
        if (j == 0) {
            s.vx1 -= q * r;
        } else {
            s.vx1 -= r * (q * inv_even - inv_prev_odd);
        }
        inv_prev_odd = inv_odd;
        inv_even = inv_odd / (2.0 * j + 2.0);
        inv_odd = inv_even / (2.0 * j + 3.0);
    }
    const double scale = detail::derivative_scale(ref, J + 1, t);
    const double tail_v1 = scale * (inv_even + q * inv_odd);
    const double tail_vx1 = scale * (q * inv_even + inv_prev_odd);
    s.tail_bound = std::max(tail_v1, tail_vx1);
    detail::check_tail(s.tail_bound, tolerance, J);
    return s;
}

/// Servo profile sampled on a grid.
inline GridFunction servo_profile(const ReferenceSignal& ref, double q, const Grid& grid, double t, int J,
                                  double tolerance = kServoTailTolerance) {
    return GridFunction::sample(grid, [&](double x) { return servo_eval(ref, q, x, t, J, tolerance); });
}

}  // namespace heatadapt::control
