#pragma once

// Explicit finite differences for u_t = u_xx (+ source) on the unit interval
// with flux boundary data, and trapezoid quadrature on the same grid.

#include <cmath>
#include <vector>

#include "heatadapt/domain.hpp"

namespace heatadapt::fdm {

/// Prescribed values of u_x at x = 0 and x = 1. Robin conditions are imposed
/// by the caller evaluating these from the current boundary values.
struct FluxBC {
    double left_flux = 0.0;
    double right_flux = 0.0;
};

namespace detail {

inline void check_flux(const FluxBC& bc) {
    if (!std::isfinite(bc.left_flux) || !std::isfinite(bc.right_flux)) {
        throw Error(ErrorCode::NonFiniteState, "boundary flux is not finite");
    }
}

inline GridFunction step_impl(const GridFunction& state, const FluxBC& bc, double dt, const GridFunction* source) {
    check_flux(bc);
    const auto u = state.values();
    const std::size_t n = u.size();
    const double dx = state.grid().dx();
    const double r = dt / (dx * dx);

    // Ghost values u_{-1} = u_1 - 2 dx g_L and u_n = u_{n-2} + 2 dx g_R.
    const double ghost_left = u[1] - 2.0 * dx * bc.left_flux;
    const double ghost_right = u[n - 2] + 2.0 * dx * bc.right_flux;

    std::vector<double> next(n);
    next[0] = u[0] + r * (ghost_left - 2.0 * u[0] + u[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) next[i] = u[i] + r * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
    next[n - 1] = u[n - 1] + r * (u[n - 2] - 2.0 * u[n - 1] + ghost_right);

    if (source) {
        if (!(source->grid() == state.grid())) throw Error(ErrorCode::GridMismatch, "source lives on another grid");
        for (std::size_t i = 0; i < n; ++i) next[i] += dt * (*source)[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(next[i])) {
            throw Error(ErrorCode::NonFiniteState, "heat step produced a non-finite value at node " + std::to_string(i));
        }
    }
    return GridFunction(state.grid(), std::move(next));
}

}  // namespace detail

/// One forward-Euler step of u_t = u_xx with second-order ghost-node flux
/// boundaries. The input is left untouched.
inline GridFunction step_heat(const GridFunction& state, const FluxBC& bc, double dt) {
    return detail::step_impl(state, bc, dt, nullptr);
}

inline GridFunction step_heat(const GridFunction& state, const FluxBC& bc, double dt, const GridFunction& source) {
    return detail::step_impl(state, bc, dt, &source);
}

/// Value that step_heat would assign to the last node, without building the
/// whole profile.
inline double right_node_after_step(const GridFunction& state, double right_flux, double dt) {
    const auto u = state.values();
    const std::size_t n = u.size();
    const double dx = state.grid().dx();
    const double ghost_right = u[n - 2] + 2.0 * dx * right_flux;
    return u[n - 1] + dt / (dx * dx) * (u[n - 2] - 2.0 * u[n - 1] + ghost_right);
}

/// Composite trapezoid rule for the integral over [0, 1].
inline double quad(const GridFunction& f) {
    const auto v = f.values();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i];
    return f.grid().dx() * (0.5 * (v.front() + v.back()) + interior);
}

/// Trapezoid inner product <f, g>.
inline double inner(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) throw Error(ErrorCode::GridMismatch, "inner product across grids");
    const auto a = f.values();
    const auto b = g.values();
    const std::size_t n = a.size();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) interior += a[i] * b[i];
    return f.grid().dx() * (0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]) + interior);
}

inline double l2_norm(const GridFunction& f) { return std::sqrt(inner(f, f)); }

/// Discrete int f_x^2 dx as sum of squared forward differences over dx. This is
/// the form that makes the trapezoid energy of step_heat telescope exactly.
inline double gradient_energy(const GridFunction& f) {
    const auto v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double d = v[i + 1] - v[i];
        s += d * d;
    }
    return s / f.grid().dx();
}

}  // namespace heatadapt::fdm
