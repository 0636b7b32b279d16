#pragma once

// Verification instruments: energy/Lyapunov functionals of the observation
// error, the persistent-excitation test, the backstepping kernel transform and
// its inverse, a spectral Galerkin solver for the error system, and
// convergence diagnostics for recorded traces.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "heatadapt/control.hpp"
#include "heatadapt/domain.hpp"
#include "heatadapt/fdm.hpp"

namespace heatadapt::analysis {

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

struct Energies {
    double E = 0.0;
    double F = 0.0;
    double V = 0.0;  // same functional as F, reported under both names
};

/// E = 1/2 ||w~||^2, F = V = E + |b|/2 zeta~^2.
inline Energies energies(const GridFunction& wtilde, double zetatilde, double b) {
    const double norm = fdm::l2_norm(wtilde);
    Energies e;
    e.E = 0.5 * norm * norm;
    e.F = e.E + 0.5 * std::abs(b) * zetatilde * zetatilde;
    e.V = e.F;
    return e;
}

// ---------------------------------------------------------------------------
// Persistent excitation
// ---------------------------------------------------------------------------

struct PEVerdict {
    bool is_pe = false;
    /// int_t^{t+tau} u0 over the trailing windows, oldest first.
    std::vector<double> window_integrals;
    double threshold = 0.0;
    double tau = 0.0;
};

/// Exact integral over [a, b] of the piecewise-linear interpolant of (t, y).
inline double integrate_linear(std::span<const double> t, std::span<const double> y, double a, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double lo = std::max(a, t[i]);
        const double hi = std::min(b, t[i + 1]);
        if (!(hi > lo)) continue;
        const double h = t[i + 1] - t[i];
        auto interp = [&](double s) { return y[i] + (y[i + 1] - y[i]) * (s - t[i]) / h; };
        total += 0.5 * (hi - lo) * (interp(lo) + interp(hi));
    }
    return total;
}

/// Finite-horizon persistent-excitation surrogate: the signal counts as PE
/// when every one of the `windows` trailing window integrals of length `tau`
/// exceeds `threshold` in magnitude.
inline PEVerdict pe_check(std::span<const double> times, std::span<const double> values, double tau,
                          double threshold, int windows = 5) {
    if (times.size() != values.size() || times.size() < 2) {
        throw Error(ErrorCode::InsufficientDuration, "PE check needs at least two samples");
    }
    if (!(tau > 0.0) || windows < 1) throw Error(ErrorCode::InvalidConfig, "PE window must be positive");
    const double end = times.back();
    const double start = end - windows * tau;
    if (start < times.front() - 1e-9 * tau) {
        throw Error(ErrorCode::InsufficientDuration, "trace spans " + std::to_string(end - times.front()) +
                                                         " but the PE check needs " + std::to_string(windows * tau));
    }
    PEVerdict v;
    v.tau = tau;
    v.threshold = threshold;
    double smallest = std::numeric_limits<double>::infinity();
    for (int k = windows - 1; k >= 0; --k) {
        const double b = end - k * tau;
        const double integral = integrate_linear(times, values, b - tau, b);
        v.window_integrals.push_back(integral);
        smallest = std::min(smallest, std::abs(integral));
    }
    v.is_pe = smallest > threshold;
    return v;
}

inline PEVerdict pe_check(const Trace& trace, double Sample::*column, double tau, double threshold,
                          int windows = 5) {
    const auto t = trace.column(&Sample::t);
    const auto y = trace.column(column);
    return pe_check(t, y, tau, threshold, windows);
}

// ---------------------------------------------------------------------------
// Kernel transforms
// ---------------------------------------------------------------------------

/// (Pi f)(x) = f(x) + q int_0^x e^{q(x-s)} f(s) ds, cumulative trapezoid.
inline GridFunction pi_transform(const GridFunction& f, double q) {
    const double dx = f.grid().dx();
    const double growth = std::exp(q * dx);
    std::vector<double> out(f.size());
    double running = 0.0;  // int_0^{x_i} e^{q(x_i - s)} f(s) ds
    out[0] = f[0];
    for (std::size_t i = 1; i < f.size(); ++i) {
        running = growth * running + 0.5 * dx * (growth * f[i - 1] + f[i]);
        out[i] = f[i] + q * running;
    }
    return GridFunction(f.grid(), std::move(out));
}

/// (Pi^{-1} g)(x) = g(x) - q int_0^x g(s) ds, cumulative trapezoid.
inline GridFunction pi_inverse(const GridFunction& g, double q) {
    const double dx = g.grid().dx();
    std::vector<double> out(g.size());
    double running = 0.0;
    out[0] = g[0];
    for (std::size_t i = 1; i < g.size(); ++i) {
        running += 0.5 * dx * (g[i - 1] + g[i]);
        out[i] = g[i] - q * running;
    }
    return GridFunction(g.grid(), std::move(out));
}

/// s -> 1/b - s. Its own inverse.
inline double upsilon_b(double s, double b) {
    if (b == 0.0) throw Error(ErrorCode::ZeroCoefficient, "upsilon_b needs b != 0");
    return 1.0 / b - s;
}

// ---------------------------------------------------------------------------
// Eigenfunction bases
// ---------------------------------------------------------------------------

enum class ModeFamily {
    /// phi_n = sqrt(2) sin((n - 1/2) pi x): phi(0) = 0, phi'(1) = 0.
    dirichlet_left_sine,
    /// phi_1 = 1, phi_n = sqrt(2) cos((n - 1) pi x): phi'(0) = phi'(1) = 0.
    neumann_cosine,
};

struct EigenPair {
    int index = 1;
    double lambda = 0.0;
    ModeFamily family = ModeFamily::dirichlet_left_sine;

    [[nodiscard]] double frequency() const noexcept { return std::sqrt(lambda); }

    [[nodiscard]] double phi(double x) const noexcept {
        if (family == ModeFamily::dirichlet_left_sine) return std::numbers::sqrt2 * std::sin(frequency() * x);
        if (index == 1) return 1.0;
        return std::numbers::sqrt2 * std::cos(frequency() * x);
    }

    [[nodiscard]] double dphi(double x) const noexcept {
        if (family == ModeFamily::dirichlet_left_sine) {
            return std::numbers::sqrt2 * frequency() * std::cos(frequency() * x);
        }
        if (index == 1) return 0.0;
        return -std::numbers::sqrt2 * frequency() * std::sin(frequency() * x);
    }

    [[nodiscard]] GridFunction sampled(const Grid& grid) const {
        return GridFunction::sample(grid, [this](double x) { return phi(x); });
    }
};

inline EigenPair eigen_pair(int n, ModeFamily family = ModeFamily::dirichlet_left_sine) {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "mode index starts at 1");
    const double k = family == ModeFamily::dirichlet_left_sine ? (n - 0.5) * std::numbers::pi
                                                               : (n - 1.0) * std::numbers::pi;
    return EigenPair{n, k * k, family};
}

// ---------------------------------------------------------------------------
// Galerkin solver for the observation-error system
// ---------------------------------------------------------------------------

/// Projects w~0 onto the first N modes and integrates
///   c_j' = -lambda_j c_j - phi_j(1) [b zeta~ u0 + c1 w~_N(1)],
///   zeta~' = sign(b) u0 w~_N(1)
/// with classical RK4. The trace uses the error-system column layout (see
/// Sample); E and F are the modal energies, wnorm is the grid L2 norm of the
/// reconstruction.
inline Trace galerkin_error_system(int N, const Params& p, const std::function<double(double)>& u0,
                                   const GridFunction& wtilde0, double zetatilde0, double t_final, double dt_ode,
                                   std::size_t sample_stride = 1,
                                   ModeFamily family = ModeFamily::neumann_cosine) {
    if (N < 1) throw Error(ErrorCode::InvalidConfig, "need at least one mode");
    if (!(dt_ode > 0.0) || !(t_final >= dt_ode)) throw Error(ErrorCode::InvalidConfig, "bad Galerkin horizon");
    if (sample_stride < 1) throw Error(ErrorCode::InvalidConfig, "sample stride must be >= 1");
    const Grid& grid = wtilde0.grid();
    const auto top = eigen_pair(N, family);
    if (!(top.frequency() * grid.dx() < 1.0)) {
        throw Error(ErrorCode::UnresolvableMode, "mode " + std::to_string(N) + " has sqrt(lambda)*dx = " +
                                                     std::to_string(top.frequency() * grid.dx()) + " >= 1");
    }

    const auto n = static_cast<std::size_t>(N);
    std::vector<double> lambda(n), at_one(n);
    std::vector<GridFunction> basis;
    basis.reserve(n);
    std::vector<double> c(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto mode = eigen_pair(static_cast<int>(j) + 1, family);
        lambda[j] = mode.lambda;
        at_one[j] = mode.phi(1.0);
        basis.push_back(mode.sampled(grid));
        c[j] = fdm::inner(wtilde0, basis.back());
    }
    double zt = zetatilde0;
    const double b = p.b();
    const double c1 = p.c1();
    const double sgn = static_cast<double>(p.sign_b());

    auto boundary = [&](const std::vector<double>& coeff) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += coeff[j] * at_one[j];
        return s;
    };
    // Writes (dc, dzeta) at time t for state (coeff, zeta).
    auto rhs = [&](double t, const std::vector<double>& coeff, double zeta, std::vector<double>& dc, double& dz) {
        const double u = u0(t);
        const double w1 = boundary(coeff);
        const double inflow = b * zeta * u + c1 * w1;
        for (std::size_t j = 0; j < n; ++j) dc[j] = -lambda[j] * coeff[j] - at_one[j] * inflow;
        dz = sgn * u * w1;
    };
    // sum lambda_j c_j^2 + c1 w~_N(1)^2, integrated in time with the trapezoid rule.
    auto dissipation_rate = [&](const std::vector<double>& coeff) {
        double grad = 0.0;
        for (std::size_t j = 0; j < n; ++j) grad += lambda[j] * coeff[j] * coeff[j];
        const double w1 = boundary(coeff);
        return grad + c1 * w1 * w1;
    };
    auto reconstruct = [&]() {
        std::vector<double> v(grid.size(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[j] * basis[j][i];
        }
        return GridFunction(grid, std::move(v));
    };

    Trace trace("galerkin");
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt_ode));
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double z1 = 0, z2 = 0, z3 = 0, z4 = 0;
    double dissipated = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt_ode;
        if (k % sample_stride == 0 || k == steps) {
            const GridFunction field = reconstruct();
            double modal = 0.0;
            for (double cj : c) modal += cj * cj;
            Sample s;
            s.t = t;
            s.u0 = u0(t);
            s.zeta_tilde = zt;
            s.zeta = 1.0 / b - zt;
            s.u = s.zeta * s.u0;
            s.w0 = field.left();
            s.w1 = field.right();
            s.wnorm = fdm::l2_norm(field);
            s.obs_err_norm = s.wnorm;
            s.E = 0.5 * modal;
            s.F = s.E + 0.5 * std::abs(b) * zt * zt;
            s.V = s.F;
            s.dissipated = dissipated;
            trace.push(s);
        }
        if (k == steps) {
            trace.set_final(FinalState{t, reconstruct(), GridFunction::zeros(grid), 1.0 / b - zt});
            break;
        }

        const double rate_before = dissipation_rate(c);

        const double h = dt_ode;
        rhs(t, c, zt, k1, z1);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = c[j] + 0.5 * h * k1[j];
        rhs(t + 0.5 * h, tmp, zt + 0.5 * h * z1, k2, z2);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = c[j] + 0.5 * h * k2[j];
        rhs(t + 0.5 * h, tmp, zt + 0.5 * h * z2, k3, z3);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = c[j] + h * k3[j];
        rhs(t + h, tmp, zt + h * z3, k4, z4);
        for (std::size_t j = 0; j < n; ++j) c[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        zt += h / 6.0 * (z1 + 2.0 * z2 + 2.0 * z3 + z4);
        dissipated += 0.5 * h * (rate_before + dissipation_rate(c));
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Limit diagnostics
// ---------------------------------------------------------------------------

struct QuantityGap {
    std::string name;
    double terminal = 0.0;
    /// max |x(t) - x(t_final)| over the settle window.
    double gap = 0.0;
    bool converged = false;
};

struct LimitSummary {
    double settle_window = 0.0;
    double gap_tolerance = 0.0;
    bool blew_up = false;
    std::vector<QuantityGap> quantities;

    [[nodiscard]] const QuantityGap& get(const std::string& name) const {
        for (const auto& q : quantities) {
            if (q.name == name) return q;
        }
        throw Error(ErrorCode::InvalidConfig, "no diagnostic named " + name);
    }

    [[nodiscard]] bool all_converged() const {
        return std::all_of(quantities.begin(), quantities.end(), [](const QuantityGap& q) { return q.converged; });
    }
};

inline LimitSummary limit_diagnostics(const Trace& trace, double settle_window, double gap_tolerance = 1e-3) {
    if (trace.empty() || !(settle_window > 0.0)) {
        throw Error(ErrorCode::InsufficientDuration, "limit diagnostics need a non-empty trace and window");
    }
    const auto& s = trace.samples();
    const double t_end = s.back().t;
    if (t_end - s.front().t < 2.0 * settle_window * (1.0 - 1e-12)) {
        throw Error(ErrorCode::InsufficientDuration, "trace shorter than twice the settle window");
    }
    LimitSummary out;
    out.settle_window = settle_window;
    out.gap_tolerance = gap_tolerance;
    out.blew_up = trace.blew_up();

    const std::pair<const char*, double Sample::*> columns[] = {
        {"zeta", &Sample::zeta}, {"wnorm", &Sample::wnorm}, {"obs_err_norm", &Sample::obs_err_norm}};
    const double from = t_end - settle_window - 1e-12 * std::max(1.0, t_end);
    for (const auto& [name, field] : columns) {
        QuantityGap g;
        g.name = name;
        g.terminal = s.back().*field;
        for (const auto& sample : s) {
            if (sample.t >= from) g.gap = std::max(g.gap, std::abs(sample.*field - g.terminal));
        }
        g.converged = !out.blew_up && g.gap <= gap_tolerance;
        out.quantities.push_back(g);
    }
    return out;
}

}  // namespace heatadapt::analysis
