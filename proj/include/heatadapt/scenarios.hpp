#pragma once

// Closed loops built from plant, observer and controllers: open loop, the
// observer driven by an external u0, observer-based stabilization, output
// tracking, and a direct simulation of the observation-error system.
//
// Time stepping. Plant and observer use the explicit scheme of fdm::step_heat
// with boundary data evaluated at the start of the step. The skew coupling
// between the actuated flux b*zeta*u0 and the update law for zeta is treated
// with the midpoint rule over the step: zeta is advanced with the step-averaged
// boundary mismatch, and the plant sees the step-averaged zeta. The averaged
// mismatch solves a scalar linear equation in closed form. This makes the
// discrete error energy F = 1/2 ||w~||^2 + |b|/2 zeta~^2 non-increasing at
// every step whenever dt <= dx^2 / (2 + c1 dx), instead of only up to O(dt^2).

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "heatadapt/analysis.hpp"
#include "heatadapt/control.hpp"
#include "heatadapt/domain.hpp"
#include "heatadapt/fdm.hpp"

namespace heatadapt::scenarios {

using Signal = std::function<double(double)>;

/// Runs stop (and are marked) once ||w|| passes this value.
inline constexpr double kBlowUpNorm = 1e12;

/// w(x, 0) = q x - 1.
inline GridFunction paper_initial_state(const Grid& grid, double q) {
    return GridFunction::sample(grid, [q](double x) { return q * x - 1.0; });
}

namespace detail {

struct BoundaryCoupling {
    double zeta_next;
    double zeta_mid;
    double innovation;  // step-averaged boundary mismatch fed to the update law
};

// `predicted_mismatch` is the boundary mismatch after one step in which the
// plant receives no actuation and the observer omits its u0 term. The true
// end-of-step mismatch is predicted + g*u0*(b*zeta_mid - 1) with g = 2 dt/dx.
inline BoundaryCoupling couple_boundary(double predicted_mismatch, double zeta, double u0, const Params& p,
                                        double dt, double dx) {
    const double g = 2.0 * dt / dx;
    const double kappa = 0.25 * g * std::abs(p.b()) * u0 * u0 * dt;
    const double innovation = (predicted_mismatch + 0.5 * g * u0 * (p.b() * zeta - 1.0)) / (1.0 + kappa);
    const double next = control::zeta_step(zeta, p.sign_b(), innovation, u0, dt);
    return {next, 0.5 * (zeta + next), innovation};
}

inline void fill_energies(Sample& s, const GridFunction& error, double zeta_tilde, double b) {
    const auto e = analysis::energies(error, zeta_tilde, b);
    s.obs_err_norm = std::sqrt(2.0 * e.E);
    s.E = e.E;
    s.F = e.F;
    s.V = e.V;
    s.zeta_tilde = zeta_tilde;
}

// Shared loop for the observer, stabilization and tracking runs.
struct CoupledSetup {
    std::string name;
    std::optional<Signal> external_u0;       // absent: u0 from the observer
    std::optional<ReferenceSignal> reference;  // present: tracking
};

inline Trace run_coupled(const Params& p, const SimConfig& cfg, GridFunction w, GridFunction what, double zeta,
                         const CoupledSetup& setup) {
    const Grid& grid = cfg.grid();
    if (!(w.grid() == grid) || !(what.grid() == grid)) {
        throw Error(ErrorCode::GridMismatch, "initial data must live on the configured grid");
    }
    const auto est = p.estimator();
    const double q = p.q();
    const double b = p.b();
    const double c1 = p.c1();
    const double dt = cfg.dt();
    const double dx = cfg.dx();
    const int J = cfg.servo_truncation();
    const bool tracking = setup.reference.has_value();

    auto servo_at = [&](double t) {
        return tracking ? control::servo_boundary(*setup.reference, q, t, J) : control::ServoTerms{};
    };

    Trace trace(setup.name);
    const std::size_t steps = cfg.steps();
    const std::size_t stride = cfg.sample_stride();
    const std::size_t snap = cfg.snapshot_stride();
    control::ServoTerms servo = servo_at(0.0);
    double dissipated = 0.0;

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double r = tracking ? setup.reference->value(t) : 0.0;
        const double u0 = setup.external_u0 ? (*setup.external_u0)(t)
                                            : control::adaptive_u0(what, est, tracking ? std::optional(servo)
                                                                                       : std::nullopt);
        const double innovation = w.right() - servo.v1 - what.right();
        const double wnorm = fdm::l2_norm(w);
        const bool last = k == steps;
        const bool blown = wnorm > kBlowUpNorm;

        std::optional<BoundaryCoupling> coupling;
        control::ServoTerms next_servo;
        if (!last && !blown) {
            next_servo = servo_at(t + dt);
            const double predicted = fdm::right_node_after_step(w, 0.0, dt) - next_servo.v1 -
                                     fdm::right_node_after_step(what, c1 * innovation - servo.vx1, dt);
            coupling = couple_boundary(predicted, zeta, u0, p, dt, dx);
        }

        if (k % stride == 0 || last || blown) {
            Sample s;
            s.t = t;
            s.u0 = u0;
            s.u = (coupling ? coupling->zeta_mid : zeta) * u0;
            s.zeta = zeta;
            s.w0 = w.left();
            s.w1 = w.right();
            s.wnorm = wnorm;
            s.what_norm = fdm::l2_norm(what);
            s.ref = r;
            s.v1 = servo.v1;
            s.vx1 = servo.vx1;
            s.dissipated = dissipated;
            if (tracking) {
                const auto v = control::servo_profile(*setup.reference, q, grid, t, J);
                fill_energies(s, w - v - what, 1.0 / b - zeta, b);
            } else {
                fill_energies(s, w - what, 1.0 / b - zeta, b);
            }
            trace.push(s);
        }
        if (snap > 0 && k % snap == 0) trace.add_snapshot(Snapshot{t, w, what});
        if (blown) trace.mark_blow_up(t);
        if (last || blown) {
            trace.set_final(FinalState{t, w, what, zeta});
            break;
        }

        if (!tracking) {
            const GridFunction err = w - what;
            dissipated += dt * (fdm::gradient_energy(err) + c1 * innovation * innovation);
        }
        GridFunction w_next = fdm::step_heat(w, {-q * w.left(), b * coupling->zeta_mid * u0}, dt);
        GridFunction what_next =
            fdm::step_heat(what, {-q * (w.left() - r), u0 + c1 * innovation - servo.vx1}, dt);
        w = std::move(w_next);
        what = std::move(what_next);
        zeta = coupling->zeta_next;
        servo = next_servo;
    }
    return trace;
}

}  // namespace detail

/// Plant with u = 0. Stops with a blow-up marker once ||w|| > kBlowUpNorm.
inline Trace run_open_loop(const Params& p, const SimConfig& cfg, const GridFunction& w0) {
    if (!(w0.grid() == cfg.grid())) throw Error(ErrorCode::GridMismatch, "initial state must live on the grid");
    const double dt = cfg.dt();
    const std::size_t steps = cfg.steps();
    const std::size_t stride = cfg.sample_stride();
    const std::size_t snap = cfg.snapshot_stride();
    const GridFunction zero = GridFunction::zeros(cfg.grid());

    Trace trace("open-loop");
    GridFunction w = w0;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double wnorm = fdm::l2_norm(w);
        const bool last = k == steps;
        const bool blown = wnorm > kBlowUpNorm;
        if (k % stride == 0 || last || blown) {
            Sample s;
            s.t = t;
            s.w0 = w.left();
            s.w1 = w.right();
            s.wnorm = wnorm;
            trace.push(s);
        }
        if (snap > 0 && k % snap == 0) trace.add_snapshot(Snapshot{t, w, zero});
        if (blown) trace.mark_blow_up(t);
        if (last || blown) {
            trace.set_final(FinalState{t, w, zero, 0.0});
            break;
        }
        w = fdm::step_heat(w, {-p.q() * w.left(), 0.0}, dt);
    }
    return trace;
}

/// Plant under u = zeta * u0(t) together with the observer and update law.
inline Trace run_observer(const Params& p, const SimConfig& cfg, const GridFunction& w0, const GridFunction& what0,
                          double zeta0, const Signal& u0) {
    return detail::run_coupled(p, cfg, w0, what0, zeta0, {"observer", u0, std::nullopt});
}

/// Observer-based stabilizer: u0 computed from w^ by control::adaptive_u0.
inline Trace run_stabilization(const Params& p, const SimConfig& cfg, const GridFunction& w0,
                               const GridFunction& what0, double zeta0) {
    return detail::run_coupled(p, cfg, w0, what0, zeta0, {"stabilize", std::nullopt, std::nullopt});
}

/// Output tracking of w(0, t) -> r(t) through the servo-shifted observer z^.
inline Trace run_tracking(const Params& p, const SimConfig& cfg, const GridFunction& w0, const GridFunction& zhat0,
                          double zeta0, const ReferenceSignal& ref) {
    return detail::run_coupled(p, cfg, w0, zhat0, zeta0, {"track", std::nullopt, ref});
}

/// Direct simulation of the observation-error dynamics
///   w~_t = w~_xx, w~_x(0) = 0, w~_x(1) = -b zeta~ u0 - c1 w~(1),
///   zeta~' = sign(b) u0 w~(1),
/// with the same arithmetic as the coupled loops.
inline Trace run_error_system(const Params& p, const SimConfig& cfg, const GridFunction& wtilde0,
                              double zetatilde0, const Signal& u0) {
    if (!(wtilde0.grid() == cfg.grid())) throw Error(ErrorCode::GridMismatch, "initial error must live on the grid");
    const double b = p.b();
    const double c1 = p.c1();
    const double dt = cfg.dt();
    const double g = 2.0 * dt / cfg.dx();
    const std::size_t steps = cfg.steps();
    const std::size_t stride = cfg.sample_stride();
    const std::size_t snap = cfg.snapshot_stride();
    const GridFunction zero = GridFunction::zeros(cfg.grid());

    Trace trace("error-system");
    GridFunction wt = wtilde0;
    double zt = zetatilde0;
    double dissipated = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double u = u0(t);
        const bool last = k == steps;

        double zt_next = zt;
        double zt_mid = zt;
        if (!last) {
            const double predicted = fdm::right_node_after_step(wt, -c1 * wt.right(), dt);
            const double kappa = 0.25 * g * std::abs(b) * u * u * dt;
            const double innovation = (predicted - 0.5 * g * u * b * zt) / (1.0 + kappa);
            zt_next = control::zeta_step(zt, -p.sign_b(), innovation, u, dt);
            zt_mid = 0.5 * (zt + zt_next);
        }
        if (k % stride == 0 || last) {
            Sample s;
            s.t = t;
            s.u0 = u;
            s.zeta = 1.0 / b - zt;
            s.u = (1.0 / b - zt_mid) * u;
            s.w0 = wt.left();
            s.w1 = wt.right();
            detail::fill_energies(s, wt, zt, b);
            s.wnorm = s.obs_err_norm;
            s.dissipated = dissipated;
            trace.push(s);
        }
        if (snap > 0 && k % snap == 0) trace.add_snapshot(Snapshot{t, wt, zero});
        if (last) {
            trace.set_final(FinalState{t, wt, zero, 1.0 / b - zt});
            break;
        }
        dissipated += dt * (fdm::gradient_energy(wt) + c1 * wt.right() * wt.right());
        wt = fdm::step_heat(wt, {0.0, -b * zt_mid * u - c1 * wt.right()}, dt);
        zt = zt_next;
    }
    return trace;
}

}  // namespace heatadapt::scenarios
