#pragma once

// Core value types shared by every module: physical parameters with their
// plant/estimator views, the uniform grid on [0, 1], sampled profiles,
// simulation settings, reference signals and the recorded trace.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatadapt/error.hpp"

namespace heatadapt {

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

class Grid {
public:
    /// Uniform grid with `n` nodes; x_0 = 0 and x_{n-1} = 1.
    static Grid with_nodes(std::size_t n) {
        if (n < 3) {
            throw Error(ErrorCode::InvalidGrid, "grid needs at least 3 nodes, got " + std::to_string(n));
        }
        return Grid(n);
    }

    /// Grid whose spacing is `dx`; 1/dx must be an integer (within 1e-9).
    static Grid with_spacing(double dx) {
        if (!(dx > 0.0) || !std::isfinite(dx) || dx > 0.5) {
            throw Error(ErrorCode::InvalidGrid, "dx must lie in (0, 0.5], got " + std::to_string(dx));
        }
        const double intervals = 1.0 / dx;
        const double rounded = std::round(intervals);
        if (std::abs(rounded * dx - 1.0) > 1e-9) {
            throw Error(ErrorCode::InvalidGrid, "1/dx is not an integer for dx = " + std::to_string(dx));
        }
        return with_nodes(static_cast<std::size_t>(rounded) + 1);
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] std::size_t intervals() const noexcept { return n_ - 1; }

    [[nodiscard]] double node(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(n_ - 1);
    }

    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> x(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
        return x;
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.n_ == b.n_; }

private:
    explicit Grid(std::size_t n) : n_(n), dx_(1.0 / static_cast<double>(n - 1)) {}

    std::size_t n_;
    double dx_;
};

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

/// A real profile sampled on every node of a Grid. Values are always finite.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw Error(ErrorCode::GridMismatch, "profile has " + std::to_string(values_.size()) +
                                                     " samples but the grid has " + std::to_string(grid_.size()) +
                                                     " nodes");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw Error(ErrorCode::NonFiniteState, "non-finite value at node " + std::to_string(i));
            }
        }
    }

    static GridFunction zeros(Grid grid) { return GridFunction(grid, std::vector<double>(grid.size(), 0.0)); }

    static GridFunction constant(Grid grid, double c) {
        return GridFunction(grid, std::vector<double>(grid.size(), c));
    }

    template <typename F>
    static GridFunction sample(Grid grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
        return GridFunction(grid, std::move(v));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double left() const noexcept { return values_.front(); }
    [[nodiscard]] double right() const noexcept { return values_.back(); }

    [[nodiscard]] double max_abs() const noexcept {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
        return combine(a, b, [](double x, double y) { return x + y; });
    }
    friend GridFunction operator-(const GridFunction& a, const GridFunction& b) {
        return combine(a, b, [](double x, double y) { return x - y; });
    }
    friend GridFunction operator*(double s, const GridFunction& a) {
        std::vector<double> v(a.values_);
        for (double& x : v) x *= s;
        return GridFunction(a.grid_, std::move(v));
    }

private:
    template <typename Op>
    static GridFunction combine(const GridFunction& a, const GridFunction& b, Op op) {
        if (!(a.grid_ == b.grid_)) throw Error(ErrorCode::GridMismatch, "operands live on different grids");
        std::vector<double> v(a.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a.values_[i], b.values_[i]);
        return GridFunction(a.grid_, std::move(v));
    }

    Grid grid_;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Unchecked parameter values as they arrive from a user or config file.
struct ParamValues {
    double q = 2.0;
    double b = -10.0;
    int sign_b = -1;
    double c0 = 5.0;
    double c1 = 5.0;
};

/// Unchecked discretization and run settings.
struct ConfigValues {
    double dx = 0.02;
    double dt = 1e-4;
    double t_final = 5.0;
    int servo_truncation = 12;
    double pe_tau = 1.0;
    double pe_threshold = 1e-3;
    int pe_windows = 5;
    long long sample_stride = 100;
    long long snapshot_stride = 0;
};

struct ValidationFailure {
    ErrorCode code;
    std::string field;
    std::string message;
};

namespace detail {

inline std::optional<ValidationFailure> check_params(const ParamValues& p) {
    auto fail = [](ErrorCode c, std::string f, std::string m) {
        return std::optional<ValidationFailure>(ValidationFailure{c, std::move(f), std::move(m)});
    };
    if (!std::isfinite(p.q) || !(p.q > 0.0)) return fail(ErrorCode::NonPositiveGain, "q", "q must be > 0");
    if (!std::isfinite(p.b) || p.b == 0.0) return fail(ErrorCode::ZeroCoefficient, "b", "b must be nonzero");
    if (!std::isfinite(p.c0) || !(p.c0 > 0.0)) return fail(ErrorCode::NonPositiveGain, "c0", "c0 must be > 0");
    if (!std::isfinite(p.c1) || !(p.c1 > 0.0)) return fail(ErrorCode::NonPositiveGain, "c1", "c1 must be > 0");
    if (p.sign_b != 1 && p.sign_b != -1) return fail(ErrorCode::SignMismatch, "sign_b", "sign_b must be +1 or -1");
    if ((p.b > 0.0 ? 1 : -1) != p.sign_b) {
        return fail(ErrorCode::SignMismatch, "sign_b", "sign_b disagrees with the sign of b");
    }
    return std::nullopt;
}

inline std::optional<ValidationFailure> check_config(const ConfigValues& c) {
    auto fail = [](ErrorCode code, std::string f, std::string m) {
        return std::optional<ValidationFailure>(ValidationFailure{code, std::move(f), std::move(m)});
    };
    double dx = 0.0;
    try {
        dx = Grid::with_spacing(c.dx).dx();
    } catch (const Error& e) {
        return fail(ErrorCode::InvalidGrid, "dx", e.what());
    }
    if (!std::isfinite(c.dt) || !(c.dt > 0.0)) return fail(ErrorCode::InvalidConfig, "dt", "dt must be > 0");
    const double cfl = dx * dx / 2.0;
    if (c.dt > cfl * (1.0 + 1e-12)) {
        return fail(ErrorCode::CflViolation, "dt",
                    "dt = " + std::to_string(c.dt) + " exceeds dx^2/2 = " + std::to_string(cfl));
    }
    if (!std::isfinite(c.t_final) || c.t_final < c.dt) {
        return fail(ErrorCode::InvalidConfig, "t_final", "t_final must be >= dt");
    }
    if (c.servo_truncation < 0) return fail(ErrorCode::InvalidConfig, "servo_truncation", "J must be >= 0");
    if (!std::isfinite(c.pe_tau) || !(c.pe_tau > 0.0)) {
        return fail(ErrorCode::InvalidConfig, "pe_tau", "PE window must be > 0");
    }
    if (c.pe_tau > c.t_final) return fail(ErrorCode::InvalidConfig, "pe_tau", "PE window exceeds t_final");
    if (!std::isfinite(c.pe_threshold) || !(c.pe_threshold > 0.0)) {
        return fail(ErrorCode::InvalidConfig, "pe_threshold", "PE threshold must be > 0");
    }
    if (c.pe_windows < 1) return fail(ErrorCode::InvalidConfig, "pe_windows", "need at least one PE window");
    if (c.sample_stride < 1) return fail(ErrorCode::InvalidConfig, "sample_stride", "sample stride must be >= 1");
    if (c.snapshot_stride < 0) {
        return fail(ErrorCode::InvalidConfig, "snapshot_stride", "snapshot stride must be >= 0");
    }
    return std::nullopt;
}

inline void throw_if(const std::optional<ValidationFailure>& f) {
    if (f) throw Error(f->code, f->field + ": " + f->message);
}

}  // namespace detail

/// The controller/observer side of the parameters: everything except b.
class EstimatorView {
public:
    static EstimatorView make(double q, int sign_b, double c0, double c1) {
        // Reuse the full check with a stand-in b of the declared sign.
        ParamValues v{q, sign_b > 0 ? 1.0 : -1.0, sign_b, c0, c1};
        detail::throw_if(detail::check_params(v));
        return EstimatorView(q, sign_b, c0, c1);
    }

    [[nodiscard]] double q() const noexcept { return q_; }
    [[nodiscard]] int sign_b() const noexcept { return sign_b_; }
    [[nodiscard]] double c0() const noexcept { return c0_; }
    [[nodiscard]] double c1() const noexcept { return c1_; }

private:
    EstimatorView(double q, int sign_b, double c0, double c1) : q_(q), sign_b_(sign_b), c0_(c0), c1_(c1) {}

    double q_;
    int sign_b_;
    double c0_;
    double c1_;
};

/// Full (plant-side) parameters. Only simulation code of the plant and the
/// known-b reference controller may read b; estimator paths take an
/// EstimatorView instead.
class Params {
public:
    static Params make(const ParamValues& v) {
        detail::throw_if(detail::check_params(v));
        return Params(v);
    }

    [[nodiscard]] double q() const noexcept { return v_.q; }
    [[nodiscard]] double b() const noexcept { return v_.b; }
    [[nodiscard]] int sign_b() const noexcept { return v_.sign_b; }
    [[nodiscard]] double c0() const noexcept { return v_.c0; }
    [[nodiscard]] double c1() const noexcept { return v_.c1; }
    [[nodiscard]] const ParamValues& values() const noexcept { return v_; }

    [[nodiscard]] EstimatorView estimator() const { return EstimatorView::make(v_.q, v_.sign_b, v_.c0, v_.c1); }

private:
    explicit Params(const ParamValues& v) : v_(v) {}
    ParamValues v_;
};

class SimConfig {
public:
    static SimConfig make(const ConfigValues& v) {
        detail::throw_if(detail::check_config(v));
        return SimConfig(v);
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] double dx() const noexcept { return grid_.dx(); }
    [[nodiscard]] double dt() const noexcept { return v_.dt; }
    [[nodiscard]] double t_final() const noexcept { return v_.t_final; }
    [[nodiscard]] int servo_truncation() const noexcept { return v_.servo_truncation; }
    [[nodiscard]] double pe_tau() const noexcept { return v_.pe_tau; }
    [[nodiscard]] double pe_threshold() const noexcept { return v_.pe_threshold; }
    [[nodiscard]] int pe_windows() const noexcept { return v_.pe_windows; }
    [[nodiscard]] std::size_t sample_stride() const noexcept { return static_cast<std::size_t>(v_.sample_stride); }
    [[nodiscard]] std::size_t snapshot_stride() const noexcept {
        return static_cast<std::size_t>(v_.snapshot_stride);
    }
    [[nodiscard]] const ConfigValues& values() const noexcept { return v_; }

    /// Number of time steps; t_k = k * dt.
    [[nodiscard]] std::size_t steps() const noexcept {
        return static_cast<std::size_t>(std::llround(v_.t_final / v_.dt));
    }

private:
    explicit SimConfig(const ConfigValues& v) : v_(v), grid_(Grid::with_spacing(v.dx)) {}

    ConfigValues v_;
    Grid grid_;
};

/// Returns the first violated invariant, or nothing when both value sets are usable.
inline std::optional<ValidationFailure> validate_config(const ParamValues& p, const ConfigValues& c) {
    if (auto f = detail::check_params(p)) return f;
    return detail::check_config(c);
}

// ---------------------------------------------------------------------------
// Reference signals
// ---------------------------------------------------------------------------

class ReferenceSignal {
public:
    enum class Kind { zero, constant, sinusoid, custom };

    /// j-th time derivative of r at time t.
    using DerivativeFn = std::function<double(int, double)>;

    static ReferenceSignal zero() { return ReferenceSignal(Kind::zero, 0.0, 0.0); }
    static ReferenceSignal constant(double r) {
        if (!std::isfinite(r)) throw Error(ErrorCode::InvalidConfig, "constant reference must be finite");
        return ReferenceSignal(Kind::constant, r, 0.0);
    }
    /// r(t) = amplitude * sin(omega * t).
    static ReferenceSignal sinusoid(double amplitude, double omega) {
        if (!std::isfinite(amplitude) || !std::isfinite(omega) || omega < 0.0) {
            throw Error(ErrorCode::InvalidConfig, "sinusoid needs finite amplitude and omega >= 0");
        }
        return ReferenceSignal(Kind::sinusoid, amplitude, omega);
    }
    /// User-supplied reference. `derivative_bound(j)` may return +inf when unknown.
    static ReferenceSignal custom(DerivativeFn derivative, std::function<double(int)> derivative_bound,
                                  std::string label = "custom") {
        ReferenceSignal r(Kind::custom, 0.0, 0.0);
        r.custom_ = std::move(derivative);
        r.custom_bound_ = std::move(derivative_bound);
        r.label_ = std::move(label);
        return r;
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double amplitude() const noexcept { return a_; }
    [[nodiscard]] double omega() const noexcept { return omega_; }

    [[nodiscard]] double value(double t) const { return derivative(0, t); }

    [[nodiscard]] double derivative(int j, double t) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::constant: return j == 0 ? a_ : 0.0;
            case Kind::sinusoid: {
                // d^j/dt^j sin(wt) = w^j sin(wt + j*pi/2); use the exact quarter-turn cycle.
                const double scale = a_ * std::pow(omega_, j);
                switch (j % 4) {
                    case 0: return scale * std::sin(omega_ * t);
                    case 1: return scale * std::cos(omega_ * t);
                    case 2: return -scale * std::sin(omega_ * t);
                    default: return -scale * std::cos(omega_ * t);
                }
            }
            case Kind::custom: return custom_(j, t);
        }
        return 0.0;
    }

    /// sup over t >= 0 of |r^(j)(t)|.
    [[nodiscard]] double derivative_bound(int j) const {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::constant: return j == 0 ? std::abs(a_) : 0.0;
            case Kind::sinusoid: return std::abs(a_) * std::pow(omega_, j);
            case Kind::custom:
                return custom_bound_ ? custom_bound_(j) : std::numeric_limits<double>::infinity();
        }
        return 0.0;
    }

    /// Whether sup over all t and all derivative orders is finite. Sinusoids
    /// with omega > 1 fail this even though every truncated sum is finite.
    [[nodiscard]] bool uniformly_bounded() const noexcept {
        switch (kind_) {
            case Kind::zero:
            case Kind::constant: return true;
            case Kind::sinusoid: return omega_ <= 1.0 || a_ == 0.0;
            case Kind::custom: return false;
        }
        return false;
    }

    /// Text form accepted by the CLI (`zero`, `const:R`, `sin:A,W`).
    [[nodiscard]] std::string describe() const;

private:
    ReferenceSignal(Kind k, double a, double w) : kind_(k), a_(a), omega_(w) {}

    Kind kind_;
    double a_;
    double omega_;
    DerivativeFn custom_;
    std::function<double(int)> custom_bound_;
    std::string label_;
};

namespace detail {
inline std::string shortest(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}
}  // namespace detail

inline std::string ReferenceSignal::describe() const {
    switch (kind_) {
        case Kind::zero: return "zero";
        case Kind::constant: return "const:" + detail::shortest(a_);
        case Kind::sinusoid: return "sin:" + detail::shortest(a_) + "," + detail::shortest(omega_);
        case Kind::custom: return label_;
    }
    return "zero";
}

// ---------------------------------------------------------------------------
// Trace
// ---------------------------------------------------------------------------

/// One recorded instant. Fields that a scenario does not produce stay 0.
///
/// For error-system runs (finite-difference or Galerkin) the "plant" columns
/// hold the error field: w0 = w~(0), w1 = w~(1), wnorm = ||w~||, and zeta holds
/// the equivalent estimate 1/b - zeta~.
struct Sample {
    double t = 0.0;
    double u0 = 0.0;
    double u = 0.0;
    double zeta = 0.0;
    double w0 = 0.0;
    double w1 = 0.0;
    double wnorm = 0.0;
    double obs_err_norm = 0.0;
    double E = 0.0;
    double F = 0.0;
    double V = 0.0;
    double zeta_tilde = 0.0;
    double what_norm = 0.0;
    double ref = 0.0;
    double v1 = 0.0;
    double vx1 = 0.0;
    /// Running sum of dt * (int w~_x^2 + c1 w~(1)^2) from t = 0 to this sample.
    double dissipated = 0.0;
};

struct Snapshot {
    double t;
    GridFunction w;
    GridFunction what;
};

struct FinalState {
    double t;
    GridFunction w;
    GridFunction what;
    double zeta;
};

class Trace {
public:
    Trace() = default;
    explicit Trace(std::string scenario) : scenario_(std::move(scenario)) {}

    void push(const Sample& s) {
        if (!samples_.empty() && !(s.t > samples_.back().t)) {
            throw Error(ErrorCode::InvalidConfig, "trace times must be strictly increasing");
        }
        const double fields[] = {s.t, s.u0, s.u, s.zeta, s.w0, s.w1, s.wnorm, s.obs_err_norm, s.E,
                                 s.F, s.V, s.zeta_tilde, s.what_norm, s.ref, s.v1, s.vx1, s.dissipated};
        for (double f : fields) {
            if (!std::isfinite(f)) {
                throw Error(ErrorCode::NonFiniteState, "non-finite trace value at t = " + std::to_string(s.t));
            }
        }
        samples_.push_back(s);
    }

    void add_snapshot(Snapshot s) { snapshots_.push_back(std::move(s)); }
    void set_final(FinalState f) { final_.emplace(std::move(f)); }
    void mark_blow_up(double t) {
        blew_up_ = true;
        blow_up_time_ = t;
    }

    [[nodiscard]] const std::string& scenario() const noexcept { return scenario_; }
    [[nodiscard]] const std::vector<Sample>& samples() const noexcept { return samples_; }
    [[nodiscard]] const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }
    [[nodiscard]] const std::optional<FinalState>& final_state() const noexcept { return final_; }
    [[nodiscard]] bool blew_up() const noexcept { return blew_up_; }
    [[nodiscard]] double blow_up_time() const noexcept { return blow_up_time_; }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
    [[nodiscard]] const Sample& back() const { return samples_.back(); }

    [[nodiscard]] std::vector<double> column(double Sample::*field) const {
        std::vector<double> out;
        out.reserve(samples_.size());
        for (const auto& s : samples_) out.push_back(s.*field);
        return out;
    }

    /// Sample nearest to time t.
    [[nodiscard]] const Sample& at(double t) const {
        if (samples_.empty()) throw Error(ErrorCode::InsufficientDuration, "empty trace");
        auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const Sample& s, double v) { return s.t < v; });
        if (it == samples_.end()) return samples_.back();
        if (it != samples_.begin() && (t - std::prev(it)->t) < (it->t - t)) return *std::prev(it);
        return *it;
    }

private:
    std::string scenario_;
    std::vector<Sample> samples_;
    std::vector<Snapshot> snapshots_;
    std::optional<FinalState> final_;
    bool blew_up_ = false;
    double blow_up_time_ = 0.0;
};

}  // namespace heatadapt
