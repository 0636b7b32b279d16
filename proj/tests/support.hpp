#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "heatadapt/heatadapt.hpp"

namespace heatadapt::testing {

inline constexpr double kPi = std::numbers::pi;

/// Seeded source for property tests. Every property test names its seed so a
/// failure can be replayed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Smooth random profile: a few cosine and sine modes plus an affine part.
    GridFunction field(const Grid& grid, double scale = 1.0) {
        const int modes = integer(1, 5);
        std::vector<double> a(modes), k(modes), phase(modes);
        for (int m = 0; m < modes; ++m) {
            a[m] = uniform(-1.0, 1.0);
            k[m] = integer(0, 6);
            phase[m] = uniform(0.0, kPi);
        }
        const double slope = uniform(-1.0, 1.0);
        return GridFunction::sample(grid, [&](double x) {
            double v = slope * x;
            for (int m = 0; m < modes; ++m) v += a[m] * std::cos(k[m] * kPi * x + phase[m]);
            return scale * v;
        });
    }

    /// Random profile rescaled to an L2 norm drawn from [0, max_norm].
    GridFunction field_with_norm_at_most(const Grid& grid, double max_norm) {
        const GridFunction f = field(grid);
        const double n = fdm::l2_norm(f);
        const double target = uniform(0.0, max_norm);
        return n > 0.0 ? (target / n) * f : f;
    }

private:
    std::mt19937_64 rng_;
};

inline Params paper_params() { return Params::make(ParamValues{}); }

inline SimConfig config(double t_final, double dx = 0.02, double dt = 1e-4, long long stride = 1) {
    ConfigValues c;
    c.dx = dx;
    c.dt = dt;
    c.t_final = t_final;
    c.pe_tau = std::min(1.0, t_final);
    c.sample_stride = stride;
    return SimConfig::make(c);
}

}  // namespace heatadapt::testing
