#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"

namespace heatadapt {
namespace {

using analysis::ModeFamily;
using testing::Gen;
using testing::kPi;

std::pair<std::vector<double>, std::vector<double>> sampled(double t_final, double step, double (*f)(double)) {
    std::vector<double> t, y;
    const auto n = static_cast<long>(std::llround(t_final / step));
    for (long k = 0; k <= n; ++k) {
        t.push_back(static_cast<double>(k) * step);
        y.push_back(f(t.back()));
    }
    return {t, y};
}

TEST(Energies, Examples) {
    const Grid g = Grid::with_spacing(0.02);
    const auto zero = analysis::energies(GridFunction::zeros(g), 0.0, -10.0);
    EXPECT_EQ(zero.E, 0.0);
    EXPECT_EQ(zero.F, 0.0);
    EXPECT_EQ(zero.V, 0.0);
    const auto one = analysis::energies(GridFunction::constant(g, 1.0), 0.0, -10.0);
    EXPECT_NEAR(one.E, 0.5, 1e-14);
    EXPECT_NEAR(one.F, 0.5, 1e-14);
    const auto param = analysis::energies(GridFunction::zeros(g), 0.2, -10.0);
    EXPECT_NEAR(param.F, 0.2, 1e-15);
    EXPECT_EQ(param.V, param.F);
}

TEST(IntegrateLinear, ExactOnPiecewiseLinearData) {
    const std::vector<double> t = {0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y = {0.0, 2.0, 2.0, 0.0};
    EXPECT_DOUBLE_EQ(analysis::integrate_linear(t, y, 0.0, 3.0), 4.0);
    EXPECT_DOUBLE_EQ(analysis::integrate_linear(t, y, 0.5, 1.5), 0.75 + 1.0);
    EXPECT_DOUBLE_EQ(analysis::integrate_linear(t, y, 1.0, 2.0), 2.0);
}

TEST(PECheck, ConstantSignalIsExciting) {
    for (double c : {2.0, -0.5, 0.01}) {
        for (double tau : {0.5, 1.0, 2.0}) {
            std::vector<double> t, y;
            for (int k = 0; k <= 1000; ++k) {
                t.push_back(k * 0.01);
                y.push_back(c);
            }
            const auto v = analysis::pe_check(t, y, tau, 1e-3, 5);
            EXPECT_TRUE(v.is_pe);
            for (double w : v.window_integrals) EXPECT_NEAR(w, c * tau, 1e-12);
        }
    }
}

TEST(PECheck, ZeroSignalIsNotExciting) {
    const auto [t, y] = sampled(10.0, 0.01, [](double) { return 0.0; });
    EXPECT_FALSE(analysis::pe_check(t, y, 1.0, 1e-3).is_pe);
}

TEST(PECheck, DecayingExponentialIsNotExciting) {
    const auto [t, y] = sampled(20.0, 0.01, [](double s) { return std::exp(-s); });
    const auto v = analysis::pe_check(t, y, 1.0, 1e-3, 5);
    EXPECT_FALSE(v.is_pe);
    ASSERT_EQ(v.window_integrals.size(), 5u);
    for (int k = 0; k < 5; ++k) {
        const double start = 15.0 + k;
        const double exact = (1.0 - std::exp(-1.0)) * std::exp(-start);
        EXPECT_NEAR(v.window_integrals[static_cast<std::size_t>(k)], exact, 1e-5 * exact);
    }
}

TEST(PECheck, SignFlipDoesNotChangeVerdict) {
    Gen gen(41);
    for (int i = 0; i < 100; ++i) {
        const double c = gen.uniform(-1e-2, 1e-2);
        const double tau = gen.uniform(0.2, 1.5);
        const double threshold = gen.uniform(1e-4, 5e-3);
        std::vector<double> t, pos, neg;
        for (int k = 0; k <= 800; ++k) {
            t.push_back(k * 0.01);
            pos.push_back(c);
            neg.push_back(-c);
        }
        EXPECT_EQ(analysis::pe_check(t, pos, tau, threshold).is_pe, analysis::pe_check(t, neg, tau, threshold).is_pe);
    }
}

TEST(PECheck, ShortTraceIsRejected) {
    const auto [t, y] = sampled(3.0, 0.01, [](double) { return 1.0; });
    try {
        (void)analysis::pe_check(t, y, 1.0, 1e-3, 5);
        FAIL() << "a 3 s trace passed a 5 s check";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientDuration);
    }
}

TEST(PiTransform, ZeroMapsToZero) {
    const Grid g = Grid::with_spacing(0.02);
    EXPECT_EQ(analysis::pi_transform(GridFunction::zeros(g), 2.0).max_abs(), 0.0);
    EXPECT_EQ(analysis::pi_inverse(GridFunction::zeros(g), 2.0).max_abs(), 0.0);
}

TEST(PiTransform, UnitMapsToExponential) {
    const Grid g = Grid::with_spacing(0.02);
    const auto out = analysis::pi_transform(GridFunction::constant(g, 1.0), 2.0);
    const auto exact = GridFunction::sample(g, [](double x) { return std::exp(2.0 * x); });
    EXPECT_LE((out - exact).max_abs(), 1e-3);
}

TEST(PiTransform, InverseOfExponentialIsUnit) {
    const Grid g = Grid::with_spacing(0.02);
    const auto back = analysis::pi_inverse(GridFunction::sample(g, [](double x) { return std::exp(2.0 * x); }), 2.0);
    EXPECT_LE((back - GridFunction::constant(g, 1.0)).max_abs(), 1e-3);
}

double composition_error(double dx, double (*f)(double)) {
    const Grid g = Grid::with_spacing(dx);
    const auto v = GridFunction::sample(g, f);
    return (analysis::pi_inverse(analysis::pi_transform(v, 2.0), 2.0) - v).max_abs();
}

TEST(PiTransform, CompositionIsSecondOrderAccurate) {
    using Fn = double (*)(double);
    const Fn fs[] = {[](double) { return 1.0; }, [](double x) { return x; }, [](double x) { return std::sin(kPi * x); }};
    for (Fn f : fs) {
        const double coarse = composition_error(0.02, f);
        const double fine = composition_error(0.01, f);
        EXPECT_LE(coarse, 1e-3);
        EXPECT_GE(coarse / fine, 3.5);
    }
}

TEST(PiTransform, CompositionErrorOnRandomProfiles) {
    Gen gen(42);
    const Grid g = Grid::with_spacing(0.01);
    for (int i = 0; i < 50; ++i) {
        const auto f = gen.field(g);
        const double q = gen.uniform(0.1, 3.0);
        EXPECT_LE((analysis::pi_inverse(analysis::pi_transform(f, q), q) - f).max_abs(), 2e-2);
    }
}

TEST(UpsilonB, Examples) {
    // Two roundings separate the round trip from 0.3.
    EXPECT_DOUBLE_EQ(analysis::upsilon_b(analysis::upsilon_b(0.3, -10.0), -10.0), 0.3);
    EXPECT_EQ(analysis::upsilon_b(analysis::upsilon_b(0.25, -4.0), -4.0), 0.25);
    EXPECT_EQ(analysis::upsilon_b(0.0, -10.0), -0.1);
    EXPECT_EQ(analysis::upsilon_b(1.0 / -10.0, -10.0), 0.0);
    EXPECT_THROW((void)analysis::upsilon_b(1.0, 0.0), Error);
}

TEST(EigenPair, FirstSineMode) {
    const auto m = analysis::eigen_pair(1);
    EXPECT_NEAR(m.phi(1.0), std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(m.lambda, kPi * kPi / 4.0, 1e-12);
    EXPECT_NEAR(m.lambda, 2.4674, 1e-4);
    EXPECT_EQ(m.phi(0.0), 0.0);
    EXPECT_NEAR(m.dphi(1.0), 0.0, 1e-14);
}

TEST(EigenPair, CosineFamilyIsNeumannAtBothEnds) {
    for (int n = 1; n <= 10; ++n) {
        const auto m = analysis::eigen_pair(n, ModeFamily::neumann_cosine);
        EXPECT_NEAR(m.dphi(0.0), 0.0, 1e-14);
        EXPECT_NEAR(m.dphi(1.0), 0.0, 1e-12);
        // -phi'' = lambda phi, checked by a centred difference.
        const double x = 0.37;
        const double h = 1e-4;
        const double second = (m.phi(x + h) - 2 * m.phi(x) + m.phi(x - h)) / (h * h);
        EXPECT_NEAR(-second, m.lambda * m.phi(x), 1e-4 * (1 + m.lambda));
    }
}

TEST(EigenPair, BothFamiliesAreOrthonormalOnTheGrid) {
    const Grid g = Grid::with_spacing(0.02);
    for (auto family : {ModeFamily::dirichlet_left_sine, ModeFamily::neumann_cosine}) {
        for (int m = 1; m <= 16; ++m) {
            for (int n = 1; n <= 16; ++n) {
                const double ip = fdm::inner(analysis::eigen_pair(m, family).sampled(g),
                                             analysis::eigen_pair(n, family).sampled(g));
                EXPECT_NEAR(ip, m == n ? 1.0 : 0.0, 1e-4) << "m=" << m << " n=" << n;
            }
        }
    }
}

TEST(Galerkin, ZeroInitialDataStaysZero) {
    const Grid g = Grid::with_spacing(0.02);
    const auto tr = analysis::galerkin_error_system(8, testing::paper_params(), [](double t) { return std::exp(-t); },
                                                    GridFunction::zeros(g), 0.0, 0.5, 1e-4, 100);
    for (const auto& s : tr.samples()) {
        EXPECT_EQ(s.wnorm, 0.0);
        EXPECT_EQ(s.zeta_tilde, 0.0);
    }
}

TEST(Galerkin, UnresolvedModesAreRejected) {
    const Grid g = Grid::with_spacing(0.02);
    try {
        (void)analysis::galerkin_error_system(32, testing::paper_params(), [](double) { return 0.0; },
                                              GridFunction::zeros(g), 0.0, 0.1, 1e-4);
        FAIL() << "32 cosine modes accepted on a 51-node grid";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnresolvableMode);
    }
    EXPECT_NO_THROW((void)analysis::galerkin_error_system(16, testing::paper_params(), [](double) { return 0.0; },
                                                          GridFunction::zeros(g), 0.0, 0.1, 1e-4));
}

TEST(Galerkin, LyapunovFunctionalDecreasesAlongRandomRuns) {
    Gen gen(43);
    const Grid g = Grid::with_spacing(0.02);
    const Params p = testing::paper_params();
    for (int trial = 0; trial < 6; ++trial) {
        const auto w0 = gen.field_with_norm_at_most(g, 1.0);
        const double z0 = gen.uniform(-1, 1);
        const double c = gen.uniform(-2, 2);
        const auto tr = analysis::galerkin_error_system(gen.integer(1, 16), p, [c](double t) { return c * std::cos(t); },
                                                        w0, z0, 0.5, 1e-4);
        const auto& s = tr.samples();
        for (std::size_t k = 1; k < s.size(); ++k) EXPECT_LE(s[k].F, s[k - 1].F + 1e-8);
        // Dissipation accounts for the energy lost. The residual is the time
        // quadrature of a rate whose top mode decays like e^{-2 lambda_N t}.
        EXPECT_NEAR(s.front().F - s.back().F, s.back().dissipated, 1e-4 * s.front().F + 1e-12);
    }
}

TEST(Galerkin, ZetaStaysInsideEnergyBall) {
    const Grid g = Grid::with_spacing(0.02);
    const Params p = testing::paper_params();
    const auto w0 = GridFunction::sample(g, [](double x) { return 2 * x - 1; });
    const auto tr = analysis::galerkin_error_system(16, p, [](double) { return 1.0; }, w0, 0.1, 2.0, 1e-4, 10);
    const double radius = std::sqrt(2.0 * tr.samples().front().F / 10.0);
    for (const auto& s : tr.samples()) EXPECT_LE(std::abs(s.zeta_tilde), radius + 1e-12);
}

Trace synthetic(double t_final, double step, double (*zeta)(double), double (*norm)(double)) {
    Trace tr("synthetic");
    const auto n = static_cast<long>(std::llround(t_final / step));
    for (long k = 0; k <= n; ++k) {
        Sample s;
        s.t = static_cast<double>(k) * step;
        s.zeta = zeta(s.t);
        s.wnorm = norm(s.t);
        s.obs_err_norm = norm(s.t);
        tr.push(s);
    }
    return tr;
}

TEST(LimitDiagnostics, ConstantTraceHasZeroGaps) {
    const auto tr = synthetic(4.0, 0.01, [](double) { return -0.1; }, [](double) { return 2.0; });
    const auto lim = analysis::limit_diagnostics(tr, 1.0);
    for (const auto& q : lim.quantities) {
        EXPECT_EQ(q.gap, 0.0);
        EXPECT_TRUE(q.converged);
    }
    EXPECT_EQ(lim.get("zeta").terminal, -0.1);
    EXPECT_TRUE(lim.all_converged());
}

TEST(LimitDiagnostics, DecayingEstimateGapMatchesClosedForm) {
    const auto tr = synthetic(10.0, 0.01, [](double t) { return 0.1 * std::exp(-t); }, [](double) { return 0.0; });
    const auto lim = analysis::limit_diagnostics(tr, 1.0, 1e-3);
    const auto& z = lim.get("zeta");
    EXPECT_LE(z.gap, 0.1 * std::exp(-9.0) + 1e-15);
    EXPECT_NEAR(z.gap, 0.1 * (std::exp(-9.0) - std::exp(-10.0)), 1e-15);
    EXPECT_TRUE(z.converged);
}

TEST(LimitDiagnostics, BlowUpIsNeverConverged) {
    ParamValues pv;
    const Params p = Params::make(pv);
    ConfigValues cv;
    cv.t_final = 40.0;
    const auto cfg = SimConfig::make(cv);
    const auto tr = scenarios::run_open_loop(p, cfg, scenarios::paper_initial_state(cfg.grid(), 2.0));
    ASSERT_TRUE(tr.blew_up());
    const auto lim = analysis::limit_diagnostics(tr, 1.0);
    EXPECT_FALSE(lim.get("wnorm").converged);
}

TEST(LimitDiagnostics, ShortTraceIsRejected) {
    const auto tr = synthetic(1.5, 0.01, [](double) { return 0.0; }, [](double) { return 0.0; });
    EXPECT_THROW((void)analysis::limit_diagnostics(tr, 1.0), Error);
}

}  // namespace
}  // namespace heatadapt
