#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "support.hpp"

namespace heatadapt {
namespace {

using testing::Gen;

TEST(ValidateConfig, PaperDefaultsAreAccepted) {
    EXPECT_FALSE(validate_config(ParamValues{}, ConfigValues{}).has_value());
}

TEST(ValidateConfig, TimeStepAboveStabilityLimitIsRejected) {
    ConfigValues c;
    c.dt = 3e-4;
    const auto f = validate_config(ParamValues{}, c);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->code, ErrorCode::CflViolation);
    EXPECT_EQ(f->field, "dt");
}

TEST(ValidateConfig, StepExactlyAtLimitIsAccepted) {
    ConfigValues c;
    c.dt = 0.02 * 0.02 / 2.0;
    EXPECT_FALSE(validate_config(ParamValues{}, c).has_value());
}

TEST(ValidateConfig, SignDisagreementIsRejected) {
    ParamValues p;
    p.b = -10.0;
    p.sign_b = 1;
    const auto f = validate_config(p, ConfigValues{});
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->code, ErrorCode::SignMismatch);
}

TEST(ValidateConfig, GainsMustBePositive) {
    for (double bad : {0.0, -1.0, std::numeric_limits<double>::quiet_NaN()}) {
        ParamValues p;
        p.q = bad;
        EXPECT_EQ(validate_config(p, ConfigValues{})->field, "q");
        p = ParamValues{};
        p.c0 = bad;
        EXPECT_EQ(validate_config(p, ConfigValues{})->code, ErrorCode::NonPositiveGain);
        p = ParamValues{};
        p.c1 = bad;
        EXPECT_EQ(validate_config(p, ConfigValues{})->field, "c1");
    }
}

TEST(ValidateConfig, ZeroControlCoefficientIsRejected) {
    ParamValues p;
    p.b = 0.0;
    EXPECT_EQ(validate_config(p, ConfigValues{})->code, ErrorCode::ZeroCoefficient);
}

TEST(ValidateConfig, HorizonAndWindowChecks) {
    ConfigValues c;
    c.t_final = 0.5e-4;
    EXPECT_EQ(validate_config(ParamValues{}, c)->field, "t_final");
    c = ConfigValues{};
    c.pe_tau = 6.0;
    EXPECT_EQ(validate_config(ParamValues{}, c)->field, "pe_tau");
    c = ConfigValues{};
    c.sample_stride = 0;
    EXPECT_EQ(validate_config(ParamValues{}, c)->field, "sample_stride");
    c = ConfigValues{};
    c.dx = 0.03;
    EXPECT_EQ(validate_config(ParamValues{}, c)->code, ErrorCode::InvalidGrid);
}

TEST(ValidateConfig, RandomInvalidParametersNeverEscape) {
    Gen gen(11);
    for (int i = 0; i < 500; ++i) {
        ParamValues p;
        p.q = gen.uniform(-2.0, 2.0);
        p.b = gen.coin() ? 0.0 : gen.uniform(-5.0, 5.0);
        p.sign_b = gen.coin() ? 1 : -1;
        p.c0 = gen.uniform(-1.0, 3.0);
        p.c1 = gen.uniform(-1.0, 3.0);
        const bool valid = p.q > 0 && p.b != 0 && p.c0 > 0 && p.c1 > 0 && ((p.b > 0) == (p.sign_b > 0));
        EXPECT_EQ(!validate_config(p, ConfigValues{}).has_value(), valid);
        if (valid) {
            EXPECT_NO_THROW(Params::make(p));
        } else {
            EXPECT_THROW(Params::make(p), Error);
        }
    }
}

TEST(Params, EstimatorViewCarriesOnlyTheSign) {
    const Params p = testing::paper_params();
    const EstimatorView est = p.estimator();
    EXPECT_EQ(est.sign_b(), -1);
    EXPECT_EQ(est.q(), 2.0);
    EXPECT_EQ(est.c0(), 5.0);
    EXPECT_EQ(est.c1(), 5.0);
}

TEST(Grid, EndpointsAreExact) {
    for (std::size_t n : {3u, 51u, 101u, 1001u}) {
        const Grid g = Grid::with_nodes(n);
        EXPECT_EQ(g.node(0), 0.0);
        EXPECT_EQ(g.node(n - 1), 1.0);
        EXPECT_NEAR(g.dx() * static_cast<double>(n - 1), 1.0, 4 * std::numeric_limits<double>::epsilon());
    }
}

TEST(Grid, NodesWithinTwoUlpOfExactFraction) {
    Gen gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(gen.integer(3, 2000));
        const Grid g = Grid::with_nodes(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double exact = static_cast<double>(i) / static_cast<double>(n - 1);
            const double ulp = std::nextafter(exact, 2.0) - exact;
            EXPECT_LE(std::abs(g.node(i) - exact), 2 * ulp) << "n=" << n << " i=" << i;
        }
    }
}

TEST(Grid, SpacingMustDivideTheUnitInterval) {
    EXPECT_EQ(Grid::with_spacing(0.02).size(), 51u);
    EXPECT_EQ(Grid::with_spacing(0.01).size(), 101u);
    EXPECT_THROW(Grid::with_spacing(0.03), Error);
    EXPECT_THROW(Grid::with_spacing(0.0), Error);
    EXPECT_THROW(Grid::with_nodes(2), Error);
}

TEST(GridFunction, RejectsNonFiniteValuesAndWrongLength) {
    const Grid g = Grid::with_nodes(5);
    std::vector<double> v(5, 1.0);
    v[2] = std::numeric_limits<double>::infinity();
    try {
        GridFunction(g, v);
        FAIL() << "accepted an infinite value";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteState);
    }
    try {
        GridFunction(g, std::vector<double>(4, 0.0));
        FAIL() << "accepted a short vector";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
    }
}

TEST(GridFunction, ArithmeticIsPointwise) {
    const Grid g = Grid::with_nodes(11);
    const auto f = GridFunction::sample(g, [](double x) { return x; });
    const auto h = GridFunction::constant(g, 2.0);
    const auto s = f + h;
    const auto d = f - h;
    const auto m = 3.0 * f;
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_DOUBLE_EQ(s[i], g.node(i) + 2.0);
        EXPECT_DOUBLE_EQ(d[i], g.node(i) - 2.0);
        EXPECT_DOUBLE_EQ(m[i], 3.0 * g.node(i));
    }
    EXPECT_THROW(f + GridFunction::zeros(Grid::with_nodes(12)), Error);
    EXPECT_DOUBLE_EQ(d.max_abs(), 2.0);
}

TEST(ReferenceSignal, ConstantHasNoHigherDerivatives) {
    const auto r = ReferenceSignal::constant(3.0);
    for (double t : {0.0, 0.7, 12.0}) {
        EXPECT_EQ(r.derivative(0, t), 3.0);
        for (int j = 1; j < 10; ++j) EXPECT_EQ(r.derivative(j, t), 0.0);
    }
    EXPECT_TRUE(r.uniformly_bounded());
    EXPECT_EQ(r.describe(), "const:3");
}

TEST(ReferenceSignal, SinusoidDerivativesCycle) {
    const double a = 0.5;
    const double w = 0.8;
    const auto r = ReferenceSignal::sinusoid(a, w);
    const double t = 1.3;
    EXPECT_NEAR(r.derivative(0, t), a * std::sin(w * t), 1e-15);
    EXPECT_NEAR(r.derivative(1, t), a * w * std::cos(w * t), 1e-15);
    EXPECT_NEAR(r.derivative(2, t), -a * w * w * std::sin(w * t), 1e-15);
    EXPECT_NEAR(r.derivative(3, t), -a * w * w * w * std::cos(w * t), 1e-15);
    EXPECT_NEAR(r.derivative(6, t), -a * std::pow(w, 6) * std::sin(w * t), 1e-15);
    EXPECT_TRUE(r.uniformly_bounded());
    EXPECT_FALSE(ReferenceSignal::sinusoid(1.0, 2.0).uniformly_bounded());
    EXPECT_EQ(r.describe(), "sin:0.5,0.8");
}

TEST(ReferenceSignal, DerivativeBoundDominatesSamples) {
    Gen gen(5);
    for (int i = 0; i < 200; ++i) {
        const auto r = ReferenceSignal::sinusoid(gen.uniform(-2, 2), gen.uniform(0, 1.5));
        const int j = gen.integer(0, 15);
        const double t = gen.uniform(0, 50);
        EXPECT_LE(std::abs(r.derivative(j, t)), r.derivative_bound(j) * (1 + 1e-12) + 1e-300);
    }
}

TEST(Trace, RejectsNonIncreasingTimesAndNonFiniteValues) {
    Trace tr("t");
    Sample s;
    s.t = 0.0;
    tr.push(s);
    EXPECT_THROW(tr.push(s), Error);
    s.t = 1.0;
    s.zeta = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(tr.push(s), Error);
    s.zeta = 0.0;
    tr.push(s);
    EXPECT_EQ(tr.samples().size(), 2u);
    EXPECT_EQ(tr.at(0.6).t, 1.0);
    EXPECT_EQ(tr.at(0.4).t, 0.0);
}

TEST(SimConfig, StepCountMatchesHorizon) {
    EXPECT_EQ(testing::config(5.0).steps(), 50000u);
    EXPECT_EQ(testing::config(1.0, 0.01, 2.5e-5).steps(), 40000u);
}

}  // namespace
}  // namespace heatadapt
