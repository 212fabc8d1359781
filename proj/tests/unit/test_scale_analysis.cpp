#include "surplus/errors.hpp"
#include "surplus/scale_analysis.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using surplus::BoundaryClass;
using surplus::DriftSpec;
using surplus::PremiumSpec;

DriftSpec quadratic(double p0, double p1, double p2) { return DriftSpec{PremiumSpec::quadratic(p0, p1, p2), 0.0}; }
DriftSpec linear(double p0, double p1) { return DriftSpec{PremiumSpec::linear(p0, p1), 0.0}; }
DriftSpec power(double p1, double p2, double alpha) { return DriftSpec{PremiumSpec::power(p1, p2, alpha), 0.0}; }

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Values computed offline with mpmath at 25 digits (tests/oracles/frozen_values.py).
constexpr double kExplosionA = 0.71857070776293324844;  // p0=0 p1=0.1 p2=1 b=1 x=0.5
constexpr double kExplosionB = 0.89148352185551580809;  // p0=0 p1=0.3 p2=0.7 b=1.2 x=1.5
constexpr double kExitA = 1.0211097784436666957;        // p0=1 p1=0 p2=1 b=1 n=10 x=1
constexpr double kExitB = 0.63264072456358635227;       // p0=0.5 p1=0.2 p2=2 b=1.5 n=4 x=0.8

TEST(ScaleIntegrals, LinearI1Divergent) {
    const auto r = surplus::scale_integral_i1(linear(1.0, 1.0), std::sqrt(2.0), 1.0, 100.0);
    EXPECT_FALSE(r.finite);
}

TEST(ScaleIntegrals, LinearI1ClosedForm) {
    const auto r = surplus::scale_integral_i1(linear(0.0, 2.0), 1.0, 1.0, 10.0);
    ASSERT_TRUE(r.finite);
    EXPECT_LE(rel_err(r.value, 1.0 / 3.0), 1e-8);
}

TEST(ScaleIntegrals, LinearI1WithPremiumAgainstBoost) {
    // (x/v)^k exp{k0 (1/v - 1/x)} with k = 3, k0 = 2 p0 / b^2
    const double x = 0.7, p0 = 0.4, p1 = 1.5, b = 1.0;
    const double k = 2 * p1 / (b * b), k0 = 2 * p0 / (b * b);
    boost::math::quadrature::exp_sinh<double> es;
    const double want = es.integrate([&](double s) {
        const double v = x + s;
        return std::pow(x / v, k) * std::exp(k0 * (1 / v - 1 / x));
    });
    const auto r = surplus::scale_integral_i1(linear(p0, p1), b, x);
    ASSERT_TRUE(r.finite);
    EXPECT_LE(rel_err(r.value, want), 1e-10);
}

TEST(ScaleIntegrals, QuadraticI1AgainstBoost) {
    const double x = 0.8, p0 = 0.5, p1 = 0.2, p2 = 2.0, b = 1.5;
    const double s = 2 / (b * b);
    boost::math::quadrature::exp_sinh<double> es;
    const double want = es.integrate([&](double d) {
        const double v = x + d;
        return std::pow(x / v, s * p1) * std::exp(-s * (p2 * (v - x) + p0 * (1 / x - 1 / v)));
    });
    const auto r = surplus::scale_integral_i1(quadratic(p0, p1, p2), b, x, 1.0);
    ASSERT_TRUE(r.finite);
    EXPECT_LE(rel_err(r.value, want), 1e-10);
    EXPECT_LE(r.tail_bound, 1e-12 * r.value);
    EXPECT_GT(r.cutoff, x);
}

TEST(ScaleIntegrals, PowerI1AgainstBoost) {
    const double x = 1.2, p1 = 0.6, p2 = 0.5, alpha = 1.5, b = 1.3;
    const double s = 2 / (b * b);
    boost::math::quadrature::exp_sinh<double> es;
    auto inner = [&](double v) {
        // int_x^v (u + p2)^alpha / u^2 du by Boost tanh-sinh
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate([&](double u) { return std::pow(u + p2, alpha) / (u * u); }, x, v);
    };
    // Beyond v = x + 1e4 the density is below e^{-100}.
    const double want = es.integrate([&](double d) {
        if (d == 0) return 1.0;
        if (d > 1e4) return 0.0;
        return std::exp(-s * p1 * inner(x + d));
    });
    const auto r = surplus::scale_integral_i1(power(p1, p2, alpha), b, x);
    ASSERT_TRUE(r.finite);
    EXPECT_LE(rel_err(r.value, want), 1e-8);
}

TEST(ScaleIntegrals, I2ClosedForm) {
    const auto r = surplus::scale_integral_i2(linear(0.0, 0.25), 1.0, 1.0);
    ASSERT_TRUE(r.finite);
    EXPECT_LT(r.value, 0.0);
    EXPECT_LE(rel_err(r.value, -2.0), 1e-8);
    EXPECT_LE(rel_err(r.magnitude(), 2.0), 1e-8);
}

TEST(ScaleIntegrals, I2Divergent) {
    EXPECT_FALSE(surplus::scale_integral_i2(linear(0.1, 0.25), 1.0, 1.0).finite);
    EXPECT_FALSE(surplus::scale_integral_i2(quadratic(1e-9, 0.0, 1.0), 1.0, 1.0).finite);
    EXPECT_FALSE(surplus::scale_integral_i2(power(1.0, 0.3, 2.0), 1.0, 1.0).finite);
    EXPECT_FALSE(surplus::scale_integral_i2(linear(0.0, 0.5), 1.0, 1.0).finite);
    EXPECT_FALSE(surplus::scale_integral_i2(linear(0.0, 3.0), 1.0, 1.0).finite);
}

TEST(ScaleIntegrals, QuadraticI2AgainstIncompleteGamma) {
    // -int_0^x (x/v)^k e^{kappa (x - v)} dv = -x^k e^{kappa x} kappa^{k-1} Gamma(1-k) P(1-k, kappa x)
    const double x = 1.5, p1 = 0.3, p2 = 0.7, b = 1.2;
    const double k = 2 * p1 / (b * b), kappa = 2 * p2 / (b * b);
    const double want = -std::pow(x, k) * std::exp(kappa * x) * std::pow(kappa, k - 1) *
                        boost::math::tgamma_lower(1 - k, kappa * x);
    const auto r = surplus::scale_integral_i2(quadratic(0.0, p1, p2), b, x);
    ASSERT_TRUE(r.finite);
    EXPECT_LE(rel_err(r.value, want), 1e-10);
}

TEST(ScaleIntegrals, NonPositiveXThrows) {
    EXPECT_THROW(surplus::scale_integral_i1(quadratic(1, 0, 1), 1.0, 0.0), surplus::DomainError);
    EXPECT_THROW(surplus::scale_integral_i2(quadratic(1, 0, 1), 1.0, -1.0), surplus::DomainError);
    EXPECT_THROW(surplus::classify_boundary(quadratic(1, 0, 1), 1.0, 0.0), surplus::DomainError);
}

// Convergence test of I1 by the leading growth of (1 + eps) ln v - phi(x, v): it tends
// to -inf for some eps > 0 exactly when the drift is superlinear or linear with 2 p1 > b^2.
TEST(ScaleIntegrals, GrowthTestMatchesVerdict) {
    struct Case {
        DriftSpec drift;
        double b;
        bool finite;
    };
    const Case cases[] = {
        {linear(1.0, 0.5), 1.0, false}, {linear(0.0, 0.5), 1.0, false}, {linear(1.0, 0.51), 1.0, true},
        {linear(0.0, 3.0), 2.0, true}, {linear(0.0, 2.0), 2.0, false}, {quadratic(0.0, 0.0, 1e-3), 10.0, true}, {power(0.01, 0.0, 1.01), 3.0, true},
    };
    for (const auto& c : cases) {
        EXPECT_EQ(surplus::scale_integral_i1(c.drift, c.b, 1.0).finite, c.finite) << c.drift.premium.form_name();
    }
}

struct Regime {
    const char* name;
    DriftSpec drift;
    double b;
    BoundaryClass expected;
};

// Case tables of the linear, power and quadratic drift examples.
TEST(Classification, GoldenTable) {
    const Regime table[] = {
        {"linear p0>0 2p1<=b^2", linear(1.0, 1.0), 2.0, BoundaryClass::NoExitAS},
        {"linear p0>0 2p1>b^2", linear(1.0, 1.0), 1.0, BoundaryClass::ExplodeToInfinityAS},
        {"linear p0=0 2p1<b^2", linear(0.0, 0.25), 1.0, BoundaryClass::ExitToZeroAS},
        {"linear p0=0 2p1=b^2", linear(0.0, 0.5), 1.0, BoundaryClass::NoExitAS},
        {"linear p0=0 2p1>b^2", linear(0.0, 2.0), 1.0, BoundaryClass::ExplodeToInfinityAS},
        {"power p2>0", power(1.0, 0.5, 2.0), 1.0, BoundaryClass::ExplodeToInfinityAS},
        {"power p2=0", power(1.0, 0.0, 2.0), 1.0, BoundaryClass::Mixed},
        {"quadratic p0>0", quadratic(1.0, 0.0, 1.0), 1.0, BoundaryClass::ExplodeToInfinityAS},
        {"quadratic p0=0 2p1<b^2", quadratic(0.0, 0.1, 1.0), 1.0, BoundaryClass::Mixed},
        {"quadratic p0=0 2p1>=b^2", quadratic(0.0, 0.5, 1.0), 1.0, BoundaryClass::ExplodeToInfinityAS},
    };
    for (const auto& r : table) {
        for (double x : {0.3, 1.0, 4.0}) {
            const auto rep = surplus::classify_boundary(r.drift, r.b, x);
            EXPECT_EQ(rep.boundary_class, r.expected) << r.name << " x=" << x << " basis=" << rep.basis;
            if (rep.boundary_class == BoundaryClass::ExplodeToInfinityAS) {
                EXPECT_TRUE(rep.i1_finite && !rep.i2_finite) << r.name;
            }
            if (rep.boundary_class == BoundaryClass::Mixed) {
                ASSERT_TRUE(rep.prob_to_infinity.has_value()) << r.name;
                EXPECT_GT(*rep.prob_to_infinity, 0.0) << r.name;
                EXPECT_LT(*rep.prob_to_infinity, 1.0) << r.name;
                EXPECT_TRUE(rep.i1_finite && rep.i2_finite) << r.name;
            }
        }
    }
}

TEST(Classification, MixedProbabilityMatchesScaleRatio) {
    // For the quadratic family the reported probability is the explosion probability,
    // which must equal |I2| / (I1 + |I2|).
    const auto d = quadratic(0.0, 0.1, 1.0);
    const auto rep = surplus::classify_boundary(d, 1.0, 0.5);
    const double ratio = rep.i2.magnitude() / (rep.i1.value + rep.i2.magnitude());
    EXPECT_NEAR(*rep.prob_to_infinity, ratio, 1e-10);
    EXPECT_NEAR(*rep.explosion_prob, kExplosionA, 1e-12);
}

TEST(Classification, BasisTag) {
    const auto rep = surplus::classify_boundary(quadratic(1.0, 0.0, 1.0), 1.0, 1.0);
    EXPECT_NE(rep.basis.find("i1:superlinear"), std::string::npos);
    EXPECT_NE(rep.basis.find("i2:p0>0"), std::string::npos);
    EXPECT_NE(rep.basis.find("cutoff="), std::string::npos);
    EXPECT_EQ(*rep.explosion_prob, 1.0);
}

TEST(ExplosionProbability, ClosedFormNoLinearTerm) {
    for (double x : {0.1, std::log(2.0) / 2.0, 0.3465736, 1.0, 3.0}) {
        const double want = -std::expm1(-2.0 * x);
        EXPECT_LE(rel_err(surplus::explosion_probability(quadratic(0, 0, 1), 1.0, x), want), 1e-8) << x;
    }
    EXPECT_NEAR(surplus::explosion_probability(quadratic(0, 0, 1), 1.0, std::log(2.0) / 2.0), 0.5, 1e-12);
}

TEST(ExplosionProbability, FrozenOracles) {
    EXPECT_LE(rel_err(surplus::explosion_probability(quadratic(0, 0.1, 1), 1.0, 0.5), kExplosionA), 1e-12);
    EXPECT_LE(rel_err(surplus::explosion_probability(quadratic(0, 0.3, 0.7), 1.2, 1.5), kExplosionB), 1e-12);
}

TEST(ExplosionProbability, CertainBranch) {
    EXPECT_EQ(surplus::explosion_probability(quadratic(0.5, 0, 1), 1.0, 1.0), 1.0);
    EXPECT_EQ(surplus::explosion_probability(quadratic(0.0, 0.5, 1), 1.0, 0.01), 1.0);
    EXPECT_EQ(surplus::explosion_probability(DriftSpec{PremiumSpec::quadratic(0, 0.3, 1), 0.2}, 1.0, 0.01), 1.0);
}

TEST(ExplosionProbability, SmallX) {
    EXPECT_LT(surplus::explosion_probability(quadratic(0, 0.1, 1), 1.0, 1e-12), 1e-9);
}

TEST(ExplosionProbability, Errors) {
    EXPECT_THROW(surplus::explosion_probability(linear(0, 1), 1.0, 1.0), surplus::DomainError);
    EXPECT_THROW(surplus::explosion_probability(quadratic(0, 0, 1), 1.0, 0.0), surplus::DomainError);
}

// Regularized lower incomplete gamma with shape 1 - k and rate kappa.
TEST(ExplosionProbability, GammaIdentity) {
    std::mt19937_64 rng(27);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double b = 0.5 + 1.5 * unit(rng);
        const double p1 = 0.49 * b * b * unit(rng);
        const double p2 = 0.05 + 3.0 * unit(rng);
        const double x = 0.01 + 5.0 * unit(rng);
        const double k = 2 * p1 / (b * b), kappa = 2 * p2 / (b * b);
        const double want = boost::math::gamma_p(1.0 - k, kappa * x);
        EXPECT_LE(rel_err(surplus::explosion_probability(quadratic(0, p1, p2), b, x), want), 1e-10)
            << "b=" << b << " p1=" << p1 << " p2=" << p2 << " x=" << x;
    }
}

TEST(ExplosionProbability, LimitAtLargeX) {
    for (double p2 : {0.3, 1.0, 2.5}) {
        for (double b : {0.7, 1.0, 1.6}) {
            const double x = 50 * b * b / (2 * p2);
            EXPECT_GE(surplus::explosion_probability(quadratic(0, 0.1 * b * b, p2), b, x), 1 - 1e-8);
        }
    }
}

TEST(ExplosionProbability, Monotone) {
    const double p1 = 0.1;
    double prev = 0.0;
    for (int i = 1; i <= 60; ++i) {
        const double v = surplus::explosion_probability(quadratic(0, p1, 1), 1.0, 0.05 * i);
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (int i = 1; i <= 60; ++i) {
        const double v = surplus::explosion_probability(quadratic(0, p1, 0.05 * i), 1.0, 0.7);
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double v = surplus::explosion_probability(quadratic(0, p1, 1), 0.5 + 0.05 * i, 0.7);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(ExitTime, FrozenOracles) {
    EXPECT_LE(rel_err(surplus::expected_exit_time(quadratic(1, 0, 1), 1.0, 10, 1.0), kExitA), 1e-9);
    EXPECT_LE(rel_err(surplus::expected_exit_time(quadratic(0.5, 0.2, 2), 1.5, 4, 0.8), kExitB), 1e-9);
}

TEST(ExitTime, BoundaryAndDomain) {
    EXPECT_EQ(surplus::expected_exit_time(quadratic(1, 0, 1), 1.0, 10, 0.1), 0.0);
    EXPECT_THROW(surplus::expected_exit_time(quadratic(1, 0, 1), 1.0, 10, 0.05), surplus::DomainError);
    EXPECT_THROW(surplus::expected_exit_time(linear(1, 1), 1.0, 10, 1.0), surplus::DomainError);
}

// M solves (b^2/2) x^2 M'' + p(x) M' = -1.
TEST(ExitTime, SolvesGenerator) {
    const auto d = quadratic(0.5, 0.2, 2);
    const double b = 1.5;
    const int n = 4;
    for (double x : {0.4, 0.8, 2.0, 5.0}) {
        const double h = 1e-3 * x;
        const double m0 = surplus::expected_exit_time(d, b, n, x);
        const double mp = surplus::expected_exit_time(d, b, n, x + h);
        const double mm = surplus::expected_exit_time(d, b, n, x - h);
        const double d1 = (mp - mm) / (2 * h);
        const double d2 = (mp - 2 * m0 + mm) / (h * h);
        const double lhs = 0.5 * b * b * x * x * d2 + surplus::drift_at(d, x) * d1;
        EXPECT_NEAR(lhs, -1.0, 2e-3) << x;
    }
}

// Rises from 0 at the floor, then falls because a higher start explodes sooner.
TEST(ExitTime, PositiveAndFinite) {
    const auto d = quadratic(1, 0, 1);
    for (double x : {0.100001, 0.15, 0.3, 0.6, 1.0, 2.0, 5.0, 20.0, 200.0}) {
        const double m = surplus::expected_exit_time(d, 1.0, 10, x);
        EXPECT_TRUE(std::isfinite(m)) << x;
        EXPECT_GT(m, 0.0) << x;
    }
    EXPECT_LT(surplus::expected_exit_time(d, 1.0, 10, 0.100001), surplus::expected_exit_time(d, 1.0, 10, 0.15));
    EXPECT_GT(surplus::expected_exit_time(d, 1.0, 10, 1.0), surplus::expected_exit_time(d, 1.0, 10, 5.0));
}

TEST(ExplosionCap, ReturnProbabilityBelowTolerance) {
    const auto d = quadratic(1, 0, 1);
    const double b = 1.0, x = 1.0;
    const double cap = surplus::explosion_cap(d, b, x, 1e-6);
    EXPECT_GT(cap, x);
    // P[hit x from c] = I1 based at c, scaled by the density ratio, over I1 at x.
    auto ret = [&](double c) {
        const double s = 2 / (b * b);
        const double log_density = -s * (1.0 * (c - x) + 1.0 * (1 / x - 1 / c));
        return std::exp(log_density) * surplus::scale_integral_i1(d, b, c).value /
               surplus::scale_integral_i1(d, b, x).value;
    };
    EXPECT_LT(ret(cap), 1e-6);
    EXPECT_GT(ret(cap / 1.05), 1e-6);
}

TEST(ExplosionCap, RequiresFiniteI1) {
    EXPECT_THROW(surplus::explosion_cap(linear(1, 0.5), 1.0, 1.0), surplus::DomainError);
}

}  // namespace
