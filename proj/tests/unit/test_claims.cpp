#include "surplus/claims.hpp"
#include "surplus/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

namespace {

using surplus::ClaimDistribution;

std::vector<ClaimDistribution> menu() {
    return {
        ClaimDistribution::exponential(1.0),
        ClaimDistribution::exponential(0.25),
        ClaimDistribution::gamma(2.0, 0.5),
        ClaimDistribution::gamma(0.5, 3.0),
        ClaimDistribution::deterministic(2.0),
        ClaimDistribution::uniform(0.0, 4.0),
        ClaimDistribution::uniform(1.0, 2.0),
    };
}

TEST(Claims, MgfAtZeroIsZero) {
    for (const auto& d : menu()) EXPECT_EQ(surplus::mgf_h(d, 0.0), 0.0) << d.kind_name();
}

TEST(Claims, MgfClosedForms) {
    EXPECT_DOUBLE_EQ(surplus::mgf_h(ClaimDistribution::exponential(1.0), 0.5), 1.0);
    EXPECT_NEAR(surplus::mgf_h(ClaimDistribution::deterministic(2.0), 0.5), std::exp(1.0) - 1.0, 1e-15);
    EXPECT_NEAR(surplus::mgf_h(ClaimDistribution::gamma(2.0, 0.5), 1.0), 3.0, 1e-14);
    const double r = 0.3;
    const double uni = (std::exp(r * 4.0) - 1.0) / (r * 4.0) - 1.0;
    EXPECT_NEAR(surplus::mgf_h(ClaimDistribution::uniform(0.0, 4.0), r), uni, 1e-14);
}

TEST(Claims, MgfSmallRateKeepsPrecision) {
    // h(r) ~ mu r for tiny r; catastrophic cancellation would lose every digit here.
    const double r = 1e-12;
    for (const auto& d : menu()) {
        EXPECT_NEAR(surplus::mgf_h(d, r) / (surplus::mean(d) * r), 1.0, 1e-9) << d.kind_name();
    }
}

TEST(Claims, MgfOutsideDomainThrows) {
    const auto e = ClaimDistribution::exponential(1.0);
    EXPECT_THROW(surplus::mgf_h(e, 1.0), surplus::DomainError);
    EXPECT_THROW(surplus::mgf_h(e, 2.0), surplus::DomainError);
    EXPECT_THROW(surplus::mgf_h(e, -0.1), surplus::DomainError);
    EXPECT_THROW(surplus::mgf_h(ClaimDistribution::deterministic(1.0), -1e-9), surplus::DomainError);
}

TEST(Claims, Means) {
    EXPECT_EQ(surplus::mean(ClaimDistribution::exponential(2.0)), 2.0);
    EXPECT_EQ(surplus::mean(ClaimDistribution::gamma(2.0, 0.5)), 1.0);
    EXPECT_EQ(surplus::mean(ClaimDistribution::uniform(0.0, 4.0)), 2.0);
    EXPECT_EQ(surplus::mean(ClaimDistribution::deterministic(3.0)), 3.0);
}

TEST(Claims, RInfinity) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(surplus::r_infinity(ClaimDistribution::exponential(0.5)), 2.0);
    EXPECT_EQ(surplus::r_infinity(ClaimDistribution::deterministic(3.0)), inf);
    EXPECT_EQ(surplus::r_infinity(ClaimDistribution::gamma(1.0, 1.0)), 1.0);
    EXPECT_EQ(surplus::r_infinity(ClaimDistribution::uniform(0.0, 1.0)), inf);
}

TEST(Claims, InvalidParametersRejected) {
    EXPECT_THROW(ClaimDistribution::exponential(0.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::exponential(-1.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::gamma(0.0, 1.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::gamma(1.0, -1.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::deterministic(0.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::uniform(-1.0, 1.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::uniform(2.0, 2.0), surplus::ConfigError);
    EXPECT_THROW(ClaimDistribution::exponential(std::nan("")), surplus::ConfigError);
    EXPECT_NO_THROW(ClaimDistribution::uniform(0.0, 1.0));
}

// h(r) >= mu r with equality only at 0, and h nondecreasing, on a grid up to 0.99 r_inf.
TEST(Claims, ConvexThroughOriginAndMonotone) {
    for (const auto& d : menu()) {
        const double top = std::isfinite(surplus::r_infinity(d)) ? 0.99 * surplus::r_infinity(d) : 5.0;
        double prev = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double r = top * i / 200.0;
            const double h = surplus::mgf_h(d, r);
            EXPECT_GT(h, surplus::mean(d) * r) << d.kind_name() << " r=" << r;
            EXPECT_GE(h, prev) << d.kind_name() << " r=" << r;
            prev = h;
        }
    }
}

TEST(Claims, SamplingIsDeterministic) {
    const auto e = ClaimDistribution::exponential(1.0);
    surplus::Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(surplus::sample(e, a), surplus::sample(e, b));
}

TEST(Claims, SampleSupport) {
    surplus::Rng rng(7);
    const auto det = ClaimDistribution::deterministic(5.0);
    const auto uni = ClaimDistribution::uniform(1.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(surplus::sample(det, rng), 5.0);
        const double y = surplus::sample(uni, rng);
        EXPECT_GE(y, 1.0);
        EXPECT_LE(y, 2.0);
    }
}

// Empirical mean and empirical h at r = min(r_inf / 2, 1) within 4 standard errors.
TEST(Claims, MonteCarloMoments) {
    constexpr int n = 1'000'000;
    for (const auto& d : menu()) {
        const double r = std::min(0.5 * surplus::r_infinity(d), 1.0);
        surplus::Rng rng(2024);
        double s1 = 0, s2 = 0, e1 = 0, e2 = 0;
        for (int i = 0; i < n; ++i) {
            const double y = surplus::sample(d, rng);
            s1 += y;
            s2 += y * y;
            const double ey = std::exp(r * y);
            e1 += ey;
            e2 += ey * ey;
        }
        const double m = s1 / n;
        const double se_m = std::sqrt(std::max(s2 / n - m * m, 0.0) / n);
        const double em = e1 / n;
        const double se_e = std::sqrt(std::max(e2 / n - em * em, 0.0) / n);
        if (se_m > 0) {
            EXPECT_LE(std::abs(m - surplus::mean(d)), 4 * se_m) << d.kind_name();
            EXPECT_LE(std::abs(em - 1.0 - surplus::mgf_h(d, r)), 4 * se_e) << d.kind_name();
        } else {
            EXPECT_EQ(m, surplus::mean(d));
        }
    }
}

}  // namespace
