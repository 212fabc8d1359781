#include "surplus/claims.hpp"

#include "surplus/detail/overloaded.hpp"
#include "surplus/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace surplus {

namespace {

using detail::Overloaded;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// expm1(t) - t without cancellation for small |t|.
double expm1_minus_linear(double t) {
    if (std::abs(t) > 1e-2) return std::expm1(t) - t;
    double term = t * t / 2.0;
    double sum = term;
    for (int n = 3; n < 12; ++n) {
        term *= t / n;
        sum += term;
    }
    return sum;
}

}  // namespace

ClaimDistribution ClaimDistribution::exponential(double mean) {
    if (!positive_finite(mean)) throw ConfigError("exponential claims: mean must be > 0");
    return ClaimDistribution(ExponentialClaims{mean});
}

ClaimDistribution ClaimDistribution::gamma(double shape, double scale) {
    if (!positive_finite(shape)) throw ConfigError("gamma claims: shape must be > 0");
    if (!positive_finite(scale)) throw ConfigError("gamma claims: scale must be > 0");
    return ClaimDistribution(GammaClaims{shape, scale});
}

ClaimDistribution ClaimDistribution::deterministic(double value) {
    if (!positive_finite(value)) throw ConfigError("deterministic claims: value must be > 0");
    return ClaimDistribution(DeterministicClaims{value});
}

ClaimDistribution ClaimDistribution::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || lo < 0.0) throw ConfigError("uniform claims: lo must be >= 0");
    if (!std::isfinite(hi) || hi <= lo) throw ConfigError("uniform claims: hi must be > lo");
    return ClaimDistribution(UniformClaims{lo, hi});
}

std::string ClaimDistribution::kind_name() const {
    return std::visit(Overloaded{
                          [](const ExponentialClaims&) { return std::string("exponential"); },
                          [](const GammaClaims&) { return std::string("gamma"); },
                          [](const DeterministicClaims&) { return std::string("deterministic"); },
                          [](const UniformClaims&) { return std::string("uniform"); },
                      },
                      kind_);
}

double mean(const ClaimDistribution& dist) {
    return std::visit(Overloaded{
                          [](const ExponentialClaims& d) { return d.mean; },
                          [](const GammaClaims& d) { return d.shape * d.scale; },
                          [](const DeterministicClaims& d) { return d.value; },
                          [](const UniformClaims& d) { return 0.5 * (d.lo + d.hi); },
                      },
                      dist.kind());
}

double r_infinity(const ClaimDistribution& dist) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(Overloaded{
                          [](const ExponentialClaims& d) { return 1.0 / d.mean; },
                          [](const GammaClaims& d) { return 1.0 / d.scale; },
                          [](const DeterministicClaims&) { return inf; },
                          [](const UniformClaims&) { return inf; },
                      },
                      dist.kind());
}

double mgf_h(const ClaimDistribution& dist, double r) {
    if (!(r >= 0.0) || !(r < r_infinity(dist))) {
        throw DomainError("mgf_h: r = " + std::to_string(r) + " outside [0, r_inf)");
    }
    if (r == 0.0) return 0.0;
    return std::visit(Overloaded{
                          [r](const ExponentialClaims& d) { return d.mean * r / (1.0 - d.mean * r); },
                          [r](const GammaClaims& d) {
                              return std::expm1(-d.shape * std::log1p(-d.scale * r));
                          },
                          [r](const DeterministicClaims& d) { return std::expm1(r * d.value); },
                          [r](const UniformClaims& d) {
                              // e^{r lo} E - 1 with E = expm1(rw)/(rw), split to avoid cancellation
                              const double rw = r * (d.hi - d.lo);
                              const double e_avg = std::expm1(rw) / rw;
                              return std::expm1(r * d.lo) * e_avg + expm1_minus_linear(rw) / rw;
                          },
                      },
                      dist.kind());
}

double sample(const ClaimDistribution& dist, Rng& rng) {
    return std::visit(Overloaded{
                          [&rng](const ExponentialClaims& d) {
                              return std::exponential_distribution<double>(1.0 / d.mean)(rng);
                          },
                          [&rng](const GammaClaims& d) {
                              return std::gamma_distribution<double>(d.shape, d.scale)(rng);
                          },
                          [](const DeterministicClaims& d) { return d.value; },
                          [&rng](const UniformClaims& d) {
                              return std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
                          },
                      },
                      dist.kind());
}

}  // namespace surplus
