#pragma once

#include <random>
#include <string>
#include <variant>

namespace surplus {

using Rng = std::mt19937_64;

struct ExponentialClaims {
    double mean;
};

struct GammaClaims {
    double shape;
    double scale;
};

struct DeterministicClaims {
    double value;
};

struct UniformClaims {
    double lo;
    double hi;
};

/// Light-tailed claim-size law Y >= 0 with finite mean and r_inf > 0.
///
/// Instances are validated on construction and immutable afterwards, so a
/// ClaimDistribution can be shared freely between simulation workers.
class ClaimDistribution {
public:
    using Kind = std::variant<ExponentialClaims, GammaClaims, DeterministicClaims, UniformClaims>;

    static ClaimDistribution exponential(double mean);
    static ClaimDistribution gamma(double shape, double scale);
    static ClaimDistribution deterministic(double value);
    static ClaimDistribution uniform(double lo, double hi);

    const Kind& kind() const noexcept { return kind_; }

    // "exponential", "gamma", "deterministic" or "uniform".
    std::string kind_name() const;

private:
    explicit ClaimDistribution(Kind kind) : kind_(kind) {}

    Kind kind_;
};

/// E[Y].
double mean(const ClaimDistribution& dist);

/// Supremum of {r : E e^{rY} < inf}; +infinity for bounded claims.
double r_infinity(const ClaimDistribution& dist);

/// Shifted moment generating function h(r) = E e^{rY} - 1 for 0 <= r < r_inf.
/// Throws DomainError outside that range.
double mgf_h(const ClaimDistribution& dist, double r);

/// One draw of Y; consumes randomness only from `rng`.
double sample(const ClaimDistribution& dist, Rng& rng);

}  // namespace surplus
