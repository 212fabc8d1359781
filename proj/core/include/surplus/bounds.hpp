#pragma once

#include "surplus/claims.hpp"
#include "surplus/model.hpp"

#include <optional>
#include <string>

namespace surplus {

/// Exponential ruin bound psi(x) <= exp(-r_hat x) for a quadratic premium.
struct BoundReport {
    bool condition1_holds = false;  // 2c2/b^2 < r_inf and lambda h(2c2/b^2) <= c0 2c2/b^2
    bool condition2_holds = false;  // lambda mu < c0
    std::optional<double> r0;       // adjustment coefficient, when condition 2 holds
    double critical_rate = 0.0;     // 2 c2 / b^2
    double r_hat = 0.0;
    double bound_at_x = 1.0;
    // "cond1: 2c2/b²", "cond2: r0" or "cond2: 2c2/b²-limit"
    std::string selection;
};

/// Unique root r0 in (0, r_inf) of lambda h(r) = c0 r, by bracketed bisection
/// to 1e-12 absolute. Throws NoPositiveRoot when lambda mu >= c0.
double solve_r0(const ClaimDistribution& claims, double lambda, double c0);

/// Throws BoundUnavailable when neither condition holds and DomainError for a
/// non-quadratic premium.
BoundReport compute_bound(const ModelParams& params);

}  // namespace surplus
