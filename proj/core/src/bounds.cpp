#include "surplus/bounds.hpp"

#include "surplus/errors.hpp"
#include "surplus/numerics.hpp"

#include <cmath>
#include <string>

namespace surplus {

double solve_r0(const ClaimDistribution& claims, double lambda, double c0) {
    if (!(lambda > 0.0) || !(c0 > 0.0)) throw DomainError("solve_r0: lambda and c0 must be > 0");
    if (lambda * mean(claims) >= c0) {
        throw NoPositiveRoot("solve_r0: requires λμ < c0 (λμ = " +
                             std::to_string(lambda * mean(claims)) + ", c0 = " + std::to_string(c0) + ")");
    }
    auto excess = [&](double r) { return lambda * mgf_h(claims, r) - c0 * r; };

    // excess is convex with excess(0) = 0 and slope lambda*mu - c0 < 0 at the origin.
    const double r_inf = r_infinity(claims);
    const double start = std::isinf(r_inf) ? 1.0 / mean(claims) : 0.5 * r_inf;
    double lo = start;
    while (!(excess(lo) < 0.0)) {
        lo *= 0.5;
        if (lo < 1e-300) throw NoPositiveRoot("solve_r0: no negative bracket near the origin");
    }
    double hi = start;
    if (std::isinf(r_inf)) {
        while (!(excess(hi) > 0.0)) hi *= 2.0;
    } else {
        // h(r) -> inf as r -> r_inf
        for (int j = 1; !(excess(hi) > 0.0); ++j) hi = r_inf * (1.0 - std::ldexp(1.0, -j));
    }
    return numerics::bisect(excess, lo, hi, 1e-12, 200).root;
}

BoundReport compute_bound(const ModelParams& params) {
    params.validate();
    const auto* q = params.premium.as_quadratic();
    if (q == nullptr) throw DomainError("compute_bound requires a quadratic premium");
    if (!(q->c0 > 0.0)) throw ConfigError("compute_bound: c0 must be > 0");

    BoundReport report;
    const double critical = 2.0 * q->c2 / (params.b * params.b);
    report.critical_rate = critical;
    report.condition1_holds = critical < r_infinity(params.claims) &&
                              params.lambda * mgf_h(params.claims, critical) <= q->c0 * critical;
    report.condition2_holds = params.lambda * mean(params.claims) < q->c0;

    if (!report.condition1_holds && !report.condition2_holds) {
        throw BoundUnavailable(
            "no exponential bound: condition 1 (h(2c2/b²) <= 2c0c2/(b²λ)) fails and "
            "condition 2 (λμ < c0) fails: λμ = " + std::to_string(params.lambda * mean(params.claims)) +
            ", c0 = " + std::to_string(q->c0));
    }

    double cond2_rate = 0.0;
    std::string cond2_tag;
    if (report.condition2_holds) {
        report.r0 = solve_r0(params.claims, params.lambda, q->c0);
        if (*report.r0 < critical) {
            cond2_rate = *report.r0;
            cond2_tag = "cond2: r0";
        } else {
            cond2_rate = critical;
            cond2_tag = "cond2: 2c2/b²-limit";
        }
    }
    // Larger exponent gives the tighter bound; ties go to condition 1.
    if (report.condition1_holds && critical >= cond2_rate) {
        report.r_hat = critical;
        report.selection = "cond1: 2c2/b²";
    } else {
        report.r_hat = cond2_rate;
        report.selection = cond2_tag;
    }
    report.bound_at_x = std::exp(-report.r_hat * params.x);
    return report;
}

}  // namespace surplus
