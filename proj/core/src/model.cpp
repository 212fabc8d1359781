#include "surplus/model.hpp"

#include "surplus/detail/overloaded.hpp"
#include "surplus/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace surplus {

using detail::Overloaded;

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

PremiumSpec PremiumSpec::quadratic(double c0, double c1, double c2) {
    if (!finite_nonneg(c0)) throw ConfigError("quadratic premium: c0 must be >= 0");
    if (!finite_nonneg(c1)) throw ConfigError("quadratic premium: c1 must be >= 0");
    if (!finite_pos(c2)) throw ConfigError("quadratic premium: c2 must be > 0");
    return PremiumSpec(QuadraticPremium{c0, c1, c2});
}

PremiumSpec PremiumSpec::linear(double c0, double c1) {
    if (!finite_nonneg(c0)) throw ConfigError("linear premium: c0 must be >= 0");
    if (!finite_pos(c1)) throw ConfigError("linear premium: c1 must be > 0");
    return PremiumSpec(LinearPremium{c0, c1});
}

PremiumSpec PremiumSpec::power(double p1, double p2, double alpha) {
    if (!finite_pos(p1)) throw ConfigError("power premium: p1 must be > 0");
    if (!finite_nonneg(p2)) throw ConfigError("power premium: p2 must be >= 0");
    if (!std::isfinite(alpha) || alpha <= 1.0) throw ConfigError("power premium: alpha must be > 1");
    return PremiumSpec(PowerPremium{p1, p2, alpha});
}

std::string PremiumSpec::form_name() const {
    return std::visit(Overloaded{
                          [](const QuadraticPremium&) { return std::string("quadratic"); },
                          [](const LinearPremium&) { return std::string("linear"); },
                          [](const PowerPremium&) { return std::string("power"); },
                      },
                      form_);
}

double premium_at(const PremiumSpec& spec, double u) {
    const double v = std::max(u, 0.0);
    return std::visit(Overloaded{
                          [v](const QuadraticPremium& q) { return (q.c2 * v + q.c1) * v + q.c0; },
                          [v](const LinearPremium& l) { return l.c1 * v + l.c0; },
                          [v](const PowerPremium& p) { return p.p1 * std::pow(v + p.p2, p.alpha); },
                      },
                      spec.form());
}

void DriftSpec::validate() const {
    if (!finite_nonneg(a)) throw ConfigError("drift: a must be >= 0");
}

double drift_at(const DriftSpec& drift, double u, DriftMode mode) {
    const double linear_part = mode == DriftMode::DiffusionStudy ? std::max(u, 0.0) : u;
    return premium_at(drift.premium, u) + drift.a * linear_part;
}

double drift_secant_slope(const DriftSpec& drift, double u) {
    const double v = std::max(u, 0.0);
    const double premium_slope = std::visit(
        Overloaded{
            [v](const QuadraticPremium& q) { return q.c2 * v + q.c1; },
            [](const LinearPremium& l) { return l.c1; },
            [v](const PowerPremium& p) {
                if (p.p2 == 0.0) return p.p1 * std::pow(v, p.alpha - 1.0);
                if (v == 0.0) return p.alpha * p.p1 * std::pow(p.p2, p.alpha - 1.0);
                return p.p1 * std::pow(p.p2, p.alpha) * std::expm1(p.alpha * std::log1p(v / p.p2)) / v;
            },
        },
        drift.premium.form());
    return premium_slope + drift.a;
}

void ModelParams::validate() const {
    if (!finite_nonneg(x)) throw ConfigError("model: initial surplus x must be >= 0");
    if (!finite_pos(a)) throw ConfigError("model: asset drift a must be > 0");
    if (!finite_pos(b)) throw ConfigError("model: volatility b must be > 0");
    if (!finite_pos(lambda)) throw ConfigError("model: claim intensity lambda must be > 0");
    if (!(premium_at(premium, 0.0) > 0.0)) throw ConfigError("model: premium intensity must be positive (c(0) > 0)");
}

ConditionPolynomial supermartingale_polynomial(const ModelParams& params, double r) {
    const auto* q = params.premium.as_quadratic();
    if (q == nullptr) throw DomainError("supermartingale condition check requires a quadratic premium");
    if (!(r > 0.0) || !(r < r_infinity(params.claims))) {
        throw DomainError("supermartingale condition check: r must lie in (0, r_inf)");
    }
    const double b2 = params.b * params.b;
    return ConditionPolynomial{
        r * r * b2 / 2.0 - r * q->c2,
        -r * (params.a + q->c1),
        -r * q->c0 + params.lambda * mgf_h(params.claims, r),
    };
}

int compare_to_critical_rate(double r, double c2, double b) {
    const double excess = r * b * b / 2.0 - c2;
    if (std::abs(excess) <= 1e-12 * c2) return 0;
    return excess > 0.0 ? 1 : -1;
}

SupermartingaleCheck check_supermartingale_condition(const ModelParams& params, double r) {
    ConditionPolynomial q = supermartingale_polynomial(params, r);
    const double c2 = params.premium.as_quadratic()->c2;
    const int side = compare_to_critical_rate(r, c2, params.b);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    if (side <= 0) {
        // Non-positive leading coefficient; the vertex (if any) sits at u < 0
        // because a + c1 > 0, so the maximum over u >= 0 is q(0).
        if (side == 0) q.u2 = 0.0;
        return q.u0 <= 0.0 ? SupermartingaleCheck{true, nan, q} : SupermartingaleCheck{false, 0.0, q};
    }

    std::vector<double> grid{0.0};
    for (int e = -10; e <= 10; ++e) grid.push_back(std::ldexp(1.0, e));
    const double vertex = -q.u1 / (2.0 * q.u2);
    if (vertex >= 0.0) grid.push_back(vertex);
    std::sort(grid.begin(), grid.end());
    for (double u : grid) {
        if (q(u) > 0.0) return SupermartingaleCheck{false, u, q};
    }
    // Beyond the larger root q stays positive.
    const double disc = q.u1 * q.u1 - 4.0 * q.u2 * q.u0;
    double u = (-q.u1 + std::sqrt(std::max(disc, 0.0))) / (2.0 * q.u2);
    u = 2.0 * u + 1.0;
    while (!(q(u) > 0.0)) u *= 2.0;
    return SupermartingaleCheck{false, u, q};
}

}  // namespace surplus
