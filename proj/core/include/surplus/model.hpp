#pragma once

#include "surplus/claims.hpp"

#include <string>
#include <variant>

namespace surplus {

// c(u) = c2 u^2 + c1 u + c0 for u >= 0.
struct QuadraticPremium {
    double c0;
    double c1;
    double c2;
};

// c(u) = c1 u + c0 for u >= 0.
struct LinearPremium {
    double c0;
    double c1;
};

// c(u) = p1 (u + p2)^alpha for u >= 0.
struct PowerPremium {
    double p1;
    double p2;
    double alpha;
};

/// Surplus-dependent premium intensity, flat-extended below zero: c(u) = c(0) for u < 0.
class PremiumSpec {
public:
    using Form = std::variant<QuadraticPremium, LinearPremium, PowerPremium>;

    // c0 >= 0, c1 >= 0, c2 > 0. The jump model additionally needs c0 > 0
    // (checked by ModelParams::validate); c0 = 0 is kept for the diffusion study.
    static PremiumSpec quadratic(double c0, double c1, double c2);
    // c0 >= 0, c1 > 0.
    static PremiumSpec linear(double c0, double c1);
    // p1 > 0, p2 >= 0, alpha > 1.
    static PremiumSpec power(double p1, double p2, double alpha);

    const Form& form() const noexcept { return form_; }
    const QuadraticPremium* as_quadratic() const noexcept { return std::get_if<QuadraticPremium>(&form_); }

    std::string form_name() const;

private:
    explicit PremiumSpec(Form form) : form_(form) {}

    Form form_;
};

double premium_at(const PremiumSpec& spec, double u);

/// Two conventions for the drift below zero. The diffusion study flat-extends
/// p(u) = p(0) for u < 0; the jump model applies a*u to the signed surplus.
enum class DriftMode { DiffusionStudy, JumpModel };

/// Between-claims drift p(u) = c(u) + a u. `a` may be 0 so that the textbook
/// drifts p1 u + p0, p2 u^2 + p1 u + p0 and p1 (u + p2)^alpha can be written directly.
struct DriftSpec {
    PremiumSpec premium;
    double a = 0.0;

    void validate() const;
};

double drift_at(const DriftSpec& drift, double u, DriftMode mode = DriftMode::DiffusionStudy);

// (p(u) - p(0)) / u for u > 0, and its limit p'(0+) at u = 0.
double drift_secant_slope(const DriftSpec& drift, double u);

/// Full risk model: initial surplus x, asset drift a and volatility b,
/// Poisson claim intensity lambda, premium c(u) and the claim law.
struct ModelParams {
    double x;
    double a;
    double b;
    double lambda;
    PremiumSpec premium;
    ClaimDistribution claims;

    // Throws ConfigError naming the violated assumption.
    void validate() const;

    DriftSpec drift() const { return DriftSpec{premium, a}; }
};

/// q(u) = A u^2 + B u + C, the left-hand side of the supermartingale condition
/// for a quadratic premium at exponent r.
struct ConditionPolynomial {
    double u2;
    double u1;
    double u0;

    double operator()(double u) const { return (u2 * u + u1) * u + u0; }
};

struct SupermartingaleCheck {
    bool feasible;
    // Some u >= 0 with q(u) > 0 when infeasible; NaN when feasible.
    double witness;
    ConditionPolynomial q;
};

ConditionPolynomial supermartingale_polynomial(const ModelParams& params, double r);

/// Decides whether q(u) <= 0 for all u >= 0 by the sign of the u^2 coefficient.
/// Requires a quadratic premium and 0 < r < r_inf; throws DomainError otherwise.
SupermartingaleCheck check_supermartingale_condition(const ModelParams& params, double r);

// r compared with 2 c2 / b^2 up to a relative 1e-12, so that the critical
// exponent computed in floating point lands in the zero-coefficient case.
int compare_to_critical_rate(double r, double c2, double b);

}  // namespace surplus
