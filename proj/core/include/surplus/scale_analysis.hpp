#pragma once

#include "surplus/model.hpp"

#include <optional>
#include <string>

namespace surplus {

/// Outcome of one scale integral. For I2 `value` is the (negative) integral;
/// `magnitude()` is its absolute value. Divergent integrals carry +-infinity.
struct ScaleIntegral {
    bool finite = false;
    double value = 0.0;
    // Truncation point of the numerical integral (+inf when an exact change of
    // variables covers the whole range) and the analytic bound on the dropped tail.
    double cutoff = 0.0;
    double tail_bound = 0.0;

    double magnitude() const { return value < 0.0 ? -value : value; }
};

enum class BoundaryClass { NoExitAS, ExitToZeroAS, ExplodeToInfinityAS, Mixed };

std::string to_string(BoundaryClass cls);

struct BoundaryReport {
    bool i1_finite = false;
    bool i2_finite = false;
    BoundaryClass boundary_class = BoundaryClass::NoExitAS;
    // P[lim X = +inf] for the Mixed class.
    std::optional<double> prob_to_infinity;
    // P[finite-time explosion], available for quadratic drifts.
    std::optional<double> explosion_prob;
    ScaleIntegral i1;
    ScaleIntegral i2;
    std::string basis;
};

/// I1 = int_x^inf exp{-(2/b^2) int_x^v p(u)/u^2 du} dv. Finiteness is decided
/// analytically from the growth of p; a finite value is computed by adaptive
/// quadrature on [x, C], with C grown from `cutoff` until the tail bound drops
/// below 1e-12 of the accumulated integral.
ScaleIntegral scale_integral_i1(const DriftSpec& drift, double b, double x, double cutoff);
ScaleIntegral scale_integral_i1(const DriftSpec& drift, double b, double x);

/// I2 = -int_0^x exp{(2/b^2) int_v^x p(u)/u^2 du} dv. Diverges when p(0) > 0 or
/// when the v^{-k} endpoint singularity has k = 2 p'(0) / b^2 >= 1.
ScaleIntegral scale_integral_i2(const DriftSpec& drift, double b, double x);

BoundaryReport classify_boundary(const DriftSpec& drift, double b, double x);

/// Probability that the diffusion explodes in finite time, for quadratic drift
/// p(u) = p2 u^2 + p1 u + p0 (p2 = c2, p1 = c1 + a, p0 = c0). Exactly 1 unless
/// p0 = 0 and 2 p1 / b^2 < 1.
double explosion_probability(const DriftSpec& drift, double b, double x);

/// Expected exit time of the diffusion from (1/n, +inf) started at x, for quadratic drift.
/// Returns 0 at x = 1/n; throws DomainError for x < 1/n.
double expected_exit_time(const DriftSpec& drift, double b, int n, double x);

/// Smallest level C > x_ref (up to 1%) from which the diffusion returns to x_ref
/// with probability below `tolerance`. Requires I1 < inf.
double explosion_cap(const DriftSpec& drift, double b, double x_ref, double tolerance = 1e-6);

}  // namespace surplus
