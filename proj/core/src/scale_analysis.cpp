#include "surplus/scale_analysis.hpp"

#include "surplus/detail/overloaded.hpp"
#include "surplus/errors.hpp"
#include "surplus/numerics.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace surplus {

using detail::Overloaded;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailRelTol = 1e-12;

std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

// Log scale density phi(z, v) = (2/b^2) int_z^v p(u)/u^2 du of the diffusion
// dX = p(X) dt + b X dW, split as k log(v/z) + rho(z, v) where k log(v/z)
// collects the 1/u part of p(u)/u^2 and rho is bounded near u = 0 whenever p(0) = 0.
// All offsets are passed as s = v - z so that large z keeps full precision.
class ScaleDensity {
public:
    ScaleDensity(const DriftSpec& drift, double b) : drift_(drift), scale_(2.0 / (b * b)) {
        drift.validate();
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("scale analysis: b must be > 0");
        std::visit(Overloaded{
                       [this](const QuadraticPremium& q) {
                           k_ = scale_ * (q.c1 + drift_.a);
                           p0_ = q.c0;
                           kappa_ = scale_ * q.c2;
                       },
                       [this](const LinearPremium& l) {
                           k_ = scale_ * (l.c1 + drift_.a);
                           p0_ = l.c0;
                       },
                       [this](const PowerPremium& p) {
                           k_ = scale_ * drift_.a;
                           p0_ = p.p1 * std::pow(p.p2, p.alpha);
                       },
                   },
                   drift.premium.form());
    }

    double k() const { return k_; }
    double p0() const { return p0_; }
    bool is_linear() const { return std::holds_alternative<LinearPremium>(drift_.premium.form()); }
    bool is_quadratic() const { return std::holds_alternative<QuadraticPremium>(drift_.premium.form()); }

    double rho(double z, double s) const {
        // 1/z - 1/(z+s), robust for s = +inf
        const double inv_diff = std::isinf(s) ? 1.0 / z : s / (z * (z + s));
        return std::visit(Overloaded{
                              [&](const QuadraticPremium& q) { return scale_ * (q.c2 * s + q.c0 * inv_diff); },
                              [&](const LinearPremium& l) { return scale_ * l.c0 * inv_diff; },
                              [&](const PowerPremium& p) { return scale_ * p.p1 * power_part(p, z, s); },
                          },
                          drift_.premium.form());
    }

    double phi(double z, double s) const { return k_ * std::log1p(s / z) + rho(z, s); }

    // Bound on int_{z+s}^inf exp(-phi(z, v)) dv for the superlinear families.
    double tail_bound(double z, double s) const {
        const double at_cut = std::exp(-phi(z, s));
        if (at_cut == 0.0) return 0.0;
        return std::visit(Overloaded{
                              [&](const QuadraticPremium&) { return at_cut / kappa_; },
                              [](const LinearPremium&) { return kInf; },
                              [&](const PowerPremium& p) {
                                  // v^g - C^g >= g C^g log(v/C) gives a power-law envelope.
                                  const double v = z + s;
                                  const double m = scale_ * p.p1 * std::pow(v, p.alpha - 1.0) + k_;
                                  return m > 1.0 ? at_cut * v / (m - 1.0) : kInf;
                              },
                          },
                          drift_.premium.form());
    }

    // Natural length scale for the first truncation of an upper integral.
    double initial_span(double z) const {
        if (kappa_ > 0.0) return 8.0 / kappa_;
        return std::max(z, 1.0);
    }

private:
    // int_z^{z+s} (u + p2)^alpha / u^2 du
    static double power_part(const PowerPremium& p, double z, double s) {
        const double g = p.alpha - 1.0;
        if (p.p2 == 0.0) return std::pow(z, g) * std::expm1(g * std::log1p(s / z)) / g;
        auto integrand = [&p](double u) { return std::pow(u + p.p2, p.alpha) / (u * u); };
        return numerics::integrate(integrand, z, z + s, {.rel_tol = 1e-13}).value;
    }

    DriftSpec drift_;
    double scale_;
    double k_ = 0.0;
    double p0_ = 0.0;
    double kappa_ = 0.0;
};

bool i1_is_finite(const ScaleDensity& d) { return !d.is_linear() || d.k() > 1.0; }

// int_z^inf exp(-phi(z, v)) dv for a superlinear drift, truncated adaptively.
ScaleIntegral upper_integral(const ScaleDensity& d, double z, double span) {
    auto integrand = [&](double s) { return std::exp(-d.phi(z, s)); };
    double acc = numerics::integrate(integrand, 0.0, span).value;
    double tail = d.tail_bound(z, span);
    for (int i = 0; i < 200 && tail > kTailRelTol * acc; ++i) {
        acc += numerics::integrate(integrand, span, 2.0 * span).value;
        span *= 2.0;
        tail = d.tail_bound(z, span);
    }
    return ScaleIntegral{true, acc, z + span, tail};
}

ScaleIntegral i1_impl(const ScaleDensity& d, double x, double cutoff) {
    if (!i1_is_finite(d)) return ScaleIntegral{false, kInf, cutoff, kInf};
    if (d.is_linear()) {
        // v = x w^{-1/(k-1)} maps (x, inf) onto (0, 1] and cancels (x/v)^k exactly.
        const double k = d.k();
        auto integrand = [&](double w) {
            const double v = x * std::pow(w, -1.0 / (k - 1.0));
            return std::exp(-d.rho(x, v - x));
        };
        const double value = x / (k - 1.0) * numerics::integrate(integrand, 0.0, 1.0).value;
        return ScaleIntegral{true, value, kInf, 0.0};
    }
    return upper_integral(d, x, cutoff - x);
}

void require_positive_x(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + ": x must be > 0");
}

}  // namespace

std::string to_string(BoundaryClass cls) {
    switch (cls) {
        case BoundaryClass::NoExitAS: return "NoExitAS";
        case BoundaryClass::ExitToZeroAS: return "ExitToZeroAS";
        case BoundaryClass::ExplodeToInfinityAS: return "ExplodeToInfinityAS";
        case BoundaryClass::Mixed: return "Mixed";
    }
    return "unknown";
}

ScaleIntegral scale_integral_i1(const DriftSpec& drift, double b, double x, double cutoff) {
    require_positive_x(x, "scale_integral_i1");
    if (!(cutoff > x)) throw DomainError("scale_integral_i1: cutoff must exceed x");
    return i1_impl(ScaleDensity(drift, b), x, cutoff);
}

ScaleIntegral scale_integral_i1(const DriftSpec& drift, double b, double x) {
    require_positive_x(x, "scale_integral_i1");
    ScaleDensity d(drift, b);
    return i1_impl(d, x, x + d.initial_span(x));
}

ScaleIntegral scale_integral_i2(const DriftSpec& drift, double b, double x) {
    require_positive_x(x, "scale_integral_i2");
    ScaleDensity d(drift, b);
    if (d.p0() > 0.0 || d.k() >= 1.0) return ScaleIntegral{false, -kInf, 0.0, kInf};
    // v = x w^{1/(1-k)} flattens the v^{-k} singularity at the origin.
    const double k = d.k();
    auto integrand = [&](double w) {
        const double v = x * std::pow(w, 1.0 / (1.0 - k));
        return std::exp(-d.rho(x, v - x));
    };
    const double magnitude = x / (1.0 - k) * numerics::integrate(integrand, 0.0, 1.0).value;
    return ScaleIntegral{true, -magnitude, 0.0, 0.0};
}

BoundaryReport classify_boundary(const DriftSpec& drift, double b, double x) {
    require_positive_x(x, "classify_boundary");
    ScaleDensity d(drift, b);
    BoundaryReport report;
    report.i1 = i1_impl(d, x, x + d.initial_span(x));
    report.i2 = scale_integral_i2(drift, b, x);
    report.i1_finite = report.i1.finite;
    report.i2_finite = report.i2.finite;

    std::string basis;
    basis += d.is_linear() ? (report.i1_finite ? "i1:linear-k>1" : "i1:linear-k<=1") : "i1:superlinear";
    basis += d.p0() > 0.0 ? ";i2:p0>0" : (d.k() >= 1.0 ? ";i2:k>=1" : ";i2:k<1");

    if (!report.i1_finite) {
        report.boundary_class = report.i2_finite ? BoundaryClass::ExitToZeroAS : BoundaryClass::NoExitAS;
    } else if (!report.i2_finite) {
        report.boundary_class = BoundaryClass::ExplodeToInfinityAS;
    } else {
        report.boundary_class = BoundaryClass::Mixed;
        report.prob_to_infinity = d.is_quadratic()
                                      ? explosion_probability(drift, b, x)
                                      : report.i2.magnitude() / (report.i1.value + report.i2.magnitude());
    }
    if (d.is_quadratic()) report.explosion_prob = explosion_probability(drift, b, x);
    basis += ";cutoff=" + shortest(report.i1.cutoff);
    report.basis = basis;
    return report;
}

double explosion_probability(const DriftSpec& drift, double b, double x) {
    const auto* q = drift.premium.as_quadratic();
    if (q == nullptr) throw DomainError("explosion_probability requires a quadratic drift");
    if (!(q->c2 > 0.0)) throw DomainError("explosion_probability: p2 must be > 0");
    require_positive_x(x, "explosion_probability");
    if (!(b > 0.0)) throw DomainError("explosion_probability: b must be > 0");
    drift.validate();

    const double scale = 2.0 / (b * b);
    const double k = scale * (q->c1 + drift.a);
    const double kappa = scale * q->c2;
    if (q->c0 > 0.0 || k >= 1.0) return 1.0;

    const numerics::QuadratureOptions tight{.rel_tol = 1e-14};
    // int_0^x v^{-k} e^{-kappa v} dv with w = v^{1-k}
    const double power = 1.0 / (1.0 - k);
    auto flattened = [&](double w) { return std::exp(-kappa * std::pow(w, power)); };
    const double below = power * numerics::integrate(flattened, 0.0, std::pow(x, 1.0 - k), tight).value;

    // int_x^inf v^{-k} e^{-kappa v} dv, tail beyond C bounded by C^{-k} e^{-kappa C} / kappa
    auto density = [&](double v) { return std::pow(v, -k) * std::exp(-kappa * v); };
    double cut = x + 8.0 / kappa;
    double above = numerics::integrate(density, x, cut, tight).value;
    for (int i = 0; i < 200; ++i) {
        const double tail = std::pow(cut, -k) * std::exp(-kappa * cut) / kappa;
        if (tail <= 1e-15 * (below + above)) break;
        above += numerics::integrate(density, cut, 2.0 * cut, tight).value;
        cut *= 2.0;
    }
    return below / (below + above);
}

double expected_exit_time(const DriftSpec& drift, double b, int n, double x) {
    const auto* q = drift.premium.as_quadratic();
    if (q == nullptr) throw DomainError("expected_exit_time requires a quadratic drift");
    if (n < 1) throw DomainError("expected_exit_time: n must be >= 1");
    const double floor = 1.0 / n;
    if (!(x >= floor) || !std::isfinite(x)) throw DomainError("expected_exit_time: requires 1/n <= x");
    if (x == floor) return 0.0;
    ScaleDensity d(drift, b);

    const numerics::QuadratureOptions inner{.rel_tol = 1e-12};
    const numerics::QuadratureOptions outer{.rel_tol = 1e-10};

    // (m(inf) - m(z)) / m'(z): the upper scale integral based at z; tends to b^2/(2 p2).
    auto upper = [&](double z) { return upper_integral(d, z, d.initial_span(z)).value; };
    // (m(x) - m(z)) / m'(z) for z <= x
    auto partial = [&](double z) {
        auto integrand = [&](double s) { return std::exp(-d.phi(z, s)); };
        return numerics::integrate(integrand, 0.0, x - z, inner).value;
    };

    // m(x) / m(inf), both based at the floor
    auto from_floor = [&](double s) { return std::exp(-d.phi(floor, s)); };
    const double m_x = numerics::integrate(from_floor, 0.0, x - floor, inner).value;
    const double m_rest = std::exp(-d.phi(floor, x - floor)) * upper(x);
    const double fraction = m_x / (m_x + m_rest);

    // int_floor^inf upper(z) / z^2 dz with w = 1/z; the integrand is bounded at w = 0.
    const double whole = numerics::integrate([&](double w) { return upper(1.0 / w); }, 0.0, 1.0 / floor, outer).value;
    const double near = numerics::integrate([&](double z) { return partial(z) / (z * z); }, floor, x, outer).value;
    return 2.0 / (b * b) * (fraction * whole - near);
}

double explosion_cap(const DriftSpec& drift, double b, double x_ref, double tolerance) {
    require_positive_x(x_ref, "explosion_cap");
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw DomainError("explosion_cap: tolerance must lie in (0, 1)");
    ScaleDensity d(drift, b);
    if (!i1_is_finite(d)) throw DomainError("explosion_cap: I1 is infinite, the diffusion does not explode");

    const double base = i1_impl(d, x_ref, x_ref + d.initial_span(x_ref)).value;
    // P[reach x_ref | start at c] = exp(-phi(x_ref, c)) * I1(c) / I1(x_ref)
    auto return_prob = [&](double c) {
        const double decay = std::exp(-d.phi(x_ref, c - x_ref));
        if (decay == 0.0) return 0.0;
        return decay * i1_impl(d, c, c + d.initial_span(c)).value / base;
    };
    double lo = x_ref;
    double span = std::max(x_ref, 1.0);
    while (return_prob(x_ref + span) >= tolerance) {
        lo = x_ref + span;
        span *= 2.0;
    }
    double hi = x_ref + span;
    while (hi - lo > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        (return_prob(mid) >= tolerance ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace surplus
