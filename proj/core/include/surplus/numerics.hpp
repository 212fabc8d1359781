#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <queue>
#include <vector>

namespace surplus::numerics {

struct QuadratureOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes{
    0.00000000000000000e+00, 2.07784955007898468e-01, 4.05845151377397167e-01,
    5.86087235467691130e-01, 7.41531185599394440e-01, 8.64864423359769073e-01,
    9.49107912342758525e-01, 9.91455371120812639e-01,
};
inline constexpr std::array<double, 8> kKronrodWeights{
    2.09482141084727828e-01, 2.04432940075298892e-01, 1.90350578064785410e-01,
    1.69004726639267903e-01, 1.40653259715525919e-01, 1.04790010322250184e-01,
    6.30920926299785533e-02, 2.29353220105292250e-02,
};
// Gauss weights for nodes 0, 2, 4, 6 of the Kronrod set.
inline constexpr std::array<double, 4> kGaussWeights{
    4.17959183673469388e-01, 3.81830050505118945e-01, 2.79705391489276668e-01,
    1.29484966168869693e-01,
};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double magnitude;  // integral of |f|, for the round-off floor
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[0];
    double gauss = fc * kGaussWeights[0];
    double magnitude = std::abs(fc) * kKronrodWeights[0];
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kKronrodWeights[i] * (f1 + f2);
        magnitude += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (f1 + f2);
    }
    return Segment{a, b, kronrod * half, std::abs((kronrod - gauss) * half), magnitude * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.
/// The segment with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol * |value|) or max_intervals is reached.
template <class F>
    requires std::invocable<F&, double>
QuadratureResult integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
    QuadratureResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    if (b < a) {
        result = integrate(f, b, a, opts);
        result.value = -result.value;
        return result;
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();

    std::priority_queue<detail::Segment> active;
    double settled_value = 0.0;
    double settled_error = 0.0;
    active.push(detail::kronrod15(f, a, b));
    int evaluations = 15;

    auto totals = [&] {
        double value = settled_value;
        double error = settled_error;
        auto copy = active;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value, error};
    };

    double value = active.top().value;
    double error = active.top().error;
    int intervals = 1;
    while (true) {
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
        if (error <= tol || active.empty()) break;
        if (intervals >= opts.max_intervals) break;
        detail::Segment worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const bool at_roundoff = worst.error <= 50.0 * eps * worst.magnitude ||
                                 mid <= worst.a || mid >= worst.b;
        if (at_roundoff) {
            settled_value += worst.value;
            settled_error += worst.error;
            continue;
        }
        detail::Segment left = detail::kronrod15(f, worst.a, mid);
        detail::Segment right = detail::kronrod15(f, mid, worst.b);
        evaluations += 30;
        ++intervals;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        // Running sums drift; resynchronise occasionally.
        if (intervals % 64 == 0) std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    result.value = value;
    result.error = error;
    result.evaluations = evaluations;
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    result.converged = error <= tol || active.empty() ||
                       error <= 100.0 * eps * std::abs(value);
    return result;
}

struct RootResult {
    double root = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection on a bracket with f(lo) and f(hi) of opposite signs. Stops when
/// hi - lo <= abs_tol, when the midpoint is no longer representable between
/// the ends, or after max_iterations.
template <class F>
    requires std::invocable<F&, double>
RootResult bisect(F&& f, double lo, double hi, double abs_tol = 1e-12, int max_iterations = 200) {
    double f_lo = f(lo);
    RootResult result;
    for (int i = 0; i < max_iterations; ++i) {
        result.iterations = i + 1;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= abs_tol) break;
    }
    result.root = 0.5 * (lo + hi);
    result.converged = hi - lo <= abs_tol || std::nextafter(lo, hi) >= hi;
    return result;
}

}  // namespace surplus::numerics
