#include "surplus/simulator.hpp"

#include "surplus/errors.hpp"
#include "surplus/rng.hpp"
#include "surplus/scale_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace surplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapTolerance = 1e-6;
constexpr double kDiffusionFloorFraction = 1e-6;

// Runs fn(i) for i in [0, n) on `workers` threads. fn must only write to
// per-index state, so the result is independent of the schedule.
template <class Fn>
void parallel_for(std::int64_t n, unsigned workers, Fn&& fn) {
    const std::int64_t threads = std::clamp<std::int64_t>(workers, 1, std::max<std::int64_t>(n, 1));
    if (threads == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    constexpr std::int64_t kChunk = 64;
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        while (true) {
            const std::int64_t start = next.fetch_add(kChunk);
            if (start >= n) return;
            const std::int64_t stop = std::min(n, start + kChunk);
            try {
                for (std::int64_t i = start; i < stop; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (std::int64_t t = 0; t < threads; ++t) pool.emplace_back(body);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

// Between-claims integrator for dX = p(X) dt + b X dW on X > 0.
class Stepper {
public:
    Stepper(const DriftSpec& drift, double b, const SimControls& controls)
        : drift_(drift),
          b_(b),
          p0_(drift_at(drift, 0.0)),
          dt_(controls.dt),
          cap_(controls.x_cap),
          scheme_(controls.scheme) {}

    double step_size(double x) const {
        double h = dt_;
        // Log-drift rate |p(X) - p(0)| / X + p(0) / X; the second term is capped
        // at p(0) / (p(0) dt) = 1 / dt so that a step from X = 0 stays positive.
        const double rate = std::abs(drift_secant_slope(drift_, x)) + (p0_ > 0.0 ? p0_ / std::max(x, p0_ * dt_) : 0.0);
        if (rate * h > kMaxDriftPerStep) h = kMaxDriftPerStep / rate;
        const double near_cap = cap_ / 8.0;
        if (x > near_cap) {
            const double ratio = near_cap / x;
            h = std::min(h, dt_ * ratio * ratio);
        }
        return h;
    }

    // One step of length h with standard normal z.
    double advance(double x, double h, double z) const {
        const double dw = std::sqrt(h) * z;
        if (scheme_ == Scheme::EulerDirect) {
            const double next = x + drift_at(drift_, x, DriftMode::JumpModel) * h + b_ * x * dw;
            if (next > 0.0) return next;
        }
        return log_step(x, h, dw);
    }

    double b() const { return b_; }

private:
    // Euler in log X. The constant premium p(0) enters additively, which keeps
    // the step finite as X -> 0 and agrees with p(0)/X in the log drift to first order.
    double log_step(double x, double h, double dw) const {
        const double slope = drift_secant_slope(drift_, x);
        return (x + p0_ * h) * std::exp((slope - 0.5 * b_ * b_) * h + b_ * dw);
    }

    DriftSpec drift_;
    double b_;
    double p0_;
    double dt_;
    double cap_;
    Scheme scheme_;
};

void check_between_claims(double x) {
    if (!(x > 0.0)) throw std::logic_error("surplus left (0, inf) between claims");
}

// Jump-diffusion path that can be advanced to successive horizons.
class JumpPath {
public:
    JumpPath(const ModelParams& params, const SimControls& controls, std::uint64_t path_index)
        : claims_(params.claims),
          stepper_(params.drift(), params.b, controls),
          rng_(path_rng(controls.master_seed, path_index)),
          inter_claim_(params.lambda),
          cap_(controls.x_cap),
          max_steps_(controls.max_steps),
          x_(params.x),
          sup_(params.x) {
        next_claim_ = inter_claim_(rng_);
        if (x_ >= cap_) status_ = PathStatus::Exploded;
    }

    bool alive() const { return status_ == PathStatus::Censored; }
    double time() const { return t_; }
    double surplus() const { return x_; }
    PathStatus status() const { return status_; }

    void advance_to(double horizon) {
        while (alive() && t_ < horizon) {
            integrate_until(std::min(next_claim_, horizon));
            if (!alive() || next_claim_ > horizon) return;
            x_ -= sample(claims_, rng_);
            ++n_claims_;
            if (x_ < 0.0) {
                status_ = PathStatus::Ruined;
                return;
            }
            next_claim_ += inter_claim_(rng_);
        }
    }

    PathOutcome outcome() const {
        return PathOutcome{status_, t_, x_, n_claims_, sup_, steps_};
    }

private:
    void integrate_until(double target) {
        while (t_ < target) {
            const double remaining = target - t_;
            double h = stepper_.step_size(x_);
            const bool last = h >= remaining;
            if (last) h = remaining;
            x_ = stepper_.advance(x_, h, normal_(rng_));
            t_ = last ? target : t_ + h;
            if (++steps_ > max_steps_) throw SimulationBudgetExceeded("path exceeded the step budget");
            check_between_claims(x_);
            sup_ = std::max(sup_, x_);
            if (x_ >= cap_) {
                status_ = PathStatus::Exploded;
                return;
            }
        }
    }

    ClaimDistribution claims_;
    Stepper stepper_;
    Rng rng_;
    std::exponential_distribution<double> inter_claim_;
    std::normal_distribution<double> normal_;
    double cap_;
    std::int64_t max_steps_;
    double x_;
    double sup_;
    double t_ = 0.0;
    double next_claim_ = 0.0;
    std::int64_t n_claims_ = 0;
    std::int64_t steps_ = 0;
    PathStatus status_ = PathStatus::Censored;
};

struct Moments {
    double mean;
    double std_error;
};

// Shifted two-pass moments; identical samples give their common value exactly.
Moments sample_moments(std::span<const double> values) {
    if (values.empty()) return {0.0, 0.0};
    const double ref = values.front();
    double sum = 0.0;
    for (double v : values) sum += v - ref;
    const double n = static_cast<double>(values.size());
    const double shift = sum / n;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - ref - shift;
        ss += d * d;
    }
    const double variance = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {ref + shift, std::sqrt(variance / n)};
}

}  // namespace

std::string to_string(Scheme scheme) {
    return scheme == Scheme::EulerLog ? "euler-log" : "euler-direct";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "euler-log") return Scheme::EulerLog;
    if (name == "euler-direct") return Scheme::EulerDirect;
    throw ConfigError("unknown scheme '" + name + "' (expected euler-log or euler-direct)");
}

std::string to_string(PathStatus status) {
    switch (status) {
        case PathStatus::Ruined: return "ruined";
        case PathStatus::Exploded: return "exploded";
        case PathStatus::Censored: return "censored";
        case PathStatus::ExitedLow: return "exited_low";
    }
    return "unknown";
}

void SimControls::validate(double initial_surplus) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("controls: dt must be > 0");
    if (!(t_max > dt) || !std::isfinite(t_max)) throw ConfigError("controls: t_max must exceed dt");
    if (!(x_cap > initial_surplus)) throw ConfigError("controls: x_cap must exceed the initial surplus");
    if (n_paths < 1) throw ConfigError("controls: paths must be >= 1");
    if (max_steps < 1) throw ConfigError("controls: max_steps must be >= 1");
}

double default_explosion_cap(const ModelParams& params) {
    params.validate();
    const double reference = std::max(params.x, mean(params.claims));
    try {
        return explosion_cap(params.drift(), params.b, reference, kCapTolerance);
    } catch (const DomainError&) {
        return kInf;
    }
}

SimControls default_controls(const ModelParams& params) {
    SimControls controls;
    controls.t_max = 50.0 / params.lambda;
    controls.x_cap = default_explosion_cap(params);
    controls.workers = std::max(1u, std::thread::hardware_concurrency());
    return controls;
}

SimControls default_diffusion_controls(const DriftSpec& drift, double b, double x) {
    SimControls controls;
    controls.t_max = 50.0;
    try {
        controls.x_cap = explosion_cap(drift, b, x, kCapTolerance);
    } catch (const DomainError&) {
        controls.x_cap = kInf;
    }
    controls.workers = std::max(1u, std::thread::hardware_concurrency());
    return controls;
}

MCEstimate make_estimate(std::int64_t successes, std::int64_t n, const OutcomeCounts& counts) {
    MCEstimate est;
    est.n_paths = n;
    est.counts = counts;
    if (n <= 0) return est;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    est.point = p;
    est.std_error = std::sqrt(p * (1.0 - p) / nn);
    constexpr double z = 1.959963984540054;
    const double z2n = z * z / nn;
    const double center = (p + z2n / 2.0) / (1.0 + z2n);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2n / (4.0 * nn)) / (1.0 + z2n);
    est.ci95_lo = std::clamp(std::min(center - half, p), 0.0, 1.0);
    est.ci95_hi = std::clamp(std::max(center + half, p), 0.0, 1.0);
    est.censored_fraction = static_cast<double>(counts.censored) / nn;
    return est;
}

PathOutcome simulate_path(const ModelParams& params, const SimControls& controls, std::uint64_t path_index) {
    JumpPath path(params, controls, path_index);
    path.advance_to(controls.t_max);
    return path.outcome();
}

std::vector<PathOutcome> simulate_paths(const ModelParams& params, const SimControls& controls) {
    params.validate();
    controls.validate(params.x);
    std::vector<PathOutcome> outcomes(static_cast<std::size_t>(controls.n_paths));
    parallel_for(controls.n_paths, controls.workers, [&](std::int64_t i) {
        outcomes[static_cast<std::size_t>(i)] = simulate_path(params, controls, static_cast<std::uint64_t>(i));
    });
    return outcomes;
}

OutcomeCounts tally(std::span<const PathOutcome> outcomes) {
    OutcomeCounts counts;
    for (const auto& o : outcomes) {
        switch (o.status) {
            case PathStatus::Ruined: ++counts.ruined; break;
            case PathStatus::Exploded: ++counts.exploded; break;
            case PathStatus::Censored: ++counts.censored; break;
            case PathStatus::ExitedLow: ++counts.exited_low; break;
        }
    }
    return counts;
}

MCEstimate estimate_ruin(const ModelParams& params, const SimControls& controls) {
    const auto outcomes = simulate_paths(params, controls);
    const OutcomeCounts counts = tally(outcomes);
    return make_estimate(counts.ruined, controls.n_paths, counts);
}

PathOutcome simulate_diffusion_path(const DriftSpec& drift, double b, double x, double floor,
                                    const SimControls& controls, std::uint64_t path_index) {
    const Stepper stepper(drift, b, controls);
    Rng rng = path_rng(controls.master_seed, path_index);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    const double log_floor = std::log(floor);
    const double b2 = b * b;

    PathOutcome out;
    out.sup_surplus = x;
    double t = 0.0;
    double level = x;
    if (level >= controls.x_cap) return PathOutcome{PathStatus::Exploded, 0.0, level, 0, level, 0};
    while (t < controls.t_max) {
        const double remaining = controls.t_max - t;
        double h = stepper.step_size(level);
        const bool last = h >= remaining;
        if (last) h = remaining;
        const double next = stepper.advance(level, h, normal(rng));
        if (++out.steps > controls.max_steps) throw SimulationBudgetExceeded("path exceeded the step budget");
        check_between_claims(next);

        // Floor crossing at the end point or, via the Brownian bridge in log X, inside the step.
        bool crossed = next <= floor;
        if (!crossed) {
            const double gap = (std::log(level) - log_floor) * (std::log(next) - log_floor);
            const double p_cross = std::exp(-2.0 * gap / (b2 * h));
            if (p_cross > 1e-12) crossed = uniform(rng) < p_cross;
        }
        if (crossed) {
            out.status = PathStatus::ExitedLow;
            out.time = t + 0.5 * h;
            out.surplus = floor;
            return out;
        }
        level = next;
        t = last ? controls.t_max : t + h;
        out.sup_surplus = std::max(out.sup_surplus, level);
        if (level >= controls.x_cap) {
            out.status = PathStatus::Exploded;
            out.time = t;
            out.surplus = level;
            return out;
        }
    }
    out.status = PathStatus::Censored;
    out.time = controls.t_max;
    out.surplus = level;
    return out;
}

std::vector<PathOutcome> simulate_diffusion_paths(const DriftSpec& drift, double b, double x, double floor,
                                                  const SimControls& controls) {
    drift.validate();
    if (!(b > 0.0)) throw ConfigError("diffusion: b must be > 0");
    if (!(x > 0.0)) throw ConfigError("diffusion: x must be > 0");
    if (!(floor > 0.0 && floor < x)) throw ConfigError("diffusion: floor must lie in (0, x)");
    controls.validate(x);
    std::vector<PathOutcome> outcomes(static_cast<std::size_t>(controls.n_paths));
    parallel_for(controls.n_paths, controls.workers, [&](std::int64_t i) {
        outcomes[static_cast<std::size_t>(i)] =
            simulate_diffusion_path(drift, b, x, floor, controls, static_cast<std::uint64_t>(i));
    });
    return outcomes;
}

MCEstimate estimate_explosion_diffusion(const DriftSpec& drift, double b, double x, const SimControls& controls) {
    const auto outcomes = simulate_diffusion_paths(drift, b, x, kDiffusionFloorFraction * x, controls);
    const OutcomeCounts counts = tally(outcomes);
    return make_estimate(counts.exploded, controls.n_paths, counts);
}

ExitTimeEstimate estimate_exit_time_diffusion(const DriftSpec& drift, double b, double x, double floor,
                                              const SimControls& controls) {
    const auto outcomes = simulate_diffusion_paths(drift, b, x, floor, controls);
    std::vector<double> times;
    times.reserve(outcomes.size());
    ExitTimeEstimate est;
    for (const auto& o : outcomes) {
        if (o.status == PathStatus::Censored) {
            ++est.n_censored;
        } else {
            times.push_back(o.time);
        }
    }
    const Moments m = sample_moments(times);
    est.mean = m.mean;
    est.std_error = m.std_error;
    est.n_exited = static_cast<std::int64_t>(times.size());
    return est;
}

std::vector<ProfilePoint> supermartingale_profile(const ModelParams& params, double r,
                                                  std::span<const double> times, const SimControls& controls) {
    params.validate();
    if (times.empty()) throw ConfigError("supermartingale: time grid is empty");
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
        throw ConfigError("supermartingale: time grid must be nonnegative and nondecreasing");
    }
    SimControls horizon = controls;
    horizon.t_max = std::max(times.back(), 2.0 * controls.dt);
    horizon.validate(params.x);
    if (!check_supermartingale_condition(params, r).feasible) {
        throw InfeasibleRate("supermartingale condition fails at r = " + std::to_string(r));
    }

    const std::size_t grid = times.size();
    const auto n = static_cast<std::size_t>(controls.n_paths);
    std::vector<double> v(n * grid);
    parallel_for(controls.n_paths, controls.workers, [&](std::int64_t i) {
        JumpPath path(params, horizon, static_cast<std::uint64_t>(i));
        double* row = v.data() + static_cast<std::size_t>(i) * grid;
        for (std::size_t j = 0; j < grid; ++j) {
            path.advance_to(times[j]);
            row[j] = path.status() == PathStatus::Exploded ? 0.0 : std::exp(-r * path.surplus());
        }
    });

    std::vector<ProfilePoint> profile;
    std::vector<double> column(n);
    for (std::size_t j = 0; j < grid; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = v[i * grid + j];
        const Moments m = sample_moments(column);
        profile.push_back(ProfilePoint{times[j], m.mean, m.std_error});
    }
    return profile;
}

}  // namespace surplus
