#pragma once

#include "surplus/model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace surplus {

enum class Scheme { EulerLog, EulerDirect };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);  // "euler-log" | "euler-direct"

// Default per-path limit on integration steps.
inline constexpr std::int64_t kMaxStepsPerPath = 100'000'000;

struct SimControls {
    double dt = 0.01;         // base step
    double t_max = 50.0;      // censoring horizon
    double x_cap = 1e6;       // explosion threshold
    std::int64_t n_paths = 10000;
    std::uint64_t master_seed = 1;
    Scheme scheme = Scheme::EulerLog;
    unsigned workers = 1;     // engine threads; results do not depend on it
    std::int64_t max_steps = kMaxStepsPerPath;  // per-path step budget


    // Throws ConfigError.
    void validate(double initial_surplus) const;
};

// Largest log-drift increment |p(X)-p(0)|/X * h allowed in one step.
inline constexpr double kMaxDriftPerStep = 0.05;

/// Explosion threshold from which the between-claims diffusion returns to
/// max(x, E[Y]) with probability below 1e-6; +inf when it cannot explode.
double default_explosion_cap(const ModelParams& params);

/// dt = 0.01, t_max = 50 / lambda, x_cap = default_explosion_cap, 10^4 paths.
SimControls default_controls(const ModelParams& params);

/// Controls for the pure diffusion: t_max = 50, x_cap with return probability
/// below 1e-6 to the starting point x.
SimControls default_diffusion_controls(const DriftSpec& drift, double b, double x);

enum class PathStatus { Ruined, Exploded, Censored, ExitedLow };

std::string to_string(PathStatus status);

struct PathOutcome {
    PathStatus status = PathStatus::Censored;
    double time = 0.0;     // ruin / explosion / exit time, or t_max when censored
    double surplus = 0.0;  // X at `time`: X_tau < 0 on ruin, the censored value, or the level crossed
    std::int64_t n_claims = 0;
    double sup_surplus = 0.0;
    std::int64_t steps = 0;
};

struct OutcomeCounts {
    std::int64_t ruined = 0;
    std::int64_t exploded = 0;
    std::int64_t censored = 0;
    std::int64_t exited_low = 0;
};

struct MCEstimate {
    double point = 0.0;
    double std_error = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 1.0;
    std::int64_t n_paths = 0;
    OutcomeCounts counts;
    double censored_fraction = 0.0;
};

/// Binomial estimate with Wilson 95% interval.
MCEstimate make_estimate(std::int64_t successes, std::int64_t n, const OutcomeCounts& counts);

/// One path of the jump-diffusion up to ruin, explosion (X >= x_cap) or t_max.
/// Claim epochs are exact exponential draws; the diffusion is stepped between them.
PathOutcome simulate_path(const ModelParams& params, const SimControls& controls, std::uint64_t path_index);

std::vector<PathOutcome> simulate_paths(const ModelParams& params, const SimControls& controls);

OutcomeCounts tally(std::span<const PathOutcome> outcomes);

/// Fraction of ruined paths. Censored and exploded paths count as not ruined.
MCEstimate estimate_ruin(const ModelParams& params, const SimControls& controls);

/// One path of dX = p(X) dt + b X dW until X >= x_cap, X <= floor or t_max.
PathOutcome simulate_diffusion_path(const DriftSpec& drift, double b, double x, double floor,
                                    const SimControls& controls, std::uint64_t path_index);

std::vector<PathOutcome> simulate_diffusion_paths(const DriftSpec& drift, double b, double x, double floor,
                                                  const SimControls& controls);

/// P[exit at +inf] for the pure diffusion, with floor 1e-6 x.
MCEstimate estimate_explosion_diffusion(const DriftSpec& drift, double b, double x, const SimControls& controls);

struct ExitTimeEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_exited = 0;
    std::int64_t n_censored = 0;
};

/// Mean first exit time from (floor, x_cap), over paths that exit before t_max.
ExitTimeEstimate estimate_exit_time_diffusion(const DriftSpec& drift, double b, double x, double floor,
                                              const SimControls& controls);

struct ProfilePoint {
    double t;
    double mean_v;
    double std_error;
};

/// Empirical mean of V_t = exp(-r X_{t ^ tau ^ t*}) on the time grid, with V = 0
/// after explosion and V = exp(-r X_tau) frozen after ruin. The horizon is the
/// last grid time; controls.t_max is not used. Throws InfeasibleRate when the
/// supermartingale condition fails at r.
std::vector<ProfilePoint> supermartingale_profile(const ModelParams& params, double r,
                                                  std::span<const double> times, const SimControls& controls);

}  // namespace surplus
