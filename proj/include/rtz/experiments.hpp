#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rtz/coeffs.hpp"
#include "rtz/sampling.hpp"

namespace rtz {

/// Upper limit on the truncation degree a campaign may request.
inline constexpr std::size_t kMaxCampaignDegree = std::size_t{1} << 22;

/// One Monte Carlo campaign over the dyadic intervals [1 - q^n, 1 - q^(n+1)).
///
/// Cost is dominated by the truncation degree K(r_max), which for L = 1 grows like
/// log(1/delta^2) / (2 (1 - r_max)) with r_max = max(1 - q^(n_max+1), 1 - q^cumulative_n_max).
struct ExperimentConfig {
    double gamma = 1.0;
    SlowVariation slow = SlowVariation::constant();
    CoefficientLaw law = CoefficientLaw::Rademacher;
    double q = 0.5;
    int n_min = 4;
    int n_max = 10;
    std::size_t trials = 2000;
    double delta = 1e-6;
    double eta = 0.02;
    std::uint64_t master_seed = 20160101;
    /// Cumulative counts N[0, 1 - q^n] for n in this range; 0 disables them.
    int cumulative_n_min = 5;
    int cumulative_n_max = 10;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    CoefficientSequence sequence() const { return CoefficientSequence(gamma, slow); }
    std::vector<double> cumulative_radii() const;
    /// Right end of the largest scanned interval.
    double r_max() const;
    std::size_t truncation() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// 1 - q^n, computed the same way everywhere so tiles meet exactly.
double tile_point(double q, int n);

/// Limit of E N[1 - q^n, 1 - q^(n+1)): -sqrt(gamma) log(q) / (2 pi).
double interval_target(double gamma, double q);

/// Limit slope of E N[0,r] against -log(1-r): sqrt(gamma) / (2 pi).
double slope_target(double gamma);

struct IntervalEstimate {
    int n = 0;
    double q = 0.5;
    double gamma = 1.0;
    CoefficientLaw law = CoefficientLaw::Rademacher;
    std::size_t trials = 0;
    double mean_count = 0.0;
    bool sd_defined = false;  ///< false for a single trial; sd, stderr and ci are NaN then
    double sd = 0.0;
    double stderr_ = 0.0;
    std::pair<double, double> ci95{0.0, 0.0};
    double unstable_fraction = 0.0;
    double target = 0.0;
};

struct SlopePoint {
    double r = 0.0;
    double log_scale = 0.0;  ///< -log(1 - r)
    double mean_count = 0.0;
    double stderr_ = 0.0;
};

struct SlopeReport {
    std::vector<SlopePoint> points;
    std::optional<double> fitted_slope;  ///< least squares over the last ceil(m/2) points
    double target = 0.0;
    std::optional<double> relative_gap;
};

struct SimulationResult {
    std::size_t truncation_degree = 0;
    std::vector<IntervalEstimate> intervals;
    SlopeReport slope;
};

/// Per-interval zero counts for n in [n_min, n_max], one drawn series per trial.
/// Trial i uses seed derive_seed(master_seed, i); output is independent of `jobs`.
std::vector<IntervalEstimate> run_interval_experiment(const ExperimentConfig& config, unsigned jobs = 1);

/// E N[0,r] for each r by summing counts over the dyadic tiling of [0, r).
SlopeReport run_cumulative(const ExperimentConfig& config, std::span<const double> r_list,
                           unsigned jobs = 1);

/// Both of the above from a single pass over the trials.
SimulationResult run_simulation(const ExperimentConfig& config, unsigned jobs = 1);

/// Least-squares slope of |mean - target| against n; <= 0 means the gap shrinks.
double discrepancy_trend(std::span<const IntervalEstimate> intervals);

struct GaussOracleSummary {
    double gamma = 1.0;
    double a = 1.0;
    double b = 1.0;
    std::size_t paths = 0;
    double eta = 0.01;
    std::uint64_t seed = 0;
    std::size_t grid_points = 0;  ///< coarse grid size (the fine grid has twice the steps)
    double jitter = 0.0;
    double mean_count = 0.0;
    bool sd_defined = false;
    double sd = 0.0;
    double stderr_ = 0.0;
    double unstable_fraction = 0.0;
    double target = 0.0;
    /// 3 stderr + 2% of target.
    double tolerance = 0.0;
    bool within_tolerance = false;
};

/// Zero counts of Y on [log a, log b] against the Rice value. a == b gives zero exactly.
GaussOracleSummary run_gaussian_oracle(double gamma, double a, double b, std::size_t paths, double eta,
                                       std::uint64_t seed, unsigned jobs = 1);

struct LawComparison {
    CoefficientLaw first;
    CoefficientLaw second;
    int n = 0;
    double delta_mean = 0.0;
    double combined_stderr = 0.0;
    bool within_3se = false;
};

struct UniversalityTable {
    int n = 0;
    std::vector<IntervalEstimate> per_law;
    std::vector<LawComparison> pairs;
};

/// Pairwise comparison of per-law estimates at interval n.
UniversalityTable compare_laws(std::span<const std::vector<IntervalEstimate>> per_law_runs, int n);

/// Runs the interval experiment once per law (same config otherwise) and compares at n_max.
UniversalityTable run_universality(const ExperimentConfig& config, std::span<const CoefficientLaw> laws,
                                   unsigned jobs = 1);

/// Fraction of trials whose zero count on [0, r_max) changes when K is doubled.
double truncation_audit(const ExperimentConfig& config, std::size_t trials, unsigned jobs = 1);

}  // namespace rtz
