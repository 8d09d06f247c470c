#include "rtz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "rtz/errors.hpp"
#include "rtz/gauss.hpp"
#include "rtz/parallel.hpp"
#include "rtz/roots.hpp"
#include "rtz/stats.hpp"

namespace rtz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
    throw ConfigError(fmt::format("{}: {}", field, message), field);
}

// Half-open pieces [bounds[p], bounds[p+1]) covering [0, bounds.back()).
struct Tiling {
    std::vector<double> bounds;
    std::vector<ScanGrid> grids;

    std::size_t pieces() const { return grids.size(); }
};

Tiling make_tiling(const ExperimentConfig& config, double r_end, std::span<const double> extra) {
    Tiling t;
    for (int j = 0;; ++j) {
        const double p = tile_point(config.q, j);
        if (p > r_end)
            break;
        t.bounds.push_back(p);
        if (p == r_end)
            break;
    }
    for (double r : extra)
        if (r <= r_end)
            t.bounds.push_back(r);
    t.bounds.push_back(r_end);
    std::sort(t.bounds.begin(), t.bounds.end());
    t.bounds.erase(std::unique(t.bounds.begin(), t.bounds.end()), t.bounds.end());
    for (std::size_t p = 0; p + 1 < t.bounds.size(); ++p) {
        auto grid = ScanGrid::log_scale(t.bounds[p], t.bounds[p + 1], config.eta, config.gamma);
        grid.set_half_open(true);
        t.grids.push_back(grid);
    }
    return t;
}

// Row-major trials x pieces.
struct CampaignCounts {
    std::size_t trials = 0;
    std::size_t pieces = 0;
    std::vector<std::uint32_t> counts;
    std::vector<std::uint8_t> unstable;

    std::uint32_t count(std::size_t trial, std::size_t piece) const { return counts[trial * pieces + piece]; }
    bool is_unstable(std::size_t trial, std::size_t piece) const { return unstable[trial * pieces + piece] != 0; }
};

template <class Body>
void run_guarded(std::size_t trials, unsigned jobs, std::uint64_t master_seed, Body&& body) {
    parallel_for(trials, jobs, [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(master_seed, i);
        try {
            body(i, seed);
        } catch (const TrialError&) {
            throw;
        } catch (const std::exception& e) {
            throw TrialError(fmt::format("trial {} (seed {}) failed: {}", i, seed, e.what()), i, seed);
        }
    });
}

CampaignCounts run_trials(const ExperimentConfig& config, const Tiling& tiling, std::size_t K,
                          unsigned jobs) {
    const CoefficientSequence seq = config.sequence();
    const TruncationPolicy policy{tiling.bounds.back(), config.delta};

    CampaignCounts out;
    out.trials = config.trials;
    out.pieces = tiling.pieces();
    out.counts.assign(out.trials * out.pieces, 0);
    out.unstable.assign(out.trials * out.pieces, 0);

    run_guarded(config.trials, jobs, config.master_seed, [&](std::size_t i, std::uint64_t seed) {
        SeriesSample sample = draw_sample(seq, config.law, seed, K);
        sample.attach_policy(policy);
        const auto eval = [&sample](double x) { return evaluate(sample, x); };
        for (std::size_t p = 0; p < out.pieces; ++p) {
            const ZeroCount zc = count_zeros_fast(eval, tiling.grids[p]);
            out.counts[i * out.pieces + p] = static_cast<std::uint32_t>(zc.count);
            out.unstable[i * out.pieces + p] = zc.stable ? 0 : 1;
        }
    });
    return out;
}

void fill_moments(IntervalEstimate& est, const RunningStats& stats) {
    est.trials = stats.count();
    est.mean_count = stats.mean();
    est.sd_defined = stats.count() > 1;
    if (est.sd_defined) {
        est.sd = stats.sd();
        est.stderr_ = stats.stderr_of_mean();
        est.ci95 = {est.mean_count - 1.96 * est.stderr_, est.mean_count + 1.96 * est.stderr_};
    } else {
        est.sd = est.stderr_ = kNaN;
        est.ci95 = {kNaN, kNaN};
    }
}

std::vector<IntervalEstimate> aggregate_intervals(const ExperimentConfig& config, const Tiling& tiling,
                                                  const CampaignCounts& counts) {
    std::vector<IntervalEstimate> out;
    for (int n = config.n_min; n <= config.n_max; ++n) {
        const double lo = tile_point(config.q, n);
        const double hi = tile_point(config.q, n + 1);
        std::vector<std::size_t> members;
        for (std::size_t p = 0; p < tiling.pieces(); ++p)
            if (tiling.bounds[p] >= lo && tiling.bounds[p] < hi)
                members.push_back(p);

        RunningStats stats;
        std::size_t unstable = 0;
        for (std::size_t i = 0; i < counts.trials; ++i) {
            std::uint32_t c = 0;
            bool bad = false;
            for (std::size_t p : members) {
                c += counts.count(i, p);
                bad = bad || counts.is_unstable(i, p);
            }
            stats.add(static_cast<double>(c));
            unstable += bad ? 1 : 0;
        }

        IntervalEstimate est;
        est.n = n;
        est.q = config.q;
        est.gamma = config.gamma;
        est.law = config.law;
        fill_moments(est, stats);
        est.unstable_fraction = static_cast<double>(unstable) / static_cast<double>(counts.trials);
        est.target = interval_target(config.gamma, config.q);
        out.push_back(est);
    }
    return out;
}

SlopeReport aggregate_slope(const ExperimentConfig& config, const Tiling& tiling,
                            const CampaignCounts& counts, std::span<const double> r_list) {
    SlopeReport report;
    report.target = slope_target(config.gamma);
    for (double r : r_list) {
        RunningStats stats;
        for (std::size_t i = 0; i < counts.trials; ++i) {
            std::uint32_t c = 0;
            for (std::size_t p = 0; p < tiling.pieces() && tiling.bounds[p + 1] <= r; ++p)
                c += counts.count(i, p);
            stats.add(static_cast<double>(c));
        }
        report.points.push_back({r, -std::log1p(-r), stats.mean(),
                                 stats.count() > 1 ? stats.stderr_of_mean() : kNaN});
    }
    const std::size_t m = report.points.size();
    const std::size_t used = (m + 1) / 2;
    if (used >= 2) {
        std::vector<double> xs, ys;
        for (std::size_t j = m - used; j < m; ++j) {
            xs.push_back(report.points[j].log_scale);
            ys.push_back(report.points[j].mean_count);
        }
        report.fitted_slope = ols_slope(xs, ys);
        report.relative_gap = (*report.fitted_slope - report.target) / report.target;
    }
    return report;
}

void check_radii(std::span<const double> r_list) {
    for (double r : r_list)
        if (!(r > 0.0 && r < 1.0))
            throw DomainError(fmt::format("cumulative radius must lie in (0,1), got {}", r));
}

}  // namespace

double tile_point(double q, int n) { return 1.0 - std::pow(q, n); }

double interval_target(double gamma, double q) {
    return -std::sqrt(gamma) * std::log(q) / (2.0 * std::numbers::pi);
}

double slope_target(double gamma) { return std::sqrt(gamma) / (2.0 * std::numbers::pi); }

void ExperimentConfig::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        invalid("gamma", fmt::format("must be positive, got {}", gamma));
    if (!(q > 0.0 && q < 1.0))
        invalid("q", fmt::format("must lie in (0,1), got {}", q));
    if (n_min < 0)
        invalid("n_min", fmt::format("must be >= 0, got {}", n_min));
    if (n_max < n_min)
        invalid("n_max", fmt::format("must be >= n_min = {}, got {}", n_min, n_max));
    if (trials < 1)
        invalid("trials", "must be at least 1");
    if (!(delta > 0.0 && delta < 1.0))
        invalid("delta", fmt::format("must lie in (0,1), got {}", delta));
    if (!(eta > 0.0 && eta <= 1.0))
        invalid("eta", fmt::format("must lie in (0,1], got {}", eta));
    if (cumulative_n_max != 0) {
        if (cumulative_n_min < 1)
            invalid("cumulative_n_min", fmt::format("must be >= 1, got {}", cumulative_n_min));
        if (cumulative_n_max < cumulative_n_min)
            invalid("cumulative_n_max",
                    fmt::format("must be >= cumulative_n_min = {} (or 0 to disable)", cumulative_n_min));
    }
    const double r = r_max();
    if (!(r < 1.0))
        invalid("n_max", fmt::format("1 - q^(n+1) rounds to 1 in double precision"));
    // Past degree 1/(1-r) a fixed fraction of v(r) remains, so such radii cannot fit the
    // budget; rejecting them here also avoids summing v over billions of terms.
    if (1.0 - r < 1.0 / static_cast<double>(kMaxCampaignDegree))
        invalid("n_max", fmt::format("radius {} is closer to 1 than the degree budget {} can resolve", r,
                                     kMaxCampaignDegree));
    std::size_t K = 0;
    try {
        K = truncation_degree(sequence(), {r, delta});
    } catch (const std::exception& e) {
        invalid("n_max", fmt::format("truncation degree unavailable: {}", e.what()));
    }
    if (K > kMaxCampaignDegree)
        invalid("n_max", fmt::format("needs truncation degree {} > budget {}", K, kMaxCampaignDegree));
}

std::vector<double> ExperimentConfig::cumulative_radii() const {
    std::vector<double> out;
    if (cumulative_n_max == 0)
        return out;
    for (int n = cumulative_n_min; n <= cumulative_n_max; ++n)
        out.push_back(tile_point(q, n));
    return out;
}

double ExperimentConfig::r_max() const {
    double r = tile_point(q, n_max + 1);
    for (double c : cumulative_radii())
        r = std::max(r, c);
    return r;
}

std::size_t ExperimentConfig::truncation() const { return truncation_degree(sequence(), {r_max(), delta}); }

std::vector<IntervalEstimate> run_interval_experiment(const ExperimentConfig& config, unsigned jobs) {
    config.validate();
    const double r_end = tile_point(config.q, config.n_max + 1);
    const Tiling tiling = make_tiling(config, r_end, {});
    const std::size_t K = truncation_degree(config.sequence(), {r_end, config.delta});
    return aggregate_intervals(config, tiling, run_trials(config, tiling, K, jobs));
}

SlopeReport run_cumulative(const ExperimentConfig& config, std::span<const double> r_list, unsigned jobs) {
    config.validate();
    check_radii(r_list);
    if (r_list.empty()) {
        SlopeReport empty;
        empty.target = slope_target(config.gamma);
        return empty;
    }
    const double r_end = *std::max_element(r_list.begin(), r_list.end());
    const Tiling tiling = make_tiling(config, r_end, r_list);
    const std::size_t K = truncation_degree(config.sequence(), {r_end, config.delta});
    return aggregate_slope(config, tiling, run_trials(config, tiling, K, jobs), r_list);
}

SimulationResult run_simulation(const ExperimentConfig& config, unsigned jobs) {
    config.validate();
    const std::vector<double> radii = config.cumulative_radii();
    const Tiling tiling = make_tiling(config, config.r_max(), radii);
    SimulationResult result;
    result.truncation_degree = config.truncation();
    const CampaignCounts counts = run_trials(config, tiling, result.truncation_degree, jobs);
    result.intervals = aggregate_intervals(config, tiling, counts);
    result.slope = aggregate_slope(config, tiling, counts, radii);
    if (radii.empty())
        result.slope.target = slope_target(config.gamma);
    return result;
}

double discrepancy_trend(std::span<const IntervalEstimate> intervals) {
    if (intervals.size() < 2)
        return 0.0;
    std::vector<double> ns, gaps;
    for (const auto& est : intervals) {
        ns.push_back(est.n);
        gaps.push_back(std::abs(est.mean_count - est.target));
    }
    return ols_slope(ns, gaps);
}

GaussOracleSummary run_gaussian_oracle(double gamma, double a, double b, std::size_t paths, double eta,
                                       std::uint64_t seed, unsigned jobs) {
    if (!(gamma > 0.0))
        throw DomainError(fmt::format("gamma must be positive, got {}", gamma));
    if (!(a > 0.0) || !(a <= b) || !std::isfinite(b))
        throw DomainError(fmt::format("Gaussian oracle needs 0 < a <= b, got [{}, {}]", a, b));
    if (paths < 1)
        throw DomainError("Gaussian oracle needs at least one path");
    if (!(eta > 0.0))
        throw DomainError(fmt::format("eta must be positive, got {}", eta));

    GaussOracleSummary s;
    s.gamma = gamma;
    s.a = a;
    s.b = b;
    s.paths = paths;
    s.eta = eta;
    s.seed = seed;
    s.tolerance = 0.0;
    if (a == b) {
        // Empty log-length: no zeros, nothing to sample.
        s.grid_points = 1;
        s.sd_defined = paths > 1;
        s.within_tolerance = true;
        return s;
    }

    const double u0 = std::log(a);
    const double u1 = std::log(b);
    const double h = eta * 2.0 * std::numbers::pi / std::sqrt(gamma);
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((u1 - u0) / h * (1.0 - 1e-12))));
    const std::size_t fine_steps = 2 * steps;
    std::vector<double> fine(fine_steps + 1);
    for (std::size_t i = 0; i <= fine_steps; ++i)
        fine[i] = u0 + (u1 - u0) * (static_cast<double>(i) / static_cast<double>(fine_steps));
    fine.back() = u1;

    const PathSampler sampler(fine, gamma);
    std::vector<std::uint32_t> counts(paths);
    std::vector<std::uint8_t> unstable(paths);
    run_guarded(paths, jobs, seed, [&](std::size_t i, std::uint64_t path_seed) {
        std::vector<double> values(fine.size());
        Rng rng(path_seed);
        sampler.draw(rng, values);
        std::vector<double> coarse;
        coarse.reserve(steps + 1);
        for (std::size_t j = 0; j < values.size(); j += 2)
            coarse.push_back(values[j]);
        const std::size_t c = count_sign_changes(coarse);
        counts[i] = static_cast<std::uint32_t>(c);
        unstable[i] = count_sign_changes(values) != c ? 1 : 0;
    });

    RunningStats stats;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < paths; ++i) {
        stats.add(counts[i]);
        bad += unstable[i];
    }
    s.grid_points = steps + 1;
    s.jitter = sampler.jitter();
    s.mean_count = stats.mean();
    s.sd_defined = paths > 1;
    s.sd = s.sd_defined ? stats.sd() : kNaN;
    s.stderr_ = s.sd_defined ? stats.stderr_of_mean() : kNaN;
    s.unstable_fraction = static_cast<double>(bad) / static_cast<double>(paths);
    s.target = expected_zeros_rice(a, b, gamma);
    s.tolerance = (s.sd_defined ? 3.0 * s.stderr_ : 0.0) + 0.02 * s.target;
    s.within_tolerance = std::abs(s.mean_count - s.target) <= s.tolerance;
    return s;
}

UniversalityTable compare_laws(std::span<const std::vector<IntervalEstimate>> per_law_runs, int n) {
    UniversalityTable table;
    table.n = n;
    for (const auto& run : per_law_runs) {
        auto it = std::find_if(run.begin(), run.end(), [n](const IntervalEstimate& e) { return e.n == n; });
        if (it == run.end())
            throw DomainError(fmt::format("no estimate for interval n = {}", n));
        table.per_law.push_back(*it);
    }
    for (std::size_t i = 0; i < table.per_law.size(); ++i) {
        for (std::size_t j = i + 1; j < table.per_law.size(); ++j) {
            const auto& x = table.per_law[i];
            const auto& y = table.per_law[j];
            LawComparison cmp;
            cmp.first = x.law;
            cmp.second = y.law;
            cmp.n = n;
            cmp.delta_mean = x.mean_count - y.mean_count;
            cmp.combined_stderr = std::hypot(x.stderr_, y.stderr_);
            cmp.within_3se = cmp.delta_mean == 0.0 || std::abs(cmp.delta_mean) < 3.0 * cmp.combined_stderr;
            table.pairs.push_back(cmp);
        }
    }
    return table;
}

UniversalityTable run_universality(const ExperimentConfig& config, std::span<const CoefficientLaw> laws,
                                   unsigned jobs) {
    if (laws.size() < 2)
        throw DomainError("universality comparison needs at least two laws");
    ExperimentConfig single = config;
    single.n_min = config.n_max;
    std::vector<std::vector<IntervalEstimate>> runs;
    for (CoefficientLaw law : laws) {
        single.law = law;
        runs.push_back(run_interval_experiment(single, jobs));
    }
    return compare_laws(runs, config.n_max);
}

double truncation_audit(const ExperimentConfig& config, std::size_t trials, unsigned jobs) {
    config.validate();
    if (trials < 1)
        throw DomainError("truncation audit needs at least one trial");
    const double r_end = config.r_max();
    const Tiling tiling = make_tiling(config, r_end, {});
    const std::size_t K = config.truncation();
    const CoefficientSequence seq = config.sequence();

    std::vector<std::uint8_t> changed(trials, 0);
    run_guarded(trials, jobs, config.master_seed, [&](std::size_t i, std::uint64_t seed) {
        std::size_t totals[2] = {0, 0};
        for (int pass = 0; pass < 2; ++pass) {
            const SeriesSample sample = draw_sample(seq, config.law, seed, pass == 0 ? K : 2 * K);
            const auto eval = [&sample](double x) { return evaluate(sample, x); };
            for (const auto& grid : tiling.grids)
                totals[pass] += count_zeros_fast(eval, grid).count;
        }
        changed[i] = totals[0] != totals[1] ? 1 : 0;
    });
    std::size_t n = 0;
    for (auto c : changed)
        n += c;
    return static_cast<double>(n) / static_cast<double>(trials);
}

}  // namespace rtz
