#include "rtz/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rtz/sampling.hpp"

namespace rtz {

namespace {

std::string num(double v) { return std::isfinite(v) ? fmt::format("{}", v) : std::string("NA"); }

nlohmann::json jnum(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

template <class T>
nlohmann::json jopt(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string intervals_csv(std::span<const IntervalEstimate> rows) {
    std::string out(kIntervalCsvHeader);
    out += '\n';
    for (const auto& e : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", e.n, num(e.q), num(e.gamma), to_string(e.law),
                           e.trials, num(e.mean_count), num(e.sd), num(e.stderr_), num(e.ci95.first),
                           num(e.ci95.second), num(e.unstable_fraction), num(e.target));
    }
    return out;
}

std::string cumulative_csv(const SlopeReport& slope) {
    std::string out = "r,log_scale,mean,stderr\n";
    for (const auto& p : slope.points)
        out += fmt::format("{},{},{},{}\n", num(p.r), num(p.log_scale), num(p.mean_count), num(p.stderr_));
    return out;
}

std::string diagnostics_csv(const DiagnosticReport& report) {
    std::string out =
        "n,K,skipped,normalization_error,b0_sq,b0_bound,max_weight_ok,max_tail_excess,tail_order_ok,"
        "shift,shifted_tail_ok,c_hat,lower_constant,notice\n";
    for (const auto& r : report.rows) {
        if (r.skipped) {
            out += fmt::format("{},,1,,,,,,,,,,,\"{}\"\n", r.n, r.notice);
            continue;
        }
        out += fmt::format("{},{},0,{},{},{},{},{},{},{},{},{},{},\n", r.n, r.K, num(r.normalization_error),
                           num(r.b0_sq), num(r.b0_bound), int(r.max_weight_ok), num(r.max_tail_excess),
                           int(r.tail_order_ok), r.shift, int(r.shifted_tail_ok), num(r.c_hat),
                           num(r.lower_constant));
    }
    return out;
}

std::vector<AbelRow> abel_ratios(const CoefficientSequence& seq, std::span<const double> a_list) {
    std::vector<AbelRow> rows;
    for (double a : a_list) {
        AbelRow row;
        row.a = a;
        row.asymptote = abel_asymptote(seq, a);
        row.v = variance_v(seq, 1.0 - a);
        row.ratio = row.v / row.asymptote;
        rows.push_back(row);
    }
    return rows;
}

bool abel_monotone(std::span<const AbelRow> rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(std::abs(rows[i].ratio - 1.0) < std::abs(rows[i - 1].ratio - 1.0)))
            return false;
    return true;
}

std::string abel_csv(std::span<const AbelRow> rows) {
    std::string out = "a,v,asymptote,ratio\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{}\n", num(r.a), num(r.v), num(r.asymptote), num(r.ratio));
    return out;
}

nlohmann::json config_json(const ExperimentConfig& c) {
    return {
        {"gamma", c.gamma},
        {"slow", c.slow.to_string()},
        {"law", std::string(to_string(c.law))},
        {"q", c.q},
        {"n_min", c.n_min},
        {"n_max", c.n_max},
        {"trials", c.trials},
        {"delta", c.delta},
        {"eta", c.eta},
        {"master_seed", c.master_seed},
        {"cumulative_n_min", c.cumulative_n_min},
        {"cumulative_n_max", c.cumulative_n_max},
    };
}

nlohmann::json interval_json(const IntervalEstimate& e) {
    return {
        {"n", e.n},
        {"q", e.q},
        {"gamma", e.gamma},
        {"law", std::string(to_string(e.law))},
        {"M", e.trials},
        {"mean", jnum(e.mean_count)},
        {"sd", jnum(e.sd)},
        {"stderr", jnum(e.stderr_)},
        {"ci95", {jnum(e.ci95.first), jnum(e.ci95.second)}},
        {"sd_defined", e.sd_defined},
        {"unstable_frac", jnum(e.unstable_fraction)},
        {"target", e.target},
    };
}

nlohmann::json simulation_json(const ExperimentConfig& config, const SimulationResult& result) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& e : result.intervals)
        intervals.push_back(interval_json(e));

    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : result.slope.points)
        points.push_back({{"r", p.r}, {"log_scale", p.log_scale}, {"mean", jnum(p.mean_count)},
                          {"stderr", jnum(p.stderr_)}});

    return {
        {"schema_version", kReportSchemaVersion},
        {"tool_version", std::string(kToolVersion)},
        {"kind", "simulate"},
        {"config", config_json(config)},
        {"truncation_degree", result.truncation_degree},
        {"intervals", intervals},
        {"discrepancy_trend", result.intervals.size() >= 2
                                  ? nlohmann::json(discrepancy_trend(result.intervals))
                                  : nlohmann::json(nullptr)},
        {"cumulative",
         {{"points", points},
          {"fitted_slope", jopt(result.slope.fitted_slope)},
          {"target", result.slope.target},
          {"relative_gap", jopt(result.slope.relative_gap)}}},
    };
}

nlohmann::json gauss_oracle_json(const GaussOracleSummary& s) {
    return {
        {"schema_version", kReportSchemaVersion},
        {"tool_version", std::string(kToolVersion)},
        {"kind", "gauss-oracle"},
        {"gamma", s.gamma},
        {"a", s.a},
        {"b", s.b},
        {"M", s.paths},
        {"eta", s.eta},
        {"seed", s.seed},
        {"grid_points", s.grid_points},
        {"jitter", s.jitter},
        {"mean", jnum(s.mean_count)},
        {"sd", jnum(s.sd)},
        {"stderr", jnum(s.stderr_)},
        {"unstable_frac", s.unstable_fraction},
        {"target", s.target},
        {"tolerance", s.tolerance},
        {"within_tolerance", s.within_tolerance},
    };
}

nlohmann::json diagnostics_json(const DiagnosticReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        if (r.skipped) {
            rows.push_back({{"n", r.n}, {"skipped", true}, {"notice", r.notice}});
            continue;
        }
        rows.push_back({
            {"n", r.n},
            {"K", r.K},
            {"skipped", false},
            {"normalization_error", r.normalization_error},
            {"b0_sq", r.b0_sq},
            {"b0_bound", r.b0_bound},
            {"max_weight_ok", r.max_weight_ok},
            {"max_tail_excess", r.max_tail_excess},
            {"tail_order_ok", r.tail_order_ok},
            {"shift", r.shift},
            {"shifted_tail_ok", r.shifted_tail_ok},
            {"c_hat", jnum(r.c_hat)},
            {"lower_constant", jnum(r.lower_constant)},
        });
    }
    auto bound = [](const EventualBound& b) {
        return nlohmann::json{{"n0", jopt(b.n0)}, {"violations_beyond", b.violations_beyond}};
    };
    return {
        {"schema_version", kReportSchemaVersion},
        {"tool_version", std::string(kToolVersion)},
        {"kind", "diagnostics"},
        {"gamma", report.gamma},
        {"q", report.q},
        {"slow", report.slow},
        {"rows", rows},
        {"max_weight_bound", bound(report.max_weight)},
        {"shifted_tail_bound", bound(report.shifted_tail)},
        {"c_hat_log_slope", jopt(report.c_hat_log_slope)},
        {"c_hat_bounded", report.c_hat_bounded},
        {"exact_ok", report.exact_ok},
        {"lemma_ok", report.lemma_ok},
    };
}

}  // namespace rtz
