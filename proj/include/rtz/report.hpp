#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rtz/diagnostics.hpp"
#include "rtz/experiments.hpp"

namespace rtz {

inline constexpr std::string_view kToolVersion = "0.1.0";
/// Bumped whenever a CSV column or JSON field changes meaning.
inline constexpr int kReportSchemaVersion = 1;

inline constexpr std::string_view kIntervalCsvHeader =
    "n,q,gamma,law,M,mean,sd,stderr,ci_lo,ci_hi,unstable_frac,target";

/// One row per (n, law). Undefined statistics (single trial) are written as NA.
std::string intervals_csv(std::span<const IntervalEstimate> rows);

/// Plot data for the cumulative count: r, -log(1-r), mean, stderr.
std::string cumulative_csv(const SlopeReport& slope);

std::string diagnostics_csv(const DiagnosticReport& report);

struct AbelRow {
    double a = 0.0;
    double v = 0.0;
    double asymptote = 0.0;
    double ratio = 0.0;
};

std::vector<AbelRow> abel_ratios(const CoefficientSequence& seq, std::span<const double> a_list);
/// |ratio - 1| strictly decreasing along the list (trivially true for one entry).
bool abel_monotone(std::span<const AbelRow> rows);
std::string abel_csv(std::span<const AbelRow> rows);

nlohmann::json config_json(const ExperimentConfig& config);
nlohmann::json interval_json(const IntervalEstimate& est);
nlohmann::json simulation_json(const ExperimentConfig& config, const SimulationResult& result);
nlohmann::json gauss_oracle_json(const GaussOracleSummary& summary);
nlohmann::json diagnostics_json(const DiagnosticReport& report);

}  // namespace rtz
