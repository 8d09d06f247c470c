#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtz/coeffs.hpp"

namespace rtz {

/// Normalized weights a_{n,k}^2 = c_k^2 x^(2k) / v(x) at x = 1 - q^n, for k <= K.
/// They form a probability distribution on N_0 once the certified tail is added.
struct WeightArray {
    int n = 0;
    double q = 0.5;
    double x = 0.0;
    std::size_t K = 0;
    std::vector<double> a_sq;
    double tail_mass = 0.0;  ///< certified bound on sum_{k>K} a_{n,k}^2
};

/// Throws TruncationError when K leaves a tail heavier than 1e-10.
WeightArray weights(const CoefficientSequence& seq, int n, double q, std::size_t K);

/// Nonincreasing rearrangement b_{n,k}^2 of the stored weights.
std::vector<double> rearrange(const WeightArray& w);

/// Right tails F~_{n,k} = sum_{j>=k} a^2 and F_{n,k} = sum_{j>=k} b^2 for k <= K.
/// Both include the certified tail mass beyond K.
struct TailPair {
    std::vector<double> F_tilde;
    std::vector<double> F;
};

TailPair tails(const WeightArray& w, std::span<const double> rearranged);

/// Default degree for the lemma checks: ceil(40 n q^(-n)).
std::size_t diagnostic_degree(int n, double q);

struct DiagnosticRow {
    int n = 0;
    std::size_t K = 0;
    bool skipped = false;
    std::string notice;

    double normalization_error = 0.0;  ///< |sum a^2 + tail - 1|

    double b0_sq = 0.0;     ///< largest weight
    double b0_bound = 0.0;  ///< q^(n/2 min(1, gamma))
    bool max_weight_ok = false;

    double max_tail_excess = 0.0;  ///< max_k (F - F~), never above summation noise
    bool tail_order_ok = false;

    std::size_t shift = 0;  ///< floor(n^eps q^-n) with eps = 1/2
    bool shifted_tail_ok = false;  ///< F_k >= F~_{k+shift} for all k <= K/2

    double c_hat = 0.0;  ///< max_{k >= n q^-n} F~_{n,k} e^{k q^n}

    /// F~ at k = floor(n q^-n) divided by q^(2n eps) n^(gamma-1-eps) e^(-2n), eps = 1/4.
    double lower_constant = 0.0;
};

/// "Holds from n0 on" summary for an eventually-true bound.
struct EventualBound {
    std::optional<int> n0;              ///< first tested n where the bound holds
    std::size_t violations_beyond = 0;  ///< failures at tested n > n0
};

struct DiagnosticReport {
    double gamma = 1.0;
    double q = 0.5;
    std::string slow;
    std::vector<DiagnosticRow> rows;

    EventualBound max_weight;
    EventualBound shifted_tail;

    /// Least-squares slope of log c_hat against n over the evaluated rows.
    std::optional<double> c_hat_log_slope;
    bool c_hat_bounded = false;

    /// Normalization and F <= F~ on every evaluated row.
    bool exact_ok = false;
    /// No eventual bound fails past its n0.
    bool lemma_ok = false;
};

inline constexpr double kNormalizationTolerance = 1e-10;
inline constexpr double kTailOrderTolerance = 1e-12;
inline constexpr std::size_t kDefaultMaxTerms = std::size_t{1} << 24;

/// Runs the weight-array checks for each n in [n_min, n_max]. Rows whose degree
/// would exceed `max_terms` are skipped with a notice.
DiagnosticReport check_inequalities(const CoefficientSequence& seq, double q, int n_min, int n_max,
                                    std::size_t max_terms = kDefaultMaxTerms);

}  // namespace rtz
