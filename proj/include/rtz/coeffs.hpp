#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace rtz {

/// Slowly varying factor L of the coefficient model c_k^2 = k^(gamma-1) L(k) / Gamma(gamma).
///
/// Three shipped families:
///   Constant(c):   L(t) = c
///   LogPower(b):   L(t) = (1 + log t)^b
///   LogLog:        L(t) = log(e + log t)
class SlowVariation {
public:
    enum class Kind { Constant, LogPower, LogLog };

    static SlowVariation constant(double c = 1.0);
    static SlowVariation log_power(double beta);
    static SlowVariation log_log();

    /// Parses "constant", "constant:2.5", "logpower:0.5", "loglog".
    static SlowVariation parse(std::string_view text);

    SlowVariation() = default;

    /// L(t) for t >= 1.
    double operator()(double t) const;

    /// Exponent p with L(j+1)/L(j) <= (1 + 1/j)^p for every j >= 1.
    double ratio_exponent() const;

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return param_; }
    std::string to_string() const;

    friend bool operator==(const SlowVariation&, const SlowVariation&) = default;

private:
    SlowVariation(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_ = Kind::Constant;
    double param_ = 1.0;
};

/// Deterministic weights c_k with regular-variation index gamma.
///
/// c_k^2 = k^(gamma-1) L(k) / Gamma(gamma) for k >= 1. The k = 0 weight is zero by
/// default; with `c0_zero == false` it takes the user value `c0`.
class CoefficientSequence {
public:
    explicit CoefficientSequence(double gamma, SlowVariation slow = SlowVariation::constant(),
                                 bool c0_zero = true, double c0 = 1.0);

    double gamma() const noexcept { return gamma_; }
    const SlowVariation& slow() const noexcept { return slow_; }
    bool c0_zero() const noexcept { return c0_zero_; }

    double coeff_sq(std::size_t k) const;
    double coeff(std::size_t k) const;

    /// log(c_k^2) for k >= 1 (avoids forming k^(gamma-1) explicitly).
    double log_coeff_sq(std::size_t k) const;

    /// Exponent p with c_{j+1}^2 / c_j^2 <= (1 + 1/j)^p for all j >= 1.
    double ratio_exponent() const noexcept { return ratio_exponent_; }

private:
    double gamma_;
    SlowVariation slow_;
    bool c0_zero_;
    double c0_;
    double log_inv_gamma_fn_;
    double ratio_exponent_;
};

double coeff(const CoefficientSequence& seq, std::size_t k);

/// Outcome of summing v(x) = sum_k c_k^2 x^(2k).
struct VarianceSum {
    double value = 0.0;
    std::size_t terms = 0;    ///< number of terms summed explicitly (k = 0..terms-1)
    double tail_bound = 0.0;  ///< certified bound on the omitted tail
};

/// Certified bound on sum_{k > K} c_k^2 x^(2k).
///
/// Terms are summed explicitly until the ratio bound rho_k = x^2 (1 + 1/k)^p drops
/// below one; from there the remainder is dominated by a geometric series.
double tail_mass_bound(const CoefficientSequence& seq, double x, std::size_t K);

VarianceSum variance_sum(const CoefficientSequence& seq, double x, double rel_tol);

/// v(x) with relative truncation error at most `rel_tol`. Throws DomainError for x outside [0,1).
double variance_v(const CoefficientSequence& seq, double x, double rel_tol = 1e-14);

/// (2a)^(-gamma) L(1/a): the Abelian asymptote of v(1 - a) as a -> 0.
double abel_asymptote(const CoefficientSequence& seq, double a);

/// max_{k<=n} c_k^2 / sum_{k<=n} c_k^2.
double max_share(const CoefficientSequence& seq, std::size_t n);

}  // namespace rtz
