#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rtz/coeffs.hpp"
#include "rtz/rng.hpp"

namespace rtz {

/// Law of the i.i.d. multipliers xi_k. Every variant has mean 0 and variance 1.
enum class CoefficientLaw { Rademacher, StandardGaussian, UniformCentered };

std::string_view to_string(CoefficientLaw law);
CoefficientLaw parse_law(std::string_view name);

/// Variance-based truncation target: the tail of f beyond degree K has standard
/// deviation at most `delta * sqrt(v(r_max))` at the right end of the scan.
struct TruncationPolicy {
    double r_max = 0.5;
    double delta = 1e-6;
};

/// Smallest K with tail_mass_bound(seq, r_max, K) <= delta^2 v(r_max).
std::size_t truncation_degree(const CoefficientSequence& seq, const TruncationPolicy& policy);

/// One realization of the truncated series f(x) = sum_{k<=K} xi_k c_k x^k.
class SeriesSample {
public:
    SeriesSample(CoefficientSequence seq, CoefficientLaw law, std::uint64_t seed,
                 std::vector<double> xi);

    const CoefficientSequence& sequence() const noexcept { return seq_; }
    CoefficientLaw law() const noexcept { return law_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t degree() const noexcept { return xi_.size() - 1; }
    std::span<const double> xi() const noexcept { return xi_; }
    /// xi_k c_k, the polynomial coefficients in ascending order.
    std::span<const double> weighted() const noexcept { return weighted_; }

    /// Restricts evaluation to x <= r_max (the radius the degree was chosen for).
    void attach_policy(const TruncationPolicy& policy) { r_max_ = policy.r_max; }
    std::optional<double> r_max() const noexcept { return r_max_; }

private:
    CoefficientSequence seq_;
    CoefficientLaw law_;
    std::uint64_t seed_;
    std::vector<double> xi_;
    std::vector<double> weighted_;
    std::optional<double> r_max_;
};

SeriesSample draw_sample(const CoefficientSequence& seq, CoefficientLaw law, Rng& rng,
                         std::size_t K, std::uint64_t seed_tag = 0);

/// Deterministic in (law, seed, K).
SeriesSample draw_sample(const CoefficientSequence& seq, CoefficientLaw law, std::uint64_t seed,
                         std::size_t K);

/// f(x) by compensated Horner. Throws DomainError for |x| >= 1 or x beyond an attached r_max.
double evaluate(const SeriesSample& sample, double x);

/// f(x) / sqrt(v(x)): the unit-variance process X at the real point x.
double evaluate_normalized(const SeriesSample& sample, double x);

}  // namespace rtz
