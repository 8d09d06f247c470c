#include "rtz/sampling.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "rtz/errors.hpp"
#include "rtz/horner.hpp"

namespace rtz {

std::string_view to_string(CoefficientLaw law) {
    switch (law) {
    case CoefficientLaw::Rademacher:
        return "rademacher";
    case CoefficientLaw::StandardGaussian:
        return "gaussian";
    case CoefficientLaw::UniformCentered:
        return "uniform";
    }
    return "unknown";
}

CoefficientLaw parse_law(std::string_view name) {
    if (name == "rademacher")
        return CoefficientLaw::Rademacher;
    if (name == "gaussian")
        return CoefficientLaw::StandardGaussian;
    if (name == "uniform")
        return CoefficientLaw::UniformCentered;
    throw DomainError(fmt::format("unknown coefficient law '{}' (rademacher|gaussian|uniform)", name));
}

std::size_t truncation_degree(const CoefficientSequence& seq, const TruncationPolicy& policy) {
    if (!(policy.r_max > 0.0 && policy.r_max < 1.0))
        throw DomainError(fmt::format("r_max must lie in (0,1), got {}", policy.r_max));
    if (!(policy.delta > 0.0))
        throw DomainError(fmt::format("delta must be positive, got {}", policy.delta));

    const double budget = policy.delta * policy.delta * variance_v(seq, policy.r_max);
    auto meets = [&](std::size_t K) { return tail_mass_bound(seq, policy.r_max, K) <= budget; };

    std::size_t hi = 1;
    while (!meets(hi)) {
        if (hi > (std::size_t{1} << 40))
            throw TruncationError("truncation degree search overflowed");
        hi *= 2;
    }
    if (hi == 1)
        return 1;
    // meets(hi) holds and meets(hi / 2) does not.
    std::size_t lo = hi / 2;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (meets(mid) ? hi : lo) = mid;
    }
    return hi;
}

SeriesSample::SeriesSample(CoefficientSequence seq, CoefficientLaw law, std::uint64_t seed,
                           std::vector<double> xi)
    : seq_(std::move(seq)), law_(law), seed_(seed), xi_(std::move(xi)) {
    if (xi_.empty())
        throw DomainError("a series sample needs at least one coefficient");
    weighted_.resize(xi_.size());
    for (std::size_t k = 0; k < xi_.size(); ++k)
        weighted_[k] = xi_[k] * seq_.coeff(k);
}

SeriesSample draw_sample(const CoefficientSequence& seq, CoefficientLaw law, Rng& rng,
                         std::size_t K, std::uint64_t seed_tag) {
    if (K < 1)
        throw DomainError("truncation degree must be at least 1");
    std::vector<double> xi(K + 1);
    switch (law) {
    case CoefficientLaw::Rademacher:
        for (auto& v : xi)
            v = rng.sign();
        break;
    case CoefficientLaw::StandardGaussian:
        for (auto& v : xi)
            v = rng.standard_normal();
        break;
    case CoefficientLaw::UniformCentered: {
        constexpr double half_width = std::numbers::sqrt3;
        for (auto& v : xi)
            v = rng.uniform(-half_width, half_width);
        break;
    }
    }
    return SeriesSample(seq, law, seed_tag, std::move(xi));
}

SeriesSample draw_sample(const CoefficientSequence& seq, CoefficientLaw law, std::uint64_t seed,
                         std::size_t K) {
    Rng rng(seed);
    return draw_sample(seq, law, rng, K, seed);
}

double evaluate(const SeriesSample& sample, double x) {
    if (!(std::abs(x) < 1.0))
        throw DomainError(fmt::format("evaluation point must satisfy |x| < 1, got {}", x));
    if (sample.r_max() && x > *sample.r_max())
        throw DomainError(
            fmt::format("x = {} lies beyond r_max = {} of the truncation policy", x, *sample.r_max()));
    return compensated_horner(sample.weighted(), x);
}

double evaluate_normalized(const SeriesSample& sample, double x) {
    const double fx = evaluate(sample, x);
    const double v = variance_v(sample.sequence(), std::abs(x));
    if (!(v > 0.0))
        throw DomainError(fmt::format("v({}) vanishes; X is undefined there", x));
    return fx / std::sqrt(v);
}

}  // namespace rtz
