#include "rtz/coeffs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "rtz/errors.hpp"
#include "rtz/summation.hpp"

namespace rtz {

namespace {

// Hard stop for explicit tail summation before the geometric bound kicks in.
constexpr std::size_t kMaxExplicitTerms = std::size_t{1} << 32;

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw DomainError(fmt::format("cannot parse {} parameter '{}'", what, text));
    return value;
}

}  // namespace

SlowVariation SlowVariation::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw DomainError(fmt::format("constant slow variation needs c > 0, got {}", c));
    return {Kind::Constant, c};
}

SlowVariation SlowVariation::log_power(double beta) {
    if (!std::isfinite(beta))
        throw DomainError("log-power exponent must be finite");
    return {Kind::LogPower, beta};
}

SlowVariation SlowVariation::log_log() { return {Kind::LogLog, 0.0}; }

SlowVariation SlowVariation::parse(std::string_view text) {
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    const bool has_param = colon != std::string_view::npos;
    const auto param = has_param ? text.substr(colon + 1) : std::string_view{};

    if (name == "constant")
        return constant(has_param ? parse_double(param, "constant") : 1.0);
    if (name == "logpower") {
        if (!has_param)
            throw DomainError("logpower needs an exponent, e.g. logpower:1");
        return log_power(parse_double(param, "logpower"));
    }
    if (name == "loglog" && !has_param)
        return log_log();
    throw DomainError(fmt::format("unknown slow variation '{}'", text));
}

double SlowVariation::operator()(double t) const {
    switch (kind_) {
    case Kind::Constant:
        return param_;
    case Kind::LogPower:
        return std::pow(1.0 + std::log(t), param_);
    case Kind::LogLog:
        return std::log(std::numbers::e + std::log(t));
    }
    return param_;
}

double SlowVariation::ratio_exponent() const {
    switch (kind_) {
    case Kind::Constant:
        return 0.0;
    case Kind::LogPower:
        // (1+log(j+1))/(1+log j) <= 1 + 1/(j(1+log j)) <= 1 + 1/j
        return std::max(param_, 0.0);
    case Kind::LogLog:
        return 1.0;
    }
    return 0.0;
}

std::string SlowVariation::to_string() const {
    switch (kind_) {
    case Kind::Constant:
        return fmt::format("constant:{}", param_);
    case Kind::LogPower:
        return fmt::format("logpower:{}", param_);
    case Kind::LogLog:
        return "loglog";
    }
    return {};
}

CoefficientSequence::CoefficientSequence(double gamma, SlowVariation slow, bool c0_zero, double c0)
    : gamma_(gamma), slow_(slow), c0_zero_(c0_zero), c0_(c0_zero ? 0.0 : c0) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError(fmt::format("gamma must be positive, got {}", gamma));
    log_inv_gamma_fn_ = -std::lgamma(gamma);
    ratio_exponent_ = std::max(gamma - 1.0, 0.0) + slow_.ratio_exponent();
}

double CoefficientSequence::log_coeff_sq(std::size_t k) const {
    const double kd = static_cast<double>(k);
    return (gamma_ - 1.0) * std::log(kd) + std::log(slow_(kd)) + log_inv_gamma_fn_;
}

double CoefficientSequence::coeff_sq(std::size_t k) const {
    if (k == 0)
        return c0_ * c0_;
    return std::exp(log_coeff_sq(k));
}

double CoefficientSequence::coeff(std::size_t k) const {
    if (k == 0)
        return std::abs(c0_);
    return std::sqrt(coeff_sq(k));
}

double coeff(const CoefficientSequence& seq, std::size_t k) { return seq.coeff(k); }

namespace {

void check_unit_interval(double x) {
    if (!(x >= 0.0 && x < 1.0))
        throw DomainError(fmt::format("x must lie in [0,1), got {}", x));
}

// Summand c_k^2 x^(2k) for k >= 1, with log_x2 = 2 log x.
double term(const CoefficientSequence& seq, std::size_t k, double log_x2) {
    return std::exp(seq.log_coeff_sq(k) + static_cast<double>(k) * log_x2);
}

double ratio_bound(const CoefficientSequence& seq, double x2, std::size_t k) {
    const double p = seq.ratio_exponent();
    if (p == 0.0)
        return x2;
    return x2 * std::exp(p * std::log1p(1.0 / static_cast<double>(k)));
}

}  // namespace

double tail_mass_bound(const CoefficientSequence& seq, double x, std::size_t K) {
    check_unit_interval(x);
    if (x == 0.0)
        return 0.0;
    const double x2 = x * x;
    const double log_x2 = 2.0 * std::log(x);

    CompensatedSum explicit_part;
    for (std::size_t k = K + 1; k < K + 1 + kMaxExplicitTerms; ++k) {
        const double t = term(seq, k, log_x2);
        const double rho = ratio_bound(seq, x2, k);
        if (rho < 1.0)
            return explicit_part.value() + t / (1.0 - rho);
        explicit_part += t;
    }
    throw TruncationError(fmt::format("tail bound at x = {} did not become geometric", x));
}

VarianceSum variance_sum(const CoefficientSequence& seq, double x, double rel_tol) {
    check_unit_interval(x);
    if (!(rel_tol > 0.0))
        throw DomainError(fmt::format("rel_tol must be positive, got {}", rel_tol));

    CompensatedSum sum;
    sum += seq.coeff_sq(0);
    if (x == 0.0)
        return {sum.value(), 1, 0.0};

    const double x2 = x * x;
    const double log_x2 = 2.0 * std::log(x);
    for (std::size_t k = 1; k < kMaxExplicitTerms; ++k) {
        const double t = term(seq, k, log_x2);
        sum += t;
        const double rho = ratio_bound(seq, x2, k);
        if (rho < 1.0) {
            const double bound = t * rho / (1.0 - rho);
            if (bound <= rel_tol * sum.value())
                return {sum.value(), k + 1, bound};
        }
    }
    throw TruncationError(fmt::format("variance sum at x = {} did not converge", x));
}

double variance_v(const CoefficientSequence& seq, double x, double rel_tol) {
    return variance_sum(seq, x, rel_tol).value;
}

double abel_asymptote(const CoefficientSequence& seq, double a) {
    if (!(a > 0.0 && a < 1.0))
        throw DomainError(fmt::format("a must lie in (0,1), got {}", a));
    return std::pow(2.0 * a, -seq.gamma()) * seq.slow()(1.0 / a);
}

double max_share(const CoefficientSequence& seq, std::size_t n) {
    if (n == 0)
        throw DomainError("max_share needs n >= 1");
    CompensatedSum total;
    double largest = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double c2 = seq.coeff_sq(k);
        total += c2;
        largest = std::max(largest, c2);
    }
    return largest / total.value();
}

}  // namespace rtz
