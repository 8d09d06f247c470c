#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rtz {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A truncated series cannot meet its requested tail bound.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation produced a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double x)
        : std::runtime_error(what), x_(x) {}

    double x() const noexcept { return x_; }

private:
    double x_;
};

/// Covariance matrix could not be factorized even after jitter escalation.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside one Monte Carlo trial; carries what is needed to replay it.
class TrialError : public std::runtime_error {
public:
    TrialError(const std::string& what, std::size_t trial, std::uint64_t seed)
        : std::runtime_error(what), trial_(trial), seed_(seed) {}

    std::size_t trial() const noexcept { return trial_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::size_t trial_;
    std::uint64_t seed_;
};

/// Invalid configuration. `line` is 0 when the value did not come from a file.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string field, int line = 0)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

}  // namespace rtz
