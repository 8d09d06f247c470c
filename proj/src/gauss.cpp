#include "rtz/gauss.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <fmt/format.h>

#include "rtz/errors.hpp"

namespace rtz {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError(fmt::format("gamma must be positive, got {}", gamma));
}

// log cosh(x), stable for large |x|.
double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

}  // namespace

double cov_z(double t, double s, double gamma) {
    check_gamma(gamma);
    if (!(t > 0.0) || !(s > 0.0))
        throw DomainError(fmt::format("cov_z needs positive arguments, got ({}, {})", t, s));
    if (t == s)
        return 1.0;
    // 2 sqrt(ts) / (t + s) = 1 / cosh(log(t/s) / 2)
    const double log_ratio = std::numbers::ln2 + 0.5 * (std::log(t) + std::log(s)) - std::log(t + s);
    return std::exp(gamma * log_ratio);
}

double cov_y(double tau, double gamma) {
    check_gamma(gamma);
    return std::exp(-gamma * log_cosh(0.5 * tau));
}

double rho_second_derivative(double gamma) {
    check_gamma(gamma);
    return -gamma / 4.0;
}

double rho_second_difference(double gamma, double h) {
    if (!(h > 0.0))
        throw DomainError("finite-difference step must be positive");
    return (cov_y(h, gamma) - 2.0 * cov_y(0.0, gamma) + cov_y(-h, gamma)) / (h * h);
}

double expected_zeros_rice(double a, double b, double gamma) {
    check_gamma(gamma);
    if (!(a > 0.0) || !(a < b))
        throw DomainError(fmt::format("expected_zeros_rice needs 0 < a < b, got [{}, {}]", a, b));
    return std::sqrt(gamma) / (2.0 * std::numbers::pi) * std::log(b / a);
}

PathSampler::PathSampler(std::vector<double> grid, double gamma)
    : grid_(std::move(grid)), gamma_(gamma) {
    check_gamma(gamma);
    const std::size_t n = grid_.size();
    if (n == 0)
        throw DomainError("path grid is empty");
    if (n > kMaxGridSize)
        throw DomainError(fmt::format("path grid has {} points; dense sampling allows {}", n, kMaxGridSize));
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw DomainError("path grid must be strictly increasing");

    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        cov(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j)
            cov(i, j) = cov(j, i) = cov_y(grid_[i] - grid_[j], gamma_);
    }

    constexpr std::array<double, 4> kJitters{0.0, 1e-12, 1e-10, 1e-8};
    for (double jitter : kJitters) {
        Eigen::MatrixXd attempt = cov;
        attempt.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(attempt);
        if (llt.info() != Eigen::Success)
            continue;
        const Eigen::MatrixXd lower = llt.matrixL();
        if (!lower.allFinite())
            continue;
        jitter_ = jitter;
        factor_.reserve(n * (n + 1) / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                factor_.push_back(lower(i, j));
        return;
    }
    throw ConditioningError(
        fmt::format("covariance on {} grid points is not factorizable even with jitter 1e-8", n));
}

void PathSampler::draw(Rng& rng, std::span<double> out) const {
    const std::size_t n = grid_.size();
    if (out.size() != n)
        throw DomainError("output span does not match the grid");
    std::vector<double> z(n);
    for (auto& v : z)
        v = rng.standard_normal();
    const double* row = factor_.data();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j)
            acc += row[j] * z[j];
        out[i] = acc;
        row += i + 1;
    }
}

GaussianPath PathSampler::draw(std::uint64_t seed) const {
    GaussianPath path{grid_, std::vector<double>(grid_.size()), gamma_, seed};
    Rng rng(seed);
    draw(rng, path.values);
    return path;
}

GaussianPath sample_path(std::span<const double> grid, double gamma, std::uint64_t seed) {
    return PathSampler(std::vector<double>(grid.begin(), grid.end()), gamma).draw(seed);
}

}  // namespace rtz
