#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rtz/rng.hpp"

namespace rtz {

/// Covariance of the limit process Z on (0, inf): 2^g (ts)^(g/2) / (t+s)^g.
double cov_z(double t, double s, double gamma);

/// Stationary covariance of Y(u) = Z(e^u): cosh(tau/2)^(-gamma).
double cov_y(double tau, double gamma);

/// Closed form of rho''(0) for rho = cov_y: -gamma/4.
double rho_second_derivative(double gamma);

/// Central second difference (rho(h) - 2 rho(0) + rho(-h)) / h^2.
double rho_second_difference(double gamma, double h = 1e-3);

/// Rice formula: expected number of zeros of Z on [a,b], (sqrt(gamma)/2pi) log(b/a).
double expected_zeros_rice(double a, double b, double gamma);

/// A sampled trajectory of Y on a grid of u-coordinates.
struct GaussianPath {
    std::vector<double> grid;
    std::vector<double> values;
    double gamma = 1.0;
    std::uint64_t seed = 0;
};

/// Exact finite-dimensional sampler for Y on a fixed grid.
///
/// The covariance matrix [cov_y(u_i - u_j)] is Cholesky-factorized once. Analytic
/// covariances are numerically near-singular on fine grids, so a relative diagonal
/// jitter of 1e-12 is added when the plain factorization fails, escalating by x100
/// at most twice. The factor is immutable and shared across draws.
class PathSampler {
public:
    static constexpr std::size_t kMaxGridSize = 10000;

    PathSampler(std::vector<double> grid, double gamma);

    const std::vector<double>& grid() const noexcept { return grid_; }
    double gamma() const noexcept { return gamma_; }
    /// Relative jitter that made the factorization succeed (0 when none was needed).
    double jitter() const noexcept { return jitter_; }

    /// Writes one path into `out` (size == grid().size()).
    void draw(Rng& rng, std::span<double> out) const;

    GaussianPath draw(std::uint64_t seed) const;

private:
    std::vector<double> grid_;
    double gamma_;
    double jitter_ = 0.0;
    std::vector<double> factor_;  // packed lower triangle, row-major
};

GaussianPath sample_path(std::span<const double> grid, double gamma, std::uint64_t seed);

}  // namespace rtz
