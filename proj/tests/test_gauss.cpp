#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rtz/errors.hpp"
#include "rtz/gauss.hpp"
#include "rtz/rng.hpp"
#include "rtz/stats.hpp"

using namespace rtz;

TEST_SUITE("gauss") {

TEST_CASE("covariances") {
    for (double g : {0.5, 1.0, 3.0})
        for (double t : {1e-6, 0.3, 7.0, 1e6})
            CHECK(cov_z(t, t, g) == 1.0);
    CHECK(cov_z(1.0, 3.0, 1.0) == doctest::Approx(0.86602540378443864676).epsilon(1e-15));
    CHECK(cov_y(0.0, 2.0) == 1.0);
    CHECK(cov_y(2.0 * std::log(3.0), 1.0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(cov_y(1e4, 1.0) >= 0.0);
    CHECK(cov_y(1e4, 1.0) < 1e-300);
    CHECK_THROWS_AS(cov_z(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(cov_z(1.0, -1.0, 1.0), DomainError);

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const double u = rng.uniform(-5.0, 5.0), v = rng.uniform(-5.0, 5.0), g = rng.uniform(0.2, 4.0);
        CHECK(cov_z(std::exp(u), std::exp(v), g) == cov_z(std::exp(v), std::exp(u), g));
        CHECK(std::abs(cov_y(u - v, g) - cov_z(std::exp(u), std::exp(v), g)) <= 1e-12);
        CHECK(std::abs(cov_y(u - v, g)) <= 1.0);
    }
}

TEST_CASE("second derivative at zero") {
    CHECK(rho_second_derivative(1.0) == -0.25);
    CHECK(rho_second_derivative(4.0) == -1.0);
    for (double g : {0.5, 1.0, 2.0, 4.0})
        CHECK(std::abs(rho_second_difference(g, 1e-3) - rho_second_derivative(g)) <= 1e-6);
}

TEST_CASE("rice expectation") {
    CHECK(expected_zeros_rice(1.0, std::exp(1.0), 1.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(expected_zeros_rice(1.0, std::exp(2.0 * std::numbers::pi), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expected_zeros_rice(1.0, std::exp(4.0 * std::numbers::pi), 0.25) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expected_zeros_rice(2.0, 2.0 * (1.0 + 1e-12), 1.0) < 1e-12);
    CHECK_THROWS_AS(expected_zeros_rice(2.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(expected_zeros_rice(0.0, 2.0, 1.0), DomainError);
}

TEST_CASE("path sampler marginal and correlation") {
    const std::size_t N = 100000;
    {
        PathSampler one({0.0}, 1.0);
        Rng rng(1);
        RunningStats s, sq;
        double v = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            one.draw(rng, std::span<double>(&v, 1));
            s.add(v);
            sq.add(v * v);
        }
        CHECK(std::abs(s.variance() - 1.0) < 4.0 * sq.stderr_of_mean());
    }
    {
        PathSampler two({0.0, 2.0 * std::log(3.0)}, 1.0);
        Rng rng(2);
        RunningStats prod;
        double v[2];
        for (std::size_t i = 0; i < N; ++i) {
            two.draw(rng, std::span<double>(v, 2));
            prod.add(v[0] * v[1]);
        }
        CHECK(std::abs(prod.mean() - 0.6) < 4.0 * prod.stderr_of_mean());
    }
}

TEST_CASE("empirical covariance matrix") {
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i)
        grid.push_back(0.4 * i);
    const PathSampler sampler(grid, 2.0);
    Rng rng(3);
    const std::size_t M = 20000;
    std::vector<RunningStats> cells(grid.size() * grid.size());
    std::vector<double> v(grid.size());
    for (std::size_t m = 0; m < M; ++m) {
        sampler.draw(rng, v);
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = 0; j < grid.size(); ++j)
                cells[i * grid.size() + j].add(v[i] * v[j]);
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const auto& c = cells[i * grid.size() + j];
            CHECK(std::abs(c.mean() - cov_y(grid[i] - grid[j], 2.0)) < 5.0 * c.stderr_of_mean());
        }
}

TEST_CASE("sampler determinism and preconditions") {
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.5};
    const auto a = sample_path(grid, 1.0, 77);
    const auto b = sample_path(grid, 1.0, 77);
    CHECK(a.values == b.values);
    CHECK(a.seed == 77);
    CHECK(sample_path(grid, 1.0, 78).values != a.values);
    CHECK_THROWS_AS(PathSampler({0.0, 0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(PathSampler({1.0, 0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(PathSampler(std::vector<double>(10001, 0.0), 1.0), DomainError);
}

TEST_CASE("fine grids need jitter but still factor") {
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i)
        grid.push_back(0.005 * i);
    const PathSampler sampler(grid, 1.0);
    CHECK(sampler.jitter() > 0.0);
    CHECK(sampler.jitter() <= 1e-8);
}

}
