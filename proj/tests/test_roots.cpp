#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "corpus.hpp"
#include "rtz/errors.hpp"
#include "rtz/horner.hpp"
#include "rtz/roots.hpp"

using namespace rtz;

namespace {

auto poly_eval(const std::vector<double>& c) {
    return [&c](double x) { return horner(c, x); };
}

}  // namespace

TEST_SUITE("roots") {

TEST_CASE("scan grids") {
    const auto g = ScanGrid::log_scale(0.5, 0.75, 0.02, 1.0);
    const auto pts = g.points();
    CHECK(pts.front() == 0.5);
    CHECK(pts.back() == 0.75);
    for (std::size_t i = 1; i < pts.size(); ++i)
        CHECK(pts[i] > pts[i - 1]);
    // log 2 of log-scale length at step 0.02 * 2pi
    CHECK(g.steps() == static_cast<std::size_t>(std::ceil(std::log(2.0) / (0.02 * 2.0 * std::numbers::pi))));
    const auto fine = g.refined();
    CHECK(fine.steps() == 2 * g.steps());
    const auto fp = fine.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(fp[2 * i] == pts[i]);

    CHECK_THROWS_AS(ScanGrid::log_scale(0.5, 1.0, 0.02, 1.0), DomainError);
    CHECK_THROWS_AS(ScanGrid::log_scale(0.6, 0.5, 0.02, 1.0), DomainError);
    CHECK_THROWS_AS(ScanGrid::linear(0.0, 1.0, 0.0), DomainError);
    CHECK(ScanGrid::linear(0.0, 1.0, 0.05).steps() == 20);
}

TEST_CASE("sign changes") {
    const std::vector<double> v{1.0, -1.0, -2.0, 3.0};
    CHECK(count_sign_changes(v) == 2);
    const std::vector<double> z{1.0, 0.0, -1.0};
    CHECK(count_sign_changes(z) == 1);
    const std::vector<double> touch{1.0, 0.0, 1.0};
    CHECK(count_sign_changes(touch) == 1);
    const std::vector<double> end_zero{1.0, 2.0, 0.0};
    CHECK(count_sign_changes(end_zero) == 1);
    CHECK(count_sign_changes(end_zero, true) == 0);
    const std::vector<double> start_zero{0.0, 2.0, 1.0};
    CHECK(count_sign_changes(start_zero, true) == 1);
}

TEST_CASE("constructed examples") {
    const auto two = count_zeros([](double x) { return (x - 0.3) * (x - 0.6); }, ScanGrid::linear(0.0, 1.0, 0.05));
    CHECK(two.count == 2);
    CHECK(two.stable);
    REQUIRE(two.locations.size() == 2);
    CHECK(two.locations[0].left == doctest::Approx(0.3).epsilon(1e-11));
    CHECK(two.locations[1].right == doctest::Approx(0.6).epsilon(1e-11));
    for (const auto& br : two.locations) {
        CHECK(br.right - br.left <= 1e-12 + 1e-16);
        const double fl = (br.left - 0.3) * (br.left - 0.6), fr = (br.right - 0.3) * (br.right - 0.6);
        CHECK(((fl <= 0 && fr >= 0) || (fl >= 0 && fr <= 0)));
    }

    const auto none = count_zeros([](double) { return 1.0; }, ScanGrid::linear(0.0, 1.0, 0.05));
    CHECK(none.count == 0);
    CHECK(none.stable);

    const auto nan = [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
    CHECK_THROWS_AS(count_zeros(nan, ScanGrid::linear(0.0, 1.0, 0.05)), EvaluationError);
    try {
        count_zeros(nan, ScanGrid::linear(0.0, 1.0, 0.25));
    } catch (const EvaluationError& e) {
        CHECK(e.x() > 0.5);
    }
}

TEST_CASE("unstable count when a root pair hides inside one step") {
    const auto f = [](double x) { return (x - 0.51) * (x - 0.53); };
    const auto coarse = count_zeros(f, ScanGrid::linear(0.0, 1.0, 0.05));
    CHECK(coarse.count == 0);
    CHECK_FALSE(coarse.stable);
}

TEST_CASE("planted roots") {
    Rng rng(1234);
    for (int i = 0; i < 200; ++i) {
        const auto p = testing::planted_polynomial(rng, 10, 0.02);
        const auto zc = count_zeros(poly_eval(p.coeffs), ScanGrid::linear(0.0, 1.0, 0.01));
        CAPTURE(i);
        CHECK(zc.count == p.roots.size());
        CHECK(exact_count_small(p.coeffs, 0.0, 1.0) == p.roots.size());
    }
}

TEST_CASE("exact counter") {
    const std::vector<double> double_root{0.25, -1.0, 1.0};
    CHECK(exact_count_small(double_root, 0.0, 1.0) == 1);
    const std::vector<double> constant{1.0};
    CHECK(exact_count_small(constant, 0.0, 1.0) == 0);
    // roots at 0.25 and 0.75 with closed endpoints
    const auto c = testing::expand({0.25, 0.75}, {});
    CHECK(exact_count_small(c, 0.25, 0.75) == 2);
    CHECK(exact_count_small(c, 0.3, 0.7) == 0);
    CHECK(exact_count_small(c, -1.0, 0.5) == 1);

    std::vector<double> big(66, 1.0);
    CHECK_THROWS_AS(exact_count_small(big, 0.0, 1.0), UnsupportedError);
    const std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(exact_count_small(zero, 0.0, 1.0), DomainError);

    const auto iso = isolate_roots_small(testing::expand({0.1, 0.2, 0.2000001, 0.9}, {{0.5, 0.3}}), 0.0, 1.0, 1e-9);
    REQUIRE(iso.size() == 4);
    // the close pair is separated even though rounding moves it by ~1e-9
    CHECK(iso[1].right < iso[2].left);
    CHECK(iso[1].right < 0.20000005);
    CHECK(iso[2].left > 0.20000005);
    for (const auto& br : iso)
        CHECK(br.right - br.left <= 1e-9);
}

TEST_CASE("random polynomials against the exact counter") {
    Rng rng(99);
    int agree = 0;
    for (int i = 0; i < 100; ++i) {
        const auto c = testing::random_polynomial(rng, 20);
        const auto zc = count_zeros_fast(poly_eval(c), ScanGrid::linear(0.0, 1.0, 0.01));
        agree += zc.count == exact_count_small(c, 0.0, 1.0);
    }
    CHECK(agree >= 99);
}

TEST_CASE("rice density") {
    CHECK(rice_density(0.0, 1.0) == doctest::Approx(0.15915494309189535).epsilon(1e-15));
    CHECK(rice_density(0.0, 4.0) == doctest::Approx(2.0 * 0.15915494309189535).epsilon(1e-15));
    // integral over [0, 1 - 2^-10] by composite Simpson in u = -log(1-x)
    const double U = 10.0 * std::log(2.0);
    const int N = 2000;
    double acc = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double u = U * i / N;
        const double x = -std::expm1(-u);
        const double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * rice_density(x, 1.0) * std::exp(-u);  // dx = e^{-u} du
    }
    acc *= U / N / 3.0;
    CHECK(acc == doctest::Approx(10.0 * std::log(2.0) / (2.0 * std::numbers::pi)).epsilon(1e-10));
    CHECK(acc == doctest::Approx(1.1032).epsilon(1e-4));
    CHECK_THROWS_AS(rice_density(1.0, 1.0), DomainError);
}

}
