#include "rtz/roots.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "rtz/errors.hpp"

namespace rtz {

namespace {

double to_coord(GridCoordinate c, double x) {
    return c == GridCoordinate::LogScale ? -std::log1p(-x) : x;
}

double from_coord(GridCoordinate c, double u) {
    return c == GridCoordinate::LogScale ? -std::expm1(-u) : u;
}

std::size_t steps_for(double length, double step) {
    const double n = std::ceil(length / step * (1.0 - 1e-12));
    if (!(n < 1e9))
        throw DomainError(fmt::format("grid would need {} steps", n));
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Brackets as index pairs into the scanned values; equal indices mark an exact zero.
struct IndexBracket {
    std::size_t left;
    std::size_t right;
};

std::vector<IndexBracket> scan(std::span<const double> values, bool half_open) {
    std::vector<IndexBracket> out;
    int prev = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int s = sign_of(values[i]);
        if (s == 0) {
            if (!(half_open && i + 1 == values.size()))
                out.push_back({i, i});
        } else if (prev != 0 && s != prev) {
            out.push_back({i - 1, i});
        }
        prev = s;
    }
    return out;
}

double checked(const std::function<double(double)>& eval, double x) {
    const double v = eval(x);
    if (!std::isfinite(v))
        throw EvaluationError(fmt::format("non-finite value {} at x = {}", v, x), x);
    return v;
}

Bracket bisect(const std::function<double(double)>& eval, double lo, double hi, double flo,
               double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = checked(eval, mid);
        if (fm == 0.0)
            return {mid, mid};
        if (sign_of(fm) == sign_of(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

ZeroCount count_impl(const std::function<double(double)>& eval, const ScanGrid& grid, bool locate) {
    const ScanGrid fine = grid.refined();
    const std::vector<double> xs = fine.points();
    std::vector<double> fine_values(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        fine_values[i] = checked(eval, xs[i]);

    std::vector<double> coarse_values;
    coarse_values.reserve(grid.steps() + 1);
    for (std::size_t i = 0; i < fine_values.size(); i += 2)
        coarse_values.push_back(fine_values[i]);

    const auto coarse = scan(coarse_values, grid.half_open());
    const auto refined_count = scan(fine_values, grid.half_open()).size();

    ZeroCount result;
    result.count = coarse.size();
    result.stable = refined_count == result.count;
    if (!locate)
        return result;

    const double tol = 1e-12 * (grid.b() - grid.a());
    result.locations.reserve(coarse.size());
    for (const auto& br : coarse) {
        const std::size_t l = 2 * br.left;
        const std::size_t r = 2 * br.right;
        if (l == r) {
            result.locations.push_back({xs[l], xs[l]});
            continue;
        }
        // Start from whichever half of the coarse cell holds the sign change.
        const std::size_t m = l + 1;
        if (fine_values[m] == 0.0) {
            result.locations.push_back({xs[m], xs[m]});
        } else if (sign_of(fine_values[m]) != sign_of(fine_values[l])) {
            result.locations.push_back(bisect(eval, xs[l], xs[m], fine_values[l], tol));
        } else {
            result.locations.push_back(bisect(eval, xs[m], xs[r], fine_values[m], tol));
        }
    }
    return result;
}

}  // namespace

ScanGrid ScanGrid::log_scale(double a, double b, double eta, double gamma) {
    if (!(a >= 0.0 && a < b && b < 1.0))
        throw DomainError(fmt::format("log-scale grid needs 0 <= a < b < 1, got [{}, {}]", a, b));
    if (!(eta > 0.0) || !(gamma > 0.0))
        throw DomainError("grid step factor and gamma must be positive");
    const double step = eta * 2.0 * std::numbers::pi / std::sqrt(gamma);
    const double length = to_coord(GridCoordinate::LogScale, b) - to_coord(GridCoordinate::LogScale, a);
    return ScanGrid(a, b, GridCoordinate::LogScale, steps_for(length, step));
}

ScanGrid ScanGrid::linear(double a, double b, double eta) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError(fmt::format("linear grid needs a < b, got [{}, {}]", a, b));
    if (!(eta > 0.0 && eta <= 1.0))
        throw DomainError(fmt::format("linear grid step factor must lie in (0,1], got {}", eta));
    return ScanGrid(a, b, GridCoordinate::Linear, steps_for(1.0, eta));
}

double ScanGrid::step() const noexcept {
    return (to_coord(coord_, b_) - to_coord(coord_, a_)) / static_cast<double>(steps_);
}

ScanGrid ScanGrid::refined() const {
    ScanGrid g(a_, b_, coord_, 2 * steps_);
    g.half_open_ = half_open_;
    return g;
}

std::vector<double> ScanGrid::points() const {
    const double ca = to_coord(coord_, a_);
    const double length = to_coord(coord_, b_) - ca;
    const double n = static_cast<double>(steps_);
    std::vector<double> xs(steps_ + 1);
    xs.front() = a_;
    for (std::size_t i = 1; i < steps_; ++i)
        xs[i] = from_coord(coord_, ca + length * (static_cast<double>(i) / n));
    xs.back() = b_;
    return xs;
}

std::size_t count_sign_changes(std::span<const double> values, bool half_open) {
    return scan(values, half_open).size();
}

ZeroCount count_zeros(const std::function<double(double)>& eval, const ScanGrid& grid) {
    return count_impl(eval, grid, true);
}

ZeroCount count_zeros_fast(const std::function<double(double)>& eval, const ScanGrid& grid) {
    return count_impl(eval, grid, false);
}

double rice_density(double x, double gamma) {
    if (!(x >= 0.0 && x < 1.0))
        throw DomainError(fmt::format("rice_density needs x in [0,1), got {}", x));
    return std::sqrt(gamma) / (2.0 * std::numbers::pi * (1.0 - x));
}

}  // namespace rtz
