#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rtz {

enum class GridCoordinate {
    LogScale,  ///< uniform in u = -log(1 - x); needs [a,b] inside [0,1)
    Linear,    ///< uniform in x
};

/// Scan points on [a,b]. The first point is exactly a and the last exactly b.
///
/// On the log scale the step in u is eta * 2 pi / sqrt(gamma), a fixed fraction of
/// the mean spacing between zeros of the limit process. On the linear scale the
/// step is eta * (b - a).
class ScanGrid {
public:
    static ScanGrid log_scale(double a, double b, double eta, double gamma);
    static ScanGrid linear(double a, double b, double eta);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    GridCoordinate coordinate() const noexcept { return coord_; }
    std::size_t steps() const noexcept { return steps_; }

    /// Step length in the grid coordinate (u or x).
    double step() const noexcept;

    /// A zero sitting exactly on b is not counted when half-open.
    bool half_open() const noexcept { return half_open_; }
    ScanGrid& set_half_open(bool on) noexcept {
        half_open_ = on;
        return *this;
    }

    /// Same endpoints, twice as many steps; every point of *this is a point of the result.
    ScanGrid refined() const;

    std::vector<double> points() const;

private:
    ScanGrid(double a, double b, GridCoordinate coord, std::size_t steps)
        : a_(a), b_(b), coord_(coord), steps_(steps) {}

    double a_;
    double b_;
    GridCoordinate coord_;
    std::size_t steps_;
    bool half_open_ = false;
};

/// Interval with a sign change at its ends (or a single point where eval == 0).
struct Bracket {
    double left = 0.0;
    double right = 0.0;
};

struct ZeroCount {
    std::size_t count = 0;
    std::vector<Bracket> locations;
    bool stable = true;  ///< count unchanged on the half-step grid
};

/// Number of sign changes in `values`, counting exact zeros once each.
/// With `half_open`, a zero at the last value is ignored.
std::size_t count_sign_changes(std::span<const double> values, bool half_open = false);

/// Counts zeros of `eval` on `grid` by sign changes, refines each by bisection to
/// width 1e-12 (b - a), and recounts on the half-step grid to set `stable`.
/// Throws EvaluationError when eval returns a non-finite value.
ZeroCount count_zeros(const std::function<double(double)>& eval, const ScanGrid& grid);

/// Same, without bisecting the brackets (the count and stability are identical).
ZeroCount count_zeros_fast(const std::function<double(double)>& eval, const ScanGrid& grid);

/// Exact number of distinct real roots of sum_k coeffs[k] x^k in [a,b], via a Sturm
/// sequence over the rationals. Intended as a test oracle; degree <= 64.
std::size_t exact_count_small(std::span<const double> coeffs, double a, double b);

/// Disjoint brackets, each holding exactly one distinct root in [a,b], of width <= max_width.
std::vector<Bracket> isolate_roots_small(std::span<const double> coeffs, double a, double b,
                                         double max_width);

/// sqrt(gamma) / (2 pi (1 - x)): asymptotic density of real zeros near x.
double rice_density(double x, double gamma);

}  // namespace rtz
