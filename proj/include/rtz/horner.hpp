#pragma once

#include <cmath>
#include <span>

namespace rtz {

/// Plain Horner evaluation of sum_k coeffs[k] x^k.
inline double horner(std::span<const double> coeffs, double x) noexcept {
    double r = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;)
        r = std::fma(r, x, coeffs[k]);
    return r;
}

/// Compensated Horner scheme (error-free TwoProduct via fma, TwoSum for the
/// addition). The result is as accurate as plain Horner in twice the working
/// precision, then rounded once.
inline double compensated_horner(std::span<const double> coeffs, double x) noexcept {
    if (coeffs.empty())
        return 0.0;
    std::size_t k = coeffs.size() - 1;
    double s = coeffs[k];
    double c = 0.0;
    while (k-- > 0) {
        const double p = s * x;
        const double pi = std::fma(s, x, -p);
        const double t = p + coeffs[k];
        const double z = t - p;
        const double sigma = (p - (t - z)) + (coeffs[k] - z);
        s = t;
        c = std::fma(c, x, pi + sigma);
    }
    return s + c;
}

}  // namespace rtz
