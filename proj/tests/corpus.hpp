#pragma once

// Polynomial corpora shared by the root-counter tests and the acceptance run.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rtz/rng.hpp"

namespace rtz::testing {

/// Ascending coefficients of prod (x - r_i) * prod ((x - c_j)^2 + d_j^2).
inline std::vector<double> expand(const std::vector<double>& roots,
                                  const std::vector<std::pair<double, double>>& quads) {
    std::vector<double> p{1.0};
    auto mul = [&p](const std::vector<double>& f) {
        std::vector<double> out(p.size() + f.size() - 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j)
                out[i + j] += p[i] * f[j];
        p = std::move(out);
    };
    for (double r : roots)
        mul({-r, 1.0});
    for (auto [c, d] : quads)
        mul({c * c + d * d, -2.0 * c, 1.0});
    return p;
}

struct PlantedPolynomial {
    std::vector<double> coeffs;
    std::vector<double> roots;  ///< the real roots inside [0, 1], sorted
};

/// Degree-`degree` polynomial with a random number of simple roots in [0.1, 0.9],
/// pairwise at least `separation` apart; the remaining degree has no roots in [0, 1].
inline PlantedPolynomial planted_polynomial(Rng& rng, int degree, double separation) {
    const int m = static_cast<int>(rng.next() % static_cast<std::uint64_t>(degree + 1));
    std::vector<double> roots;
    while (static_cast<int>(roots.size()) < m) {
        const double r = rng.uniform(0.1, 0.9);
        if (std::all_of(roots.begin(), roots.end(), [&](double s) { return std::abs(s - r) >= separation; }))
            roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> all = roots;
    std::vector<std::pair<double, double>> quads;
    int left = degree - m;
    if (left % 2 == 1) {
        all.push_back(rng.uniform(1.5, 3.0) * (rng.sign() > 0 ? 1.0 : -1.0));
        --left;
    }
    for (; left > 0; left -= 2)
        quads.emplace_back(rng.uniform(-1.0, 2.0), rng.uniform(0.1, 1.0));
    return {expand(all, quads), roots};
}

/// Degree-`degree` polynomial with i.i.d. standard normal coefficients.
inline std::vector<double> random_polynomial(Rng& rng, int degree) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c)
        v = rng.standard_normal();
    return c;
}

}  // namespace rtz::testing
