// Exact Sturm-sequence root counting for small-degree polynomials. Used as a
// test oracle for the floating-point sign-change counter.

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <fmt/format.h>

#include "rtz/errors.hpp"
#include "rtz/roots.hpp"

namespace rtz {

namespace {

using Rational = boost::multiprecision::mpq_rational;
using Poly = std::vector<Rational>;  // ascending powers

constexpr std::size_t kMaxDegree = 64;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k)
        d.push_back(p[k] * static_cast<long>(k));
    trim(d);
    return d;
}

void make_monic(Poly& p) {
    const Rational lead = p.back();
    for (auto& c : p)
        c /= lead;
}

// Long division a = q b + r; b must be nonzero.
void divide(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rational(0));
    while (!r.empty() && r.size() >= b.size()) {
        const std::size_t shift = r.size() - b.size();
        const Rational factor = r.back() / b.back();
        q[shift] = factor;
        for (std::size_t k = 0; k < b.size(); ++k)
            r[shift + k] -= factor * b[k];
        r.pop_back();  // leading term cancels exactly
        trim(r);
    }
}

Poly gcd(Poly a, Poly b) {
    while (!b.empty()) {
        Poly q, r;
        divide(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
        if (!b.empty())
            make_monic(b);
    }
    make_monic(a);
    return a;
}

int sign_at(const Poly& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t k = p.size(); k-- > 0;)
        acc = acc * x + p[k];
    return acc.sign();
}

class SturmChain {
public:
    explicit SturmChain(std::span<const double> coeffs) {
        Poly p;
        for (double c : coeffs) {
            if (!std::isfinite(c))
                throw DomainError("polynomial coefficients must be finite");
            p.emplace_back(c);
        }
        trim(p);
        if (p.empty())
            throw DomainError("the zero polynomial has no finite root count");
        if (p.size() - 1 > kMaxDegree)
            throw UnsupportedError(
                fmt::format("exact root counting supports degree <= {}, got {}", kMaxDegree, p.size() - 1));
        if (p.size() == 1)
            return;

        // Square-free part: distinct roots only.
        const Poly g = gcd(p, derivative(p));
        if (g.size() > 1) {
            Poly q, r;
            divide(p, g, q, r);
            p = std::move(q);
        }
        make_monic(p);

        chain_.push_back(p);
        chain_.push_back(derivative(p));
        while (chain_.back().size() > 1) {
            Poly q, r;
            divide(chain_[chain_.size() - 2], chain_.back(), q, r);
            if (r.empty())
                break;
            for (auto& c : r)
                c = -c;
            chain_.push_back(std::move(r));
        }
    }

    bool constant() const { return chain_.empty(); }

    int variations(const Rational& x) const {
        int count = 0;
        int prev = 0;
        for (const auto& p : chain_) {
            const int s = sign_at(p, x);
            if (s == 0)
                continue;
            if (prev != 0 && s != prev)
                ++count;
            prev = s;
        }
        return count;
    }

    bool is_root(const Rational& x) const { return sign_at(chain_.front(), x) == 0; }

    // Distinct roots in [a,b].
    std::size_t count(const Rational& a, const Rational& b) const {
        if (constant())
            return 0;
        const int inner = variations(a) - variations(b);  // roots in (a,b]
        return static_cast<std::size_t>(inner + (is_root(a) ? 1 : 0));
    }

private:
    std::vector<Poly> chain_;
};

void check_interval(double a, double b) {
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError(fmt::format("invalid interval [{}, {}]", a, b));
}

}  // namespace

std::size_t exact_count_small(std::span<const double> coeffs, double a, double b) {
    check_interval(a, b);
    const SturmChain chain(coeffs);
    return chain.count(Rational(a), Rational(b));
}

std::vector<Bracket> isolate_roots_small(std::span<const double> coeffs, double a, double b,
                                         double max_width) {
    check_interval(a, b);
    if (!(max_width > 0.0))
        throw DomainError("isolation width must be positive");
    const SturmChain chain(coeffs);
    std::vector<Bracket> out;
    if (chain.constant())
        return out;

    const Rational width(max_width);
    std::vector<std::pair<Rational, Rational>> found;
    if (chain.is_root(Rational(a)))
        found.emplace_back(Rational(a), Rational(a));

    // Work items are half-open (lo, hi], where V(lo) - V(hi) counts roots exactly.
    std::vector<std::pair<Rational, Rational>> stack{{Rational(a), Rational(b)}};
    while (!stack.empty()) {
        auto [lo, hi] = std::move(stack.back());
        stack.pop_back();
        const int n = chain.variations(lo) - chain.variations(hi);
        if (n <= 0)
            continue;
        if (n == 1 && hi - lo <= width) {
            found.emplace_back(lo, hi);
            continue;
        }
        Rational mid = (lo + hi) / 2;
        stack.emplace_back(mid, hi);
        stack.emplace_back(std::move(lo), std::move(mid));
    }
    std::sort(found.begin(), found.end());
    for (const auto& [lo, hi] : found)
        out.push_back({lo.convert_to<double>(), hi.convert_to<double>()});
    return out;
}

}  // namespace rtz
