#include "rtz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "rtz/errors.hpp"
#include "rtz/stats.hpp"
#include "rtz/summation.hpp"

namespace rtz {

namespace {

void check_q(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError(fmt::format("q must lie in (0,1), got {}", q));
}

EventualBound summarize(const std::vector<DiagnosticRow>& rows, bool DiagnosticRow::*flag) {
    EventualBound out;
    for (const auto& row : rows) {
        if (row.skipped)
            continue;
        if (!out.n0) {
            if (row.*flag)
                out.n0 = row.n;
        } else if (!(row.*flag)) {
            ++out.violations_beyond;
        }
    }
    return out;
}

}  // namespace

WeightArray weights(const CoefficientSequence& seq, int n, double q, std::size_t K) {
    check_q(q);
    if (n < 1)
        throw DomainError(fmt::format("n must be positive, got {}", n));
    if (K < 1)
        throw DomainError("weight array needs K >= 1");

    WeightArray w;
    w.n = n;
    w.q = q;
    w.x = 1.0 - std::pow(q, n);
    w.K = K;
    if (!(w.x > 0.0 && w.x < 1.0))
        throw DomainError(fmt::format("1 - q^n = {} is not inside (0,1)", w.x));

    const double v = variance_v(seq, w.x, 1e-15);
    const double log_v = std::log(v);
    const double log_x2 = 2.0 * std::log(w.x);

    w.a_sq.resize(K + 1);
    w.a_sq[0] = seq.coeff_sq(0) / v;
    for (std::size_t k = 1; k <= K; ++k)
        w.a_sq[k] = std::exp(seq.log_coeff_sq(k) + static_cast<double>(k) * log_x2 - log_v);

    w.tail_mass = tail_mass_bound(seq, w.x, K) / v;
    if (w.tail_mass > kNormalizationTolerance)
        throw TruncationError(fmt::format(
            "K = {} leaves tail mass {:.3g} at n = {} (needs <= {:g})", K, w.tail_mass, n,
            kNormalizationTolerance));
    return w;
}

std::vector<double> rearrange(const WeightArray& w) {
    std::vector<double> b = w.a_sq;
    std::sort(b.begin(), b.end(), std::greater<>{});
    return b;
}

TailPair tails(const WeightArray& w, std::span<const double> rearranged) {
    if (rearranged.size() != w.a_sq.size())
        throw DomainError("rearranged weights do not match the weight array");
    const std::size_t size = w.a_sq.size();
    TailPair t;
    t.F_tilde.resize(size);
    t.F.resize(size);
    CompensatedSum a_tail, b_tail;
    a_tail += w.tail_mass;
    b_tail += w.tail_mass;
    for (std::size_t k = size; k-- > 0;) {
        a_tail += w.a_sq[k];
        b_tail += rearranged[k];
        t.F_tilde[k] = a_tail.value();
        t.F[k] = b_tail.value();
    }
    return t;
}

std::size_t diagnostic_degree(int n, double q) {
    check_q(q);
    return static_cast<std::size_t>(std::ceil(40.0 * n * std::pow(q, -n)));
}

namespace {

DiagnosticRow evaluate_row(const CoefficientSequence& seq, double q, int n, std::size_t K) {
    DiagnosticRow row;
    row.n = n;
    row.K = K;

    const WeightArray w = weights(seq, n, q, K);
    const std::vector<double> b = rearrange(w);
    const TailPair t = tails(w, b);
    const double gamma = seq.gamma();
    const double qn = std::pow(q, n);

    row.normalization_error = std::abs(t.F_tilde[0] - 1.0);

    // (i) largest weight against q^(n/2 min(1,gamma))
    row.b0_sq = b.front();
    row.b0_bound = std::pow(q, 0.5 * n * std::min(1.0, gamma));
    row.max_weight_ok = row.b0_sq <= row.b0_bound;

    // (ii) F <= F~ pointwise
    double excess = -1.0;
    for (std::size_t k = 0; k <= K; ++k)
        excess = std::max(excess, t.F[k] - t.F_tilde[k]);
    row.max_tail_excess = excess;
    row.tail_order_ok = excess <= kTailOrderTolerance;

    // (iii) F_k >= F~_{k + floor(sqrt(n) q^-n)} for k <= K/2
    row.shift = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)) / qn));
    row.shifted_tail_ok = true;
    for (std::size_t k = 0; k <= K / 2; ++k) {
        const std::size_t j = k + row.shift;
        const double shifted = j <= K ? t.F_tilde[j] : w.tail_mass;
        if (t.F[k] < shifted) {
            row.shifted_tail_ok = false;
            break;
        }
    }

    // (iv) C_hat = max over k >= n q^-n of F~_k e^{k q^n}
    const auto k_start = static_cast<std::size_t>(std::ceil(n / qn));
    double log_c_hat = -INFINITY;
    for (std::size_t k = k_start; k <= K; ++k) {
        if (t.F_tilde[k] <= 0.0)
            break;
        log_c_hat = std::max(log_c_hat, std::log(t.F_tilde[k]) + static_cast<double>(k) * qn);
    }
    row.c_hat = std::exp(log_c_hat);

    // (v) lower bound with y_n = n, eps = 1/4
    constexpr double eps = 0.25;
    const auto k_low = static_cast<std::size_t>(std::floor(n / qn));
    const double reference = std::pow(q, 2.0 * n * eps) *
                             std::pow(static_cast<double>(n), gamma - 1.0 - eps) *
                             std::exp(-2.0 * n);
    row.lower_constant = (k_low <= K ? t.F_tilde[k_low] : w.tail_mass) / reference;
    return row;
}

}  // namespace

DiagnosticReport check_inequalities(const CoefficientSequence& seq, double q, int n_min, int n_max,
                                    std::size_t max_terms) {
    check_q(q);
    if (n_min < 1 || n_max < n_min)
        throw DomainError(fmt::format("invalid n range [{}, {}]", n_min, n_max));

    DiagnosticReport report;
    report.gamma = seq.gamma();
    report.q = q;
    report.slow = seq.slow().to_string();

    for (int n = n_min; n <= n_max; ++n) {
        const double wanted = 40.0 * n * std::pow(q, -n);
        if (!(wanted <= static_cast<double>(max_terms))) {
            DiagnosticRow row;
            row.n = n;
            row.skipped = true;
            row.notice = fmt::format("needs K = {:.3g} > budget {}", wanted, max_terms);
            report.rows.push_back(std::move(row));
            continue;
        }
        try {
            report.rows.push_back(evaluate_row(seq, q, n, diagnostic_degree(n, q)));
        } catch (const TruncationError& e) {
            DiagnosticRow row;
            row.n = n;
            row.skipped = true;
            row.notice = e.what();
            report.rows.push_back(std::move(row));
        }
    }

    report.max_weight = summarize(report.rows, &DiagnosticRow::max_weight_ok);
    report.shifted_tail = summarize(report.rows, &DiagnosticRow::shifted_tail_ok);

    std::vector<double> ns, log_c;
    report.exact_ok = true;
    for (const auto& row : report.rows) {
        if (row.skipped)
            continue;
        report.exact_ok = report.exact_ok && row.normalization_error <= kNormalizationTolerance &&
                          row.tail_order_ok;
        if (row.c_hat > 0.0 && std::isfinite(row.c_hat)) {
            ns.push_back(row.n);
            log_c.push_back(std::log(row.c_hat));
        }
    }
    if (ns.size() >= 2) {
        report.c_hat_log_slope = ols_slope(ns, log_c);
        report.c_hat_bounded = *report.c_hat_log_slope <= 0.0;
    } else {
        report.c_hat_bounded = !ns.empty();
    }
    report.lemma_ok = report.max_weight.violations_beyond == 0 &&
                      report.shifted_tail.violations_beyond == 0;
    return report;
}

}  // namespace rtz
