#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace decoy {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

inline double log_gamma(double x) { return std::lgamma(x); }

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace detail {

// Lower regularized incomplete gamma P(a,x) by series expansion; valid for
// x < a + 1.
inline double gamma_p_series(double a, double x) {
    const int max_iter = 500;
    const double eps = 1e-14;
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < max_iter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by continued fraction; valid for
// x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const int max_iter = 500;
    const double eps = 1e-14;
    const double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a, x) = Gamma(a,x) / Gamma(a).
inline double gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_q: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// P(X >= stat) for X ~ chi-squared with df degrees of freedom.
inline double chi_squared_p_value(double stat, int df) {
    if (df < 1) throw std::invalid_argument("chi_squared_p_value: df must be >= 1");
    if (stat < 0.0) throw std::invalid_argument("chi_squared_p_value: stat must be >= 0");
    return gamma_q(0.5 * df, 0.5 * stat);
}

struct ChiSquaredResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    int bins_used = 0;  // after pooling
};

/// Pearson goodness-of-fit test. Bins with expected count below min_expected
/// are pooled into the nearest kept bin (scanning left to right, remainder
/// folded into the last kept bin). df = bins_used - 1.
inline ChiSquaredResult chi_squared_gof(const std::vector<double>& observed,
                                        const std::vector<double>& expected,
                                        double min_expected = 5.0) {
    if (observed.size() != expected.size())
        throw std::invalid_argument("chi_squared_gof: size mismatch");
    if (observed.empty())
        throw std::invalid_argument("chi_squared_gof: empty input");

    std::vector<double> obs;
    std::vector<double> exp;
    double carry_obs = 0.0;
    double carry_exp = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        carry_obs += observed[i];
        carry_exp += expected[i];
        if (carry_exp >= min_expected) {
            obs.push_back(carry_obs);
            exp.push_back(carry_exp);
            carry_obs = 0.0;
            carry_exp = 0.0;
        }
    }
    if (carry_exp > 0.0) {
        if (exp.empty()) {
            obs.push_back(carry_obs);
            exp.push_back(carry_exp);
        } else {
            obs.back() += carry_obs;
            exp.back() += carry_exp;
        }
    }
    if (exp.size() < 2)
        throw std::invalid_argument("chi_squared_gof: too few bins after pooling");

    double stat = 0.0;
    for (size_t i = 0; i < exp.size(); ++i) {
        double diff = obs[i] - exp[i];
        stat += diff * diff / exp[i];
    }
    ChiSquaredResult r;
    r.statistic = stat;
    r.df = static_cast<int>(exp.size()) - 1;
    r.bins_used = static_cast<int>(exp.size());
    r.p_value = chi_squared_p_value(stat, r.df);
    return r;
}

}  // namespace decoy
