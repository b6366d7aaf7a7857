#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace ubiq {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(sum(exp(v))) over finite entries; -inf entries contribute nothing.
inline double log_sum_exp(std::span<const double> v) {
    double m = neg_inf;
    for (double x : v)
        if (x > m) m = x;
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

inline double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    std::size_t n = 0;
};

// Ordinary least squares y ~ slope*x + intercept.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    f.n = x.size();
    return f;
}

struct KendallTrend {
    double tau = 0.0;
    double z = 0.0;       // normal approximation, ties ignored
    bool increasing_at_5pct = false;
};

// One-sided Kendall test for an increasing trend of y against its index order.
inline KendallTrend kendall_trend(std::span<const double> y) {
    KendallTrend t;
    const std::size_t n = y.size();
    if (n < 3) return t;
    long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] > y[i]) ++concordant;
            else if (y[j] < y[i]) ++discordant;
        }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    t.tau = (concordant - discordant) / pairs;
    const double var = (2.0 * (2.0 * n + 5.0)) / (9.0 * n * (n - 1.0));
    t.z = t.tau / std::sqrt(var);
    t.increasing_at_5pct = t.z > 1.6449;  // one-sided 5%
    return t;
}

}  // namespace ubiq
