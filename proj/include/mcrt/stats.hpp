#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mcrt/errors.hpp"

namespace mcrt {

struct Summary {
    double mean = 0.0;
    double se = 0.0; // standard error of the mean
    std::size_t n = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
    }
    return s;
}

// Linear interpolation percentile, q in [0,1].
inline double percentile(std::vector<double> xs, double q) {
    if (xs.empty()) throw domain_error("percentile: empty sample");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

// Two-sided 95% Student t quantile; normal limit beyond the table.
inline double t_quantile_975(std::size_t dof) {
    static constexpr double table[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof == 0) return 12.706;
    if (dof <= 30) return table[dof - 1];
    return 1.96;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0;
    double ci_low = 0.0;  // 95% interval for the slope
    double ci_high = 0.0;
    std::size_t n = 0;

    bool ci_excludes_zero() const { return ci_low > 0.0 || ci_high < 0.0; }
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw domain_error("fit_line: need at least 3 matched points");
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw domain_error("fit_line: degenerate abscissae");

    LinearFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += r * r;
    }
    fit.r2 = syy == 0.0 ? 1.0 : 1.0 - rss / syy;
    const double dof = n - 2.0;
    fit.slope_se = dof > 0.0 ? std::sqrt(rss / dof / sxx) : 0.0;
    const double halfwidth = t_quantile_975(x.size() - 2) * fit.slope_se;
    fit.ci_low = fit.slope - halfwidth;
    fit.ci_high = fit.slope + halfwidth;
    return fit;
}

struct Estimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t successes = 0;
    std::size_t trials = 0;
};

// Wilson score interval at z = 1.96.
inline Estimate wilson_interval(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw domain_error("wilson_interval: zero trials");
    constexpr double z = 1.96;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / denom;
    const double margin =
        z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    Estimate e;
    e.value = p;
    e.ci_low = std::max(0.0, center - margin);
    e.ci_high = std::min(1.0, center + margin);
    e.successes = successes;
    e.trials = trials;
    return e;
}

} // namespace mcrt
