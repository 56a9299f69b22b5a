#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace structbandit {

namespace detail {

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete_beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

inline double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
    const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
    return t >= 0.0 ? 1.0 - tail : tail;
}

/// Quantile of Student's t for p in (0, 1), by bisection on the CDF.
inline double student_t_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
    if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
    if (p == 0.5) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (student_t_cdf(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (student_t_cdf(mid, dof) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct Interval {
    double mean = 0.0;
    double half_width = 0.0;
};

/// Mean and Student-t half-width t_{(1+level)/2, R-1} s / sqrt(R).
inline Interval t_interval(const std::vector<double>& samples, double level = 0.95) {
    if (samples.size() < 2) throw std::invalid_argument("t_interval needs at least 2 samples");
    if (!(level > 0.5 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0.5, 1)");
    const double r = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples) sum += v;
    // Rounding can push the quotient just outside the sample range.
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    const double mean = std::clamp(sum / r, *lo, *hi);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (r - 1.0));
    Interval out;
    out.mean = mean;
    out.half_width = sd == 0.0 ? 0.0 : student_t_quantile(0.5 * (1.0 + level), r - 1.0) * sd / std::sqrt(r);
    return out;
}

}  // namespace structbandit
