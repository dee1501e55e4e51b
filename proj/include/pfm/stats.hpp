#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pfm {

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("rmse: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc / double(a.size()));
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

/// RMSE normalized by the maximum absolute reference value.
inline double nrmse(const std::vector<double>& candidate, const std::vector<double>& reference) {
    const double scale = max_abs(reference);
    const double e = rmse(candidate, reference);
    return scale > 0.0 ? e / scale : e;
}

/// Linear-interpolation quantile (sorted copy internally), q in [0, 1].
inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile: empty");
    std::sort(v.begin(), v.end());
    const double pos = q * double(v.size() - 1);
    const std::size_t lo = std::size_t(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - double(lo);
    return v[lo] + w * (v[hi] - v[lo]);
}

/// Boxplot summary: Q1, median, Q3 plus the 1.5 IQR whisker fences.
struct BoxStats {
    double lo_whisker = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double hi_whisker = 0.0;
};

inline BoxStats box_stats(const std::vector<double>& v) {
    BoxStats b;
    b.q1 = quantile(v, 0.25);
    b.median = quantile(v, 0.5);
    b.q3 = quantile(v, 0.75);
    const double iqr = b.q3 - b.q1;
    b.lo_whisker = b.q1 - 1.5 * iqr;
    b.hi_whisker = b.q3 + 1.5 * iqr;
    return b;
}

} // namespace pfm
