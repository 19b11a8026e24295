#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace normdec::detail {

/// Fritsch-Carlson monotone piecewise cubic; derivative stays nonnegative
/// for nondecreasing data, which is what keeps reconstructed densities that
/// come from N' samples valid.
struct MonotoneCubic {
    std::vector<double> x, y, m;  // nodes, values, limited slopes

    static MonotoneCubic fit(std::vector<double> xs, std::vector<double> ys) {
        MonotoneCubic pc;
        pc.x = std::move(xs);
        pc.y = std::move(ys);
        const std::size_t n = pc.x.size();
        pc.m.assign(n, 0.0);
        if (n < 2) return pc;
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double h = pc.x[i + 1] - pc.x[i];
            d[i] = h > 0 ? (pc.y[i + 1] - pc.y[i]) / h : 0.0;
        }
        pc.m[0] = d[0];
        pc.m[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0)
                pc.m[i] = 0.0;
            else {
                double w1 = 2.0 * (pc.x[i + 1] - pc.x[i]) + (pc.x[i] - pc.x[i - 1]);
                double w2 = (pc.x[i + 1] - pc.x[i]) + 2.0 * (pc.x[i] - pc.x[i - 1]);
                pc.m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);  // harmonic mean
            }
        }
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            std::size_t j = (i == 0) ? 0 : n - 2;
            if (d[j] == 0.0)
                pc.m[i] = 0.0;
            else if (pc.m[i] / d[j] > 3.0)
                pc.m[i] = 3.0 * d[j];
            else if (pc.m[i] / d[j] < 0.0)
                pc.m[i] = 0.0;
        }
        return pc;
    }

    double eval(double t) const;
    double derivative(double t) const;
};

inline double MonotoneCubic::eval(double t) const {
    if (x.empty()) return 0.0;
    if (t <= x.front()) return y.front();
    if (t >= x.back()) return y.back();
    std::size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (x[mid] <= t ? lo : hi) = mid;
    }
    double h = x[lo + 1] - x[lo];
    double s = (t - x[lo]) / h;
    double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    double h10 = s * (1.0 - s) * (1.0 - s);
    double h01 = s * s * (3.0 - 2.0 * s);
    double h11 = s * s * (s - 1.0);
    return y[lo] * h00 + h * m[lo] * h10 + y[lo + 1] * h01 + h * m[lo + 1] * h11;
}

inline double MonotoneCubic::derivative(double t) const {
    if (x.empty()) return 0.0;
    if (t <= x.front() || t >= x.back()) return 0.0;
    std::size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (x[mid] <= t ? lo : hi) = mid;
    }
    double h = x[lo + 1] - x[lo];
    double s = (t - x[lo]) / h;
    double dy = (y[lo + 1] - y[lo]) / h;
    return dy * (6.0 * s - 6.0 * s * s) + m[lo] * (3.0 * s * s - 4.0 * s + 1.0) +
           m[lo + 1] * (3.0 * s * s - 2.0 * s);
}

}  // namespace normdec::detail
