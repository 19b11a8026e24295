#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace normdec {

/// Point of the plane the norms live on.
struct Vec2 {
    double u{0.0};
    double v{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double u_, double v_) : u(u_), v(v_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {u + r.u, v + r.v}; }
    constexpr Vec2 operator-(Vec2 r) const { return {u - r.u, v - r.v}; }
    constexpr Vec2 operator-() const { return {-u, -v}; }
    constexpr Vec2 operator*(double s) const { return {u * s, v * s}; }
    friend constexpr Vec2 operator*(double s, Vec2 x) { return {x.u * s, x.v * s}; }

    bool finite() const { return std::isfinite(u) && std::isfinite(v); }
};

/// d-dimensional point; d is fixed by the length.
using VecD = std::vector<double>;

inline VecD add(const VecD& a, const VecD& b) {
    if (a.size() != b.size()) throw std::invalid_argument("VecD dimension mismatch");
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline VecD sub(const VecD& a, const VecD& b) {
    if (a.size() != b.size()) throw std::invalid_argument("VecD dimension mismatch");
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline VecD scale(const VecD& a, double s) {
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

/// Linear functional (u,v) -> a*u + b*v on the plane.
struct Functional2 {
    double a{0.0};
    double b{0.0};

    constexpr Functional2() = default;
    constexpr Functional2(double a_, double b_) : a(a_), b(b_) {}

    constexpr double operator()(Vec2 x) const { return a * x.u + b * x.v; }
};

}  // namespace normdec
