#include "normdec/norm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace normdec {

namespace {

double lp_eval(double p, const VecD& x) {
    double amax = 0.0;
    for (double c : x) amax = std::max(amax, std::abs(c));
    if (amax == 0.0) return 0.0;
    if (std::isinf(p)) return amax;
    // scaled to avoid overflow/underflow of |c|^p
    double s = 0.0;
    for (double c : x) {
        double r = std::abs(c) / amax;
        if (r > 0.0) s += std::pow(r, p);
    }
    return amax * std::pow(s, 1.0 / p);
}

double l1_eval(const VecD& x) {
    double s = 0.0;
    for (double c : x) s += std::abs(c);
    return s;
}

void check_dim(int want, std::size_t got) {
    if (static_cast<std::size_t>(want) != got)
        throw std::invalid_argument("eval_norm: dimension mismatch");
}

}  // namespace

int NormSpec::dim() const {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LpNorm>) return n.dim;
            else if constexpr (std::is_same_v<T, L1Norm>) return n.dim;
            else if constexpr (std::is_same_v<T, JohnsonNorm>) return n.d;
            else return 2;
        },
        variant);
}

std::string NormSpec::name() const {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LpNorm>) {
                if (std::isinf(n.p)) return "linf";
                return "lp(" + std::to_string(n.p) + ")";
            } else if constexpr (std::is_same_v<T, L1Norm>) {
                return "l1";
            } else if constexpr (std::is_same_v<T, PolygonalNorm>) {
                return "polygon(" + std::to_string(n.hull.size()) + ")";
            } else if constexpr (std::is_same_v<T, JohnsonNorm>) {
                return "johnson(" + std::to_string(n.d) + ")";
            } else {
                return "gauge";
            }
        },
        variant);
}

NormSpec make_lp(double p, int dim) {
    if (!(p > 1.0))
        throw std::invalid_argument("make_lp: p must lie in (1, inf]; use make_l1 for p = 1");
    if (dim < 1) throw std::invalid_argument("make_lp: dim must be >= 1");
    return NormSpec{LpNorm{p, dim}};
}

NormSpec make_l1(int dim) {
    if (dim < 1) throw std::invalid_argument("make_l1: dim must be >= 1");
    return NormSpec{L1Norm{dim}};
}

NormSpec make_linf(int dim) { return make_lp(kInf, dim); }

NormSpec make_johnson(int d) {
    if (d < 3) throw std::invalid_argument("make_johnson: d must be >= 3");
    return NormSpec{JohnsonNorm{d}};
}

NormSpec make_gauge(std::function<double(Vec2)> eval, double lipschitz_bound) {
    if (!eval) throw std::invalid_argument("make_gauge: evaluator required");
    if (!(lipschitz_bound > 0.0))
        throw std::invalid_argument("make_gauge: Lipschitz bound must be positive");
    return NormSpec{GaugeNorm{std::move(eval), lipschitz_bound}};
}

NormSpec make_polygonal(const std::vector<Vec2>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("make_polygonal: no vertices");

    std::vector<Vec2> pts;
    pts.reserve(2 * vertices.size());
    double rmax = 0.0;
    for (Vec2 v : vertices) {
        if (!v.finite()) throw std::invalid_argument("make_polygonal: non-finite vertex");
        rmax = std::max(rmax, std::max(std::abs(v.u), std::abs(v.v)));
        pts.push_back(v);
        pts.push_back(-v);  // users may supply half the ball
    }
    if (rmax == 0.0) throw std::invalid_argument("make_polygonal: all vertices at origin");

    const double eps = 1e-12 * rmax;
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        double ta = std::atan2(a.v, a.u), tb = std::atan2(b.v, b.u);
        if (ta != tb) return ta < tb;
        return a.u * a.u + a.v * a.v < b.u * b.u + b.v * b.v;
    });

    // Graham-style scan around the origin; strict turns only, so collinear
    // and duplicate points collapse.
    auto cross = [](Vec2 o, Vec2 a, Vec2 b) {
        return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
    };
    std::vector<Vec2> hull;
    for (Vec2 p : pts) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull.back(), p) <= eps * rmax)
            hull.pop_back();
        if (!hull.empty()) {
            Vec2 d{hull.back().u - p.u, hull.back().v - p.v};
            if (std::abs(d.u) <= eps && std::abs(d.v) <= eps) continue;
        }
        hull.push_back(p);
    }
    // close the scan: wrap-around collinearity at both ends
    for (int pass = 0; pass < 2 && hull.size() >= 3; ++pass) {
        if (cross(hull[hull.size() - 2], hull.back(), hull.front()) <= eps * rmax)
            hull.pop_back();
        else if (cross(hull.back(), hull.front(), hull[1]) <= eps * rmax)
            hull.erase(hull.begin());
        else
            break;
    }

    if (hull.size() < 4)
        throw std::invalid_argument(
            "make_polygonal: degenerate ball (vertices collinear or too few)");

    PolygonalNorm poly;
    poly.hull = hull;
    poly.facets.reserve(hull.size());
    for (std::size_t i = 0; i < hull.size(); ++i) {
        Vec2 A = hull[i], B = hull[(i + 1) % hull.size()];
        double det = A.u * B.v - B.u * A.v;
        if (std::abs(det) <= eps * rmax)
            throw std::invalid_argument("make_polygonal: facet through the origin");
        poly.facets.push_back({(B.v - A.v) / det, (A.u - B.u) / det});
    }
    return NormSpec{std::move(poly)};
}

double johnson_norm(int d, const VecD& x) {
    if (d < 3) throw std::invalid_argument("johnson_norm: d must be >= 3");
    check_dim(d, x.size());
    double amax = 0.0, cmax = -kInf, cmin = kInf;
    for (double c : x) {
        amax = std::max(amax, std::abs(c));
        cmax = std::max(cmax, c);
        cmin = std::min(cmin, c);
    }
    return std::max(amax, cmax - cmin);
}

double eval_norm(const NormSpec& spec, const VecD& x) {
    for (double c : x)
        if (!std::isfinite(c)) throw std::invalid_argument("eval_norm: non-finite component");
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LpNorm>) {
                check_dim(n.dim, x.size());
                return lp_eval(n.p, x);
            } else if constexpr (std::is_same_v<T, L1Norm>) {
                check_dim(n.dim, x.size());
                return l1_eval(x);
            } else if constexpr (std::is_same_v<T, JohnsonNorm>) {
                return johnson_norm(n.d, x);
            } else if constexpr (std::is_same_v<T, PolygonalNorm>) {
                check_dim(2, x.size());
                return eval_norm(spec, Vec2{x[0], x[1]});
            } else {
                check_dim(2, x.size());
                return eval_norm(spec, Vec2{x[0], x[1]});
            }
        },
        spec.variant);
}

double eval_norm(const NormSpec& spec, Vec2 x) {
    if (!x.finite()) throw std::invalid_argument("eval_norm: non-finite component");
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, PolygonalNorm>) {
                double m = 0.0;
                for (const Functional2& f : n.facets) m = std::max(m, f(x));
                return m;
            } else if constexpr (std::is_same_v<T, GaugeNorm>) {
                return n.eval(x);
            } else {
                return eval_norm(spec, VecD{x.u, x.v});
            }
        },
        spec.variant);
}

ValidationReport validate_norm(const NormSpec& spec, int samples, double tol,
                               unsigned long long seed) {
    if (samples < 1) throw std::invalid_argument("validate_norm: samples must be >= 1");
    const int d = spec.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> lam(-4.0, 4.0);

    ValidationReport rep;
    rep.zero_value = eval_norm(spec, VecD(d, 0.0));

    auto draw = [&] {
        VecD x(d);
        for (double& c : x) c = coord(rng);
        return x;
    };

    for (int i = 0; i < samples; ++i) {
        VecD x = draw(), y = draw();
        double nx = eval_norm(spec, x);
        if (nx <= 0.0) continue;  // origin-adjacent draw; positivity handled via zero_value
        double l = lam(rng);
        double h = std::abs(eval_norm(spec, scale(x, l)) - std::abs(l) * nx) / nx;
        double t = eval_norm(spec, add(x, y)) - nx - eval_norm(spec, y);
        double s = std::abs(eval_norm(spec, scale(x, -1.0)) - nx) / nx;
        rep.worst_homogeneity = std::max(rep.worst_homogeneity, h);
        rep.worst_triangle = std::max(rep.worst_triangle, t);
        rep.worst_symmetry = std::max(rep.worst_symmetry, s);
    }

    rep.passed = rep.worst_homogeneity <= tol && rep.worst_triangle <= tol &&
                 rep.worst_symmetry <= tol && rep.zero_value == 0.0;
    if (!rep.passed) {
        rep.note = "axiom violation beyond tolerance";
        if (rep.worst_homogeneity > tol) rep.note += " [homogeneity]";
        if (rep.worst_triangle > tol) rep.note += " [triangle]";
        if (rep.worst_symmetry > tol) rep.note += " [symmetry]";
        if (rep.zero_value != 0.0) rep.note += " [norm(0) != 0]";
    }
    return rep;
}

}  // namespace normdec
