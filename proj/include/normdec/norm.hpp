#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "normdec/vec.hpp"

namespace normdec {

/// lp norm, p in (1, inf]. p == infinity() selects the sup norm.
/// dim defaults to 2 (the decomposition plane); d >= 2 is accepted so the
/// Hlawka counterexamples can evaluate sup/Euclidean norms on R^3.
struct LpNorm {
    double p{2.0};
    int dim{2};
};

struct L1Norm {
    int dim{2};
};

/// Norm whose unit ball is a centrally symmetric convex polygon.
/// Construct through make_polygonal(); evaluation uses the facet functionals
/// n_k (outward, scaled so facets lie at level 1): ||x|| = max_k x.n_k.
struct PolygonalNorm {
    std::vector<Vec2> hull;             // CCW, strictly convex, symmetric
    std::vector<Functional2> facets;    // one per hull edge
};

/// max{|x_i| v |x_i - x_j|} on R^d, d >= 3.
struct JohnsonNorm {
    int d{3};
};

/// Black-box gauge on R^2. The evaluator is validated, not trusted; the
/// declared Lipschitz bound sizes finite-difference steps downstream.
struct GaugeNorm {
    std::function<double(Vec2)> eval;
    double lipschitz_bound{1.0};
};

struct NormSpec {
    std::variant<LpNorm, L1Norm, PolygonalNorm, JohnsonNorm, GaugeNorm> variant;

    int dim() const;
    std::string name() const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

NormSpec make_lp(double p, int dim = 2);
NormSpec make_l1(int dim = 2);
NormSpec make_linf(int dim = 2);
NormSpec make_johnson(int d);
NormSpec make_gauge(std::function<double(Vec2)> eval, double lipschitz_bound);

/// Preprocesses user vertices: dedup within 1e-12, symmetrize (appending -v,
/// so half the ball is enough), angular sort, strictly convex hull.
/// Throws std::invalid_argument when the hull is degenerate.
NormSpec make_polygonal(const std::vector<Vec2>& vertices);

double eval_norm(const NormSpec& spec, Vec2 x);
double eval_norm(const NormSpec& spec, const VecD& x);

double johnson_norm(int d, const VecD& x);

struct ValidationReport {
    bool passed{false};
    double worst_homogeneity{0.0};   // max |(||λx|| - |λ| ||x||)| / ||x||
    double worst_triangle{0.0};      // max (||x+y|| - ||x|| - ||y||)
    double worst_symmetry{0.0};      // max |(||-x|| - ||x||)| / ||x||
    double zero_value{0.0};          // ||0||
    std::string note;
};

/// Spot-checks the norm axioms on `samples` random points (deterministic in
/// `seed`). Failures are reported, never thrown.
ValidationReport validate_norm(const NormSpec& spec, int samples, double tol,
                               unsigned long long seed = 0);

}  // namespace normdec
