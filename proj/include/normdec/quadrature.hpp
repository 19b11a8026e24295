#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace normdec {

struct RepresentingMeasure;  // measure.hpp

struct QuadratureOptions {
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    int max_depth{60};
    double truncation_tail_tol{1e-12};

    void validate() const;
};

struct IntegralResult {
    double value{0.0};
    double error_estimate{0.0};  // achieved bound, reported even past max_depth
    long evals{0};
    int panels{0};
    bool converged{false};
};

/// Adaptive Gauss-Kronrod (G7/K15) over [a,b], pre-split at every kink in
/// (a,b). Points in `singular` additionally get geometric panel grading on
/// both sides, which restores convergence for integrable endpoint-type
/// singularities (|t-s|^-alpha, alpha < 1).
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         std::span<const double> kinks, const QuadratureOptions& opts = {},
                         std::span<const double> singular = {});

/// Integral over (0,inf) (sign=+1) or (-inf,0) (sign=-1) for integrands with
/// |f(t)| <= tail_coef/t^2 at large |t|; truncates where the tail bound drops
/// below truncation_tail_tol * |partial result| and checks the bound by
/// sampling. Set tan_transform to map the half line onto (0, pi/2) instead.
IntegralResult integrate_halfline(const std::function<double(double)>& f, int sign,
                                  double tail_coef, const QuadratureOptions& opts = {},
                                  bool tan_transform = false);

/// Integrates g against the measure dN': sum of atom masses times g plus the
/// density integral, split at g_kinks, the density's own kinks, and the
/// support edges. g must be continuous at atom locations; declared
/// discontinuity points of g colliding with an atom raise invalid_argument.
/// g_growth_degree bounds |g(t)| <= A*(1+|t|)^deg for the tail truncation.
IntegralResult stieltjes_integrate(const RepresentingMeasure& m,
                                   const std::function<double(double)>& g,
                                   std::span<const double> g_kinks,
                                   const QuadratureOptions& opts = {},
                                   int g_growth_degree = 1,
                                   std::span<const double> g_discontinuities = {});

/// Nodes and weights for ∫ f(x) e^{-x^2} dx, exact for degree <= 2n-1.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

}  // namespace normdec
