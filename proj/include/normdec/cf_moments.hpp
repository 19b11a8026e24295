#pragma once

#include <complex>
#include <span>
#include <vector>

#include "normdec/measure.hpp"
#include "normdec/rand_vectors.hpp"

namespace normdec {

/// Characteristic function of a finitely supported planar random vector,
/// phi(l) = sum_a p_a exp(i x_a.l).
struct CharFn {
    DiscreteDistribution dist;  // d = 2

    std::complex<double> operator()(Functional2 l) const;
    void validate() const;
};

struct CfOptions {
    QuadratureOptions inner{1e-8, 1e-8, 60, 1e-12};  // t-integral per functional
    QuadratureOptions outer{1e-8, 1e-8, 60, 1e-9};   // pushforward over mu
    double t_scale_floor{1e4};   // truncation T = t_scale_floor / scale(l)
    int density_panels_core{8};  // fixed-rule panels on [0,1] per side (moments)
    double moment_tail_tol{1e-6};
    long axis_node_guard{2000000};
};

/// E||X|| through the characteristic function, Eq-10 style: the outer
/// mu-integral via the pushforward, the inner t-integral adaptive with an
/// integration-by-parts tail. The integrand 1 - Re phi is checked to stay
/// within [0,2].
double expected_norm_via_cf(const RepresentingMeasure& m, const CharFn& cf,
                            const CfOptions& opts = {});

/// E||X||^j for j in {1,2,3} by the j-fold product rule over (V* x (0,inf))^j
/// with the inner expectation taken exactly over the support. The product
/// structure is evaluated factorized per support point, which is arithmetic
/// reassociation of the same tensor rule. j = 1 reduces to the adaptive
/// Eq-10 path.
double moment_via_cf(const RepresentingMeasure& m, const CharFn& cf, int j,
                     const CfOptions& opts = {});

/// sum over ordered pairs (A,B) of disjoint subsets of {1..j} of
/// (-1/2)^{|A u B|} cos(sum_A theta - sum_B theta); equals prod (1-cos theta_a).
double ab_expansion(std::span<const double> thetas);

/// Pointwise product of the factors; the underlying convolution support is
/// materialized while it stays within 10^4 points.
CharFn cf_of_sum(const std::vector<CharFn>& cfs);

/// Exact finite-support expectation sum p_a ||x_a||, the oracle Eq-10 is
/// checked against.
double expected_norm_exact(const NormSpec& norm, const DiscreteDistribution& dist, int j = 1);

}  // namespace normdec
