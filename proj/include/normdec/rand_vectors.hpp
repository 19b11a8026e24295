#pragma once

#include <vector>

#include "normdec/norm.hpp"
#include "normdec/rational.hpp"
#include "normdec/vec.hpp"

namespace normdec {

/// Finitely supported random vector with exact weights.
struct DiscreteDistribution {
    std::vector<VecD> support;  // distinct points, common dimension d
    std::vector<double> probs;  // positive, sum to 1 within 1e-12

    int dim() const;
    void validate() const;
};

struct RademacherInstance {
    std::vector<VecD> vectors;  // x_1..x_n, common dimension
    void validate() const;      // 1 <= n <= 24 (enumeration guard)
};

/// Exact E||sum eps_i x_i||^j over all 2^n sign patterns (Gray-code order,
/// one coordinate flip per step).
double rademacher_moment(const NormSpec& norm, const RademacherInstance& inst, int j);

/// Exact (E||X - Y||, E||X + Y||) for iid X, Y ~ dist.
std::pair<double, double> pairwise_expectations(const NormSpec& norm,
                                                const DiscreteDistribution& dist);

/// Exact-rational pairwise expectations under the Johnson norm; support and
/// probabilities must be rational.
std::pair<Rational, Rational> pairwise_expectations_rational(
    int d, const std::vector<std::vector<Rational>>& support,
    const std::vector<Rational>& probs);

/// E|X+Y| - E|X-Y| - 2 int_0^inf [P(X>r) - P(X<-r)]^2 dr for a 1-D
/// distribution; the integrand is piecewise constant, so the integral is an
/// exact finite sum and the residual should vanish.
double one_dim_identity_residual(const DiscreteDistribution& dist);

}  // namespace normdec
