#pragma once

#include <memory>
#include <span>
#include <vector>

#include "normdec/measure.hpp"
#include "normdec/profile.hpp"
#include "normdec/quadrature.hpp"

namespace normdec {

/// F = 1/2 + N'/(2k) with the regularized N'; satisfies
/// 2F(u) = F(u+) + F(u-) at every jump.
class RegularizedCdf {
public:
    double k{1.0};
    std::shared_ptr<const ConvexProfile> profile;

    struct JumpInfo {
        double t;
        double cum_before;  // F(t-)
        double cum_after;   // F(t+)
    };
    std::vector<JumpInfo> jumps;  // empty for continuous cdfs

    // numeric profiles carry a monotone (u, F) table for fast inversion
    std::vector<double> tab_u, tab_F;

    double F(double u) const;
    ProfileKind kind() const { return profile->kind; }
};

RegularizedCdf cdf_from_profile(const ConvexProfile& profile);

/// Left-continuous generalized inverse inf{u : F(u) >= s}, 0 < s < 1.
double quantile(const RegularizedCdf& cdf, double s);

/// The L1(0,1) pair: xi = 2k on (0,1/2) and 0 after; eta = -2k F^{-1}(2s) on
/// (0,1/2) and c after. The 2k factor is required for (u,v) -> u xi + v eta
/// to be an isometry; scaled=false gives the unscaled variant, kept only to
/// document its failure (l1 comes out as |u|/2 + |v|).
struct EmbeddingPair {
    double k{1.0};
    double c{0.0};
    bool scaled{true};
    RegularizedCdf cdf;

    double amplitude() const { return scaled ? 2.0 * k : 1.0; }
    double xi(double s) const;
    double eta(double s) const;
};

EmbeddingPair embedding_pair(const ConvexProfile& profile, bool scaled = true);

/// c|v|/2 + (1/2) int |u - tv| dN'(t); equals ||(u,v)|| up to quadrature.
double eval_decomposition(const RepresentingMeasure& m, double u, double v,
                          const QuadratureOptions& opts = {});

/// int_0^1 |u xi(s) + v eta(s)| ds, exact for atomic cdfs, kink-aware
/// quadrature otherwise (the single sign change is located by bisection).
double eval_embedding(const EmbeddingPair& pair, double u, double v,
                      const QuadratureOptions& opts = {});

struct ResidualReport {
    double max_residual_decomposition{0.0};
    double max_residual_embedding{0.0};
};

ResidualReport residual_scan(const NormSpec& spec, std::span<const Vec2> grid,
                             const QuadratureOptions& opts = {});

/// Variant over prebuilt objects, for callers that reuse them.
ResidualReport residual_scan(const NormSpec& spec, const RepresentingMeasure& m,
                             const EmbeddingPair& pair, std::span<const Vec2> grid,
                             const QuadratureOptions& opts = {});

/// Uniform n x n grid on [-3,3]^2 (the standard verification grid).
std::vector<Vec2> square_grid(int n, double extent = 3.0);

}  // namespace normdec
