#pragma once

#include <array>
#include <optional>
#include <vector>

#include "normdec/measure.hpp"
#include "normdec/rand_vectors.hpp"

namespace normdec {

struct HlawkaReport {
    double margin{0.0};  // LHS - RHS; negative = violation
    std::array<VecD, 3> triple;
};

/// ||x+y+z|| + ||x|| + ||y|| + ||z|| - ||x+y|| - ||y+z|| - ||z+x||.
HlawkaReport hlawka_margin(const NormSpec& norm, const VecD& x, const VecD& y, const VecD& z);

/// Exhaustive scan of triples with components in {-r..r}^d for the most
/// negative margin (lexicographic tie-break); nullopt when no strict
/// violation exists. eval_cap bounds the number of norm evaluations.
std::optional<HlawkaReport> hlawka_search(const NormSpec& norm, int d, int radius,
                                          long long eval_cap = 10000000);

struct KhinchinChain {
    double two_E_sq{0.0};        // 2 (E||S||)^2
    double improved_bound{0.0};  // (int sqrt(sum (x_i l)^2) mu(dl))^2
    double second_moment{0.0};   // E||S||^2
};

/// The chain 2(E||S||)^2 >= B >= E||S||^2 for S = sum eps_i x_i under a
/// planar norm with its explicit measure.
KhinchinChain khinchin_chain(const RepresentingMeasure& m, const RademacherInstance& inst,
                             const QuadratureOptions& opts = {});
KhinchinChain khinchin_chain(const NormSpec& spec2d, const RademacherInstance& inst,
                             const QuadratureOptions& opts = {});

/// E||X+Y|| - E||X-Y|| for iid X, Y; nonnegative for every planar norm.
double buja_margin(const NormSpec& norm2d, const DiscreteDistribution& dist);

struct CounterexampleRow {
    int d{0};
    Rational E_diff;
    Rational E_sum;
};

/// Johnson's constructions where E||X-Y|| > E||X+Y||: d=3 with the tilted
/// four-point distribution (21/16 vs 19/16), d in {4,5,6} uniform on the
/// basis (2(d-1)/d vs (d+1)/d). Exact rationals.
std::vector<CounterexampleRow> johnson_counterexamples();

}  // namespace normdec
