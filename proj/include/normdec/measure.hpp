#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "normdec/norm.hpp"
#include "normdec/profile.hpp"
#include "normdec/quadrature.hpp"

namespace normdec {

struct Atom {
    double t;
    double mass;  // N'+(t) - N'-(t) > 0
};

/// rho(t) <= coef * |t|^{-exponent} for |t| >= valid_from.
struct TailEnvelope {
    double coef{0.0};
    double exponent{0.0};
    double valid_from{1.0};
};

struct DensitySpec {
    std::function<double(double)> rho;
    double t_lo{-kInf};
    double t_hi{kInf};
    TailEnvelope envelope;                 // required when the window is infinite
    std::vector<double> kinks;             // plain quadrature split points
    std::vector<double> singular_points;   // integrable singularities (graded panels)
};

/// The measure dN' of the decomposition plus the constant c: atoms at jumps
/// of N', a density on the smooth part. Masses are stored raw; the 1/2
/// factors of the decomposition and of the mu-pushforward live in the
/// consuming operations.
struct RepresentingMeasure {
    std::vector<Atom> atoms;               // strictly increasing in t
    std::optional<DensitySpec> density;
    double c{0.0};
    double k{1.0};
    NormSpec source;
};

struct MeasureOptions {
    QuadratureOptions quad{};
    double atom_threshold_rel{1e-5};   // numeric profiles: jump > this*k is an atom
    double window_mass_tol{1e-10};     // numeric window: 2k - mass_inside <= this*k
    double density_neg_tol{1e-8};      // reconstructed density below -this errors out
};

RepresentingMeasure measure_from_profile(const ConvexProfile& profile,
                                         const MeasureOptions& opts = {});

/// (p-1) |t|^{p-2} (|t|^p + 1)^{1/p-2}, the dN' density of the lp norm,
/// p in (1, inf). Scaled so the decomposition's own 1/2 reproduces the norm.
double lp_density(double p, double t);

struct MassReport {
    double total_mass_residual{0.0};   // |int dN' - 2k|
    double first_moment_residual{0.0}; // |int |t| dN' - (2||(0,1)|| - c)|
};

MassReport mass_checks(const RepresentingMeasure& m, const QuadratureOptions& opts = {});

/// Integral of g over the representing measure mu on the dual plane:
/// (1/2) [ c g((0,1)) + int g((1,-t)) dN'(t) ]. g_kinks_in_t are the kink
/// locations of t -> g((1,-t)); growth_degree bounds its tail growth.
double functional_pushforward(const RepresentingMeasure& m,
                              const std::function<double(Functional2)>& g,
                              std::span<const double> g_kinks_in_t,
                              const QuadratureOptions& opts = {}, int growth_degree = 1);

/// |sqrt(pi/2) * int |x.t| gamma_d(dt) - ||x||_2| with the inner axis (the
/// largest |x_i|) integrated in closed form and the remaining axes by tensor
/// Gauss-Hermite of the given order. d <= 3 (cost guard).
double euclidean_identity_residual(int d, const VecD& x, int hermite_order,
                                   bool rotation_fast_path = false);

}  // namespace normdec
