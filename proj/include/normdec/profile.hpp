#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "normdec/norm.hpp"

namespace normdec {

enum class ProfileKind { PiecewiseLinear, LpClosedForm, Numeric };

struct ProfileOptions {
    double c_tol{1e-10};          // ladder stabilization tolerance for c, d+-
    double ladder_start{100.0};   // initial U of the doubling ladder
    int max_doublings{200};
    double kink_threshold_rel{1e-5};  // N'+ - N'- > this*k flags a breakpoint
    int convexity_probe_samples{200};
    double convexity_tol{1e-9};
};

/// The section N(u) = ||(u,1)|| of a planar norm, with one-sided and
/// regularized derivatives, asymptotic slope k = ||(1,0)|| and the
/// second-difference constant c. Immutable once built.
class ConvexProfile {
public:
    NormSpec norm;
    ProfileKind kind{ProfileKind::PiecewiseLinear};
    std::vector<double> breakpoints;  // sorted kink locations of N
    double k{1.0};
    double c{0.0};
    double d_plus{0.0};
    double d_minus{0.0};

    double N(double u) const;
    double dN_plus(double u) const;
    double dN_minus(double u) const;
    /// regularized derivative (N'+ + N'-)/2
    double dN(double u) const { return 0.5 * (dN_plus(u) + dN_minus(u)); }

    /// N(u) - k*u for sign=+1, N(-u) - k*u for sign=-1 (u > 0), computed
    /// without far-field cancellation where the kind allows it.
    double asymptotic_gap(double u, int sign) const;

    // piecewise-linear representation: breakpoints.size()+1 pieces
    std::vector<double> pl_slopes;
    std::vector<double> pl_intercepts;
    // closed-form lp
    double lp_p{0.0};
    // numeric (black-box gauge)
    std::function<double(Vec2)> gauge_eval;

private:
    int pl_piece_leq(double u) const;   // #breakpoints <= u
    int pl_piece_lt(double u) const;    // #breakpoints < u
};

ConvexProfile profile_from_norm(const NormSpec& spec, const ProfileOptions& opts = {});

/// k = ||(1,0)||, Eq-independent of the profile machinery.
double slope_limit_k(const NormSpec& spec);

/// c = lim (||(u,1)|| - 2||(u,0)|| + ||(u,-1)||); exact beyond the last
/// breakpoint for piecewise-linear profiles, otherwise a doubling ladder with
/// Aitken stabilization. Throws on non-convergence (non-norm gauge).
double constant_c(const ConvexProfile& profile, const ProfileOptions& opts = {});

/// Finite limits d+ = lim f(u)-ku, d- = lim_{u->-inf} f(u)+ku of a convex f.
/// Throws std::runtime_error when the ladder detects divergence (wrong k).
std::pair<double, double> lemma_limits(const std::function<double(double)>& f, double k,
                                       const ProfileOptions& opts = {});

}  // namespace normdec
