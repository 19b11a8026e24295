#include "normdec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace normdec {

namespace {

double lp_N(double p, double u) {
    double a = std::abs(u);
    if (a <= 1.0) return std::exp(std::log1p(std::pow(a, p)) / p);
    return a * std::exp(std::log1p(std::pow(a, -p)) / p);
}

double lp_dN(double p, double u) {
    if (u == 0.0) return 0.0;
    double a = std::abs(u);
    double d;
    if (a <= 1.0)
        d = std::pow(a, p - 1.0) * std::exp((1.0 / p - 1.0) * std::log1p(std::pow(a, p)));
    else
        d = std::exp(((1.0 - p) / p) * std::log1p(std::pow(a, -p)));
    return u > 0 ? d : -d;
}

// f(u) - u for the lp section, exact in the far field
double lp_gap(double p, double u) {
    double a = std::abs(u);
    if (a <= 1.0) return lp_N(p, u) - a;
    return a * std::expm1(std::log1p(std::pow(a, -p)) / p);
}

// One-sided difference quotient with two Richardson steps; first-order
// one-sided truncation terms h and h^2 are eliminated.
double one_sided_derivative(const std::function<double(double)>& f, double u, double h,
                            int side) {
    auto quot = [&](double step) { return side * (f(u + side * step) - f(u)) / step; };
    double d1 = quot(h), d2 = quot(h / 2.0), d4 = quot(h / 4.0);
    double r1 = 2.0 * d2 - d1;
    double r2 = 2.0 * d4 - d2;
    return (4.0 * r2 - r1) / 3.0;
}

double fd_step(double u) { return std::max(1e-6, 1e-8 * (1.0 + std::abs(u))); }

struct LadderLimit {
    double value{0.0};
    bool converged{false};
};

// Doubling ladder with Aitken delta-squared stabilization. Throws when the
// sequence blows up (the supplied k is not the asymptotic slope).
LadderLimit ladder_limit(const std::function<double(double)>& gap, double u0, double tol,
                         int max_steps) {
    double g0 = gap(u0), g1 = gap(2.0 * u0);
    const double scale0 = 1.0 + std::abs(g0);
    double u = 4.0 * u0;
    double aitken_prev = g1;
    bool have_prev_aitken = false;
    for (int step = 0; step < max_steps; ++step, u *= 2.0) {
        double g2 = gap(u);
        if (!std::isfinite(g2) || std::abs(g2) > 1e8 * scale0)
            throw std::runtime_error("ladder_limit: divergence (asymptotic slope mismatch)");
        double d1 = g1 - g0, d2 = g2 - g1;
        if (std::abs(d2) <= tol) return {g2, true};
        double denom = d2 - d1;
        if (denom != 0.0) {
            double aitken = g2 - d2 * d2 / denom;
            if (std::isfinite(aitken) && have_prev_aitken &&
                std::abs(aitken - aitken_prev) <= 0.25 * tol && std::abs(d2) < std::abs(d1))
                return {aitken, true};
            if (std::isfinite(aitken)) {
                aitken_prev = aitken;
                have_prev_aitken = true;
            }
        }
        g0 = g1;
        g1 = g2;
        if (u > 1e290) break;
    }
    return {g1, false};
}

}  // namespace

int ConvexProfile::pl_piece_leq(double u) const {
    return static_cast<int>(std::upper_bound(breakpoints.begin(), breakpoints.end(), u) -
                            breakpoints.begin());
}

int ConvexProfile::pl_piece_lt(double u) const {
    return static_cast<int>(std::lower_bound(breakpoints.begin(), breakpoints.end(), u) -
                            breakpoints.begin());
}

double ConvexProfile::N(double u) const {
    switch (kind) {
        case ProfileKind::PiecewiseLinear: {
            int i = pl_piece_leq(u);
            return pl_slopes[i] * u + pl_intercepts[i];
        }
        case ProfileKind::LpClosedForm:
            return lp_N(lp_p, u);
        case ProfileKind::Numeric:
            return gauge_eval({u, 1.0});
    }
    return 0.0;
}

double ConvexProfile::dN_plus(double u) const {
    switch (kind) {
        case ProfileKind::PiecewiseLinear:
            return pl_slopes[pl_piece_leq(u)];
        case ProfileKind::LpClosedForm:
            return lp_dN(lp_p, u);
        case ProfileKind::Numeric:
            return one_sided_derivative([this](double t) { return gauge_eval({t, 1.0}); }, u,
                                        fd_step(u), +1);
    }
    return 0.0;
}

double ConvexProfile::dN_minus(double u) const {
    switch (kind) {
        case ProfileKind::PiecewiseLinear:
            return pl_slopes[pl_piece_lt(u)];
        case ProfileKind::LpClosedForm:
            return lp_dN(lp_p, u);
        case ProfileKind::Numeric:
            return one_sided_derivative([this](double t) { return gauge_eval({t, 1.0}); }, u,
                                        fd_step(u), -1);
    }
    return 0.0;
}

double ConvexProfile::asymptotic_gap(double u, int sign) const {
    if (!(u > 0)) throw std::invalid_argument("asymptotic_gap: u must be positive");
    double w = sign > 0 ? u : -u;
    switch (kind) {
        case ProfileKind::LpClosedForm:
            return lp_gap(lp_p, w);
        case ProfileKind::PiecewiseLinear: {
            int i = sign > 0 ? pl_piece_leq(w) : pl_piece_lt(w);
            // N(w) - k|w| with slope/intercept arithmetic, no cancellation
            return (pl_slopes[i] - (sign > 0 ? k : -k)) * w + pl_intercepts[i];
        }
        case ProfileKind::Numeric:
            return gauge_eval({w, 1.0}) - k * u;
    }
    return 0.0;
}

double slope_limit_k(const NormSpec& spec) { return eval_norm(spec, Vec2{1.0, 0.0}); }

namespace {

// Upper envelope of the facet lines a*u + b: sort by slope, convex-hull-trick
// sweep. Returns the active lines and the crossing abscissae between them.
void envelope_of_lines(std::vector<std::pair<double, double>> lines,
                       std::vector<double>& slopes, std::vector<double>& intercepts,
                       std::vector<double>& breaks) {
    std::sort(lines.begin(), lines.end());
    // same slope: only the largest intercept can be active
    std::vector<std::pair<double, double>> uniq;
    for (auto& ln : lines) {
        if (!uniq.empty() && ln.first == uniq.back().first) {
            uniq.back().second = std::max(uniq.back().second, ln.second);
        } else if (!uniq.empty() && ln.first - uniq.back().first < 1e-14) {
            uniq.back() = {std::max(uniq.back().first, ln.first),
                           std::max(uniq.back().second, ln.second)};
        } else {
            uniq.push_back(ln);
        }
    }
    auto cross_at = [](const std::pair<double, double>& L, const std::pair<double, double>& R) {
        return (L.second - R.second) / (R.first - L.first);
    };
    std::vector<std::pair<double, double>> stack;
    for (auto& ln : uniq) {
        while (stack.size() >= 2 &&
               cross_at(stack[stack.size() - 2], ln) <= cross_at(stack[stack.size() - 2],
                                                                 stack.back()))
            stack.pop_back();
        stack.push_back(ln);
    }
    slopes.clear();
    intercepts.clear();
    breaks.clear();
    for (std::size_t i = 0; i < stack.size(); ++i) {
        slopes.push_back(stack[i].first);
        intercepts.push_back(stack[i].second);
        if (i + 1 < stack.size()) breaks.push_back(cross_at(stack[i], stack[i + 1]));
    }
}

ConvexProfile make_pl_profile(const NormSpec& spec,
                              std::vector<std::pair<double, double>> lines) {
    ConvexProfile p;
    p.norm = spec;
    p.kind = ProfileKind::PiecewiseLinear;
    envelope_of_lines(std::move(lines), p.pl_slopes, p.pl_intercepts, p.breakpoints);
    p.k = slope_limit_k(spec);
    p.d_plus = p.pl_intercepts.back();
    p.d_minus = p.pl_intercepts.front();
    p.c = p.d_plus + p.d_minus;
    return p;
}

void probe_convexity(const std::function<double(double)>& N, const ProfileOptions& opts) {
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> U(-50.0, 50.0);
    for (int i = 0; i < opts.convexity_probe_samples; ++i) {
        double a = U(rng), b = U(rng), cpt = U(rng);
        double u1 = std::min({a, b, cpt}), u3 = std::max({a, b, cpt});
        double u2 = a + b + cpt - u1 - u3;
        if (u3 - u1 < 1e-9 || u2 - u1 < 1e-12 || u3 - u2 < 1e-12) continue;
        double lam = (u3 - u2) / (u3 - u1);
        double chord = lam * N(u1) + (1.0 - lam) * N(u3);
        double scale = std::max(1.0, std::abs(chord));
        if (N(u2) > chord + opts.convexity_tol * scale)
            throw std::runtime_error("profile_from_norm: gauge evaluator is not convex");
    }
}

}  // namespace

ConvexProfile profile_from_norm(const NormSpec& spec, const ProfileOptions& opts) {
    const int d = spec.dim();
    if (d != 2)
        throw std::invalid_argument("profile_from_norm: the decomposition needs a norm on R^2");

    if (const auto* l1 = std::get_if<L1Norm>(&spec.variant); l1) {
        return make_pl_profile(spec, {{-1.0, 1.0}, {1.0, 1.0}});  // N(u) = |u| + 1
    }
    if (const auto* lp = std::get_if<LpNorm>(&spec.variant); lp) {
        if (std::isinf(lp->p)) {
            // N(u) = max(|u|, 1)
            return make_pl_profile(spec, {{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
        }
        ConvexProfile p;
        p.norm = spec;
        p.kind = ProfileKind::LpClosedForm;
        p.lp_p = lp->p;
        p.k = slope_limit_k(spec);
        auto lim = ladder_limit([&](double u) { return p.asymptotic_gap(u, +1); },
                                opts.ladder_start, opts.c_tol, opts.max_doublings);
        p.d_plus = lim.value;
        p.d_minus = lim.value;  // lp section is even in u
        p.c = p.d_plus + p.d_minus;
        if (p.c < 0.0) p.c = 0.0;
        return p;
    }
    if (const auto* poly = std::get_if<PolygonalNorm>(&spec.variant); poly) {
        std::vector<std::pair<double, double>> lines;
        lines.reserve(poly->facets.size());
        for (const Functional2& f : poly->facets) lines.push_back({f.a, f.b});
        return make_pl_profile(spec, std::move(lines));
    }
    if (std::get_if<JohnsonNorm>(&spec.variant))
        throw std::invalid_argument("profile_from_norm: Johnson norms live on R^d, d >= 3");

    const auto& gauge = std::get<GaugeNorm>(spec.variant);
    ConvexProfile p;
    p.norm = spec;
    p.kind = ProfileKind::Numeric;
    p.gauge_eval = gauge.eval;
    probe_convexity([&](double u) { return p.N(u); }, opts);
    p.k = slope_limit_k(spec);

    // Breakpoint scan. A cell's N' rise mixes density mass (vanishing with
    // the width) and atom jumps (persisting), so descend into the
    // larger-rise half until either the rise drops below the threshold
    // (smooth) or the width floor is hit (candidate kink), then confirm by a
    // one-sided jump test and recurse on the flanks for further atoms.
    const double tau = opts.kink_threshold_rel * p.k;
    // A discarded half re-enters the hunt only above this rise; smaller
    // rises are absorbed into the reconstructed density, which keeps the
    // branching bounded on smooth profiles.
    const double spawn = std::max(tau, 0.02 * p.k);
    const double scan = 64.0;
    std::vector<double> found;
    std::function<void(double, double, double, double, int)> hunt =
        [&](double a, double da, double b, double db, int depth) {
            if (depth > 60) return;
            while (db - da > tau) {
                if (b - a < 1e-9 * (1.0 + std::abs(a))) {
                    double best_u = 0.5 * (a + b), best_jump = 0.0;
                    for (double off : {0.0, -1e-6, 1e-6, -4e-6, 4e-6}) {
                        double u = 0.5 * (a + b) + off * (1.0 + std::abs(a));
                        double jump = p.dN_plus(u) - p.dN_minus(u);
                        if (jump > best_jump) {
                            best_jump = jump;
                            best_u = u;
                        }
                    }
                    if (best_jump > tau) found.push_back(best_u);
                    return;
                }
                double m = 0.5 * (a + b);
                double dm = p.dN(m);
                if (dm - da >= db - dm) {
                    if (db - dm > spawn) hunt(m, dm, b, db, depth + 1);
                    b = m;
                    db = dm;
                } else {
                    if (dm - da > spawn) hunt(a, da, m, dm, depth + 1);
                    a = m;
                    da = dm;
                }
            }
        };
    const int ncells = 256;
    double prev_u = -scan, prev_d = p.dN(prev_u);
    for (int i = 1; i <= ncells; ++i) {
        double u = -scan + 2.0 * scan * i / ncells;
        double du = p.dN(u);
        if (du - prev_d > tau) hunt(prev_u, prev_d, u, du, 0);
        prev_u = u;
        prev_d = du;
    }
    std::sort(found.begin(), found.end());
    for (double u : found) {
        if (!p.breakpoints.empty() &&
            u - p.breakpoints.back() <= 1e-6 * (1.0 + std::abs(u)))
            continue;
        p.breakpoints.push_back(u);
    }

    auto lim_p = ladder_limit([&](double u) { return p.asymptotic_gap(u, +1); },
                              opts.ladder_start, std::max(opts.c_tol, 1e-8),
                              opts.max_doublings);
    auto lim_m = ladder_limit([&](double u) { return p.asymptotic_gap(u, -1); },
                              opts.ladder_start, std::max(opts.c_tol, 1e-8),
                              opts.max_doublings);
    if (!lim_p.converged || !lim_m.converged)
        throw std::runtime_error("profile_from_norm: asymptotic limits did not stabilize");
    p.d_plus = lim_p.value;
    p.d_minus = lim_m.value;
    p.c = p.d_plus + p.d_minus;
    if (p.c < 0.0 && p.c > -1e-6 * (1.0 + p.k)) p.c = 0.0;
    if (p.c < 0.0) throw std::runtime_error("profile_from_norm: negative c (not a norm?)");
    return p;
}

double constant_c(const ConvexProfile& profile, const ProfileOptions& opts) {
    auto second_diff = [&](double u) {
        // ||(u,1)|| - 2||(u,0)|| + ||(u,-1)|| through the stable gap evaluators
        return profile.asymptotic_gap(u, +1) + profile.asymptotic_gap(u, -1);
    };
    if (profile.kind == ProfileKind::PiecewiseLinear) {
        double bmax = 0.0;
        for (double b : profile.breakpoints) bmax = std::max(bmax, std::abs(b));
        return second_diff(10.0 * (bmax + 1.0));  // constant beyond the last kink
    }
    auto lim = ladder_limit(second_diff, opts.ladder_start, opts.c_tol, opts.max_doublings);
    if (!lim.converged)
        throw std::runtime_error("constant_c: ladder did not converge (non-norm gauge?)");
    return lim.value < 0.0 && lim.value > -opts.c_tol ? 0.0 : lim.value;
}

std::pair<double, double> lemma_limits(const std::function<double(double)>& f, double k,
                                       const ProfileOptions& opts) {
    auto lim_p = ladder_limit([&](double u) { return f(u) - k * u; }, opts.ladder_start,
                              opts.c_tol, opts.max_doublings);
    auto lim_m = ladder_limit([&](double u) { return f(-u) - k * u; }, opts.ladder_start,
                              opts.c_tol, opts.max_doublings);
    if (!lim_p.converged || !lim_m.converged)
        throw std::runtime_error("lemma_limits: no finite limit at the supplied slope");
    return {lim_p.value, lim_m.value};
}

}  // namespace normdec
