#include "normdec/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "normdec/summation.hpp"

namespace normdec {

double RegularizedCdf::F(double u) const { return 0.5 + profile->dN(u) / (2.0 * k); }

namespace {

// graded (u, F) table for numeric profiles: refine while a cell's F-rise is
// coarse, so the linear inverse stays within the reconstruction accuracy
void build_numeric_table(const ConvexProfile& p, std::vector<double>& tu,
                         std::vector<double>& tF) {
    double T = 8.0;
    for (double t : p.breakpoints) T = std::max(T, 2.0 * std::abs(t) + 8.0);
    auto Feval = [&](double u) { return 0.5 + p.dN(u) / (2.0 * p.k); };
    while (1.0 - Feval(T) > 1e-9 && T < 1e8) T *= 2.0;
    while (Feval(-T) > 1e-9 && T > -1e8) T *= 2.0;

    std::vector<double> xs{-T, T}, ys{Feval(-T), Feval(T)};
    for (bool refined = true; refined && xs.size() < 4000;) {
        refined = false;
        std::vector<double> nx, ny;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            nx.push_back(xs[i]);
            ny.push_back(ys[i]);
            double w = xs[i + 1] - xs[i];
            bool coarse =
                (ys[i + 1] - ys[i] > 1.0 / 512.0 && w > 1e-7 * (1.0 + std::abs(xs[i]))) ||
                w > 0.35 * (1.0 + std::abs(xs[i]) + std::abs(xs[i + 1]));
            if (coarse) {
                double mid = 0.5 * (xs[i] + xs[i + 1]);
                nx.push_back(mid);
                ny.push_back(Feval(mid));
                refined = true;
            }
        }
        nx.push_back(xs.back());
        ny.push_back(ys.back());
        xs = std::move(nx);
        ys = std::move(ny);
    }
    for (std::size_t i = 1; i < ys.size(); ++i) ys[i] = std::max(ys[i], ys[i - 1]);
    tu = std::move(xs);
    tF = std::move(ys);
}

}  // namespace

RegularizedCdf cdf_from_profile(const ConvexProfile& profile) {
    RegularizedCdf cdf;
    cdf.k = profile.k;
    cdf.profile = std::make_shared<ConvexProfile>(profile);

    if (profile.kind == ProfileKind::PiecewiseLinear) {
        double cum = 0.0;
        for (std::size_t i = 0; i < profile.breakpoints.size(); ++i) {
            double jump = profile.pl_slopes[i + 1] - profile.pl_slopes[i];
            double before = 0.5 + profile.pl_slopes[i] / (2.0 * profile.k);
            double after = 0.5 + profile.pl_slopes[i + 1] / (2.0 * profile.k);
            cdf.jumps.push_back({profile.breakpoints[i], before, after});
            cum = after;
        }
        (void)cum;
    } else if (profile.kind == ProfileKind::Numeric) {
        build_numeric_table(profile, cdf.tab_u, cdf.tab_F);
        for (double t : profile.breakpoints) {
            double before = 0.5 + profile.dN_minus(t) / (2.0 * profile.k);
            double after = 0.5 + profile.dN_plus(t) / (2.0 * profile.k);
            cdf.jumps.push_back({t, before, after});
        }
    }
    return cdf;
}

double quantile(const RegularizedCdf& cdf, double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("quantile: s must lie in (0,1)");

    switch (cdf.kind()) {
        case ProfileKind::PiecewiseLinear: {
            // purely atomic: F^{-1}(s) = t_i for s in (F(t_i-), F(t_i+)]
            for (const auto& j : cdf.jumps)
                if (s <= j.cum_after + 1e-15) return j.t;
            return cdf.jumps.back().t;  // s within rounding of 1
        }
        case ProfileKind::LpClosedForm: {
            const double p = cdf.profile->lp_p;
            double w = 2.0 * s - 1.0;
            if (w == 0.0) return 0.0;
            double mexp = std::pow(std::abs(w), p / (p - 1.0));
            double t = std::pow(mexp / (1.0 - mexp), 1.0 / p);
            return w > 0 ? t : -t;
        }
        case ProfileKind::Numeric: {
            const auto& tu = cdf.tab_u;
            const auto& tF = cdf.tab_F;
            auto it = std::lower_bound(tF.begin(), tF.end(), s);
            if (it == tF.begin()) return tu.front();
            if (it == tF.end()) return tu.back();
            std::size_t i = static_cast<std::size_t>(it - tF.begin());
            double f0 = tF[i - 1], f1 = tF[i];
            if (f1 <= f0) return tu[i - 1];
            double lam = (s - f0) / (f1 - f0);
            return tu[i - 1] + lam * (tu[i] - tu[i - 1]);
        }
    }
    return 0.0;
}

EmbeddingPair embedding_pair(const ConvexProfile& profile, bool scaled) {
    EmbeddingPair pair;
    pair.k = profile.k;
    pair.c = profile.c;
    pair.scaled = scaled;
    pair.cdf = cdf_from_profile(profile);
    return pair;
}

double EmbeddingPair::xi(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("xi: s must lie in (0,1)");
    return s < 0.5 ? amplitude() : 0.0;
}

double EmbeddingPair::eta(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("eta: s must lie in (0,1)");
    return s < 0.5 ? -amplitude() * quantile(cdf, 2.0 * s) : c;
}

double eval_decomposition(const RepresentingMeasure& m, double u, double v,
                          const QuadratureOptions& opts) {
    if (u == 0.0 && v == 0.0) return 0.0;
    std::vector<double> kinks;
    if (v != 0.0) kinks.push_back(u / v);
    IntegralResult integral = stieltjes_integrate(
        m, [&](double t) { return std::abs(u - t * v); }, kinks, opts, v != 0.0 ? 1 : 0);
    return 0.5 * m.c * std::abs(v) + 0.5 * integral.value;
}

double eval_embedding(const EmbeddingPair& pair, double u, double v,
                      const QuadratureOptions& opts) {
    if (u == 0.0 && v == 0.0) return 0.0;
    const double A = pair.amplitude();
    const double tail = 0.5 * std::abs(v * pair.c);  // the [1/2,1) piece

    if (pair.cdf.kind() == ProfileKind::PiecewiseLinear) {
        CompensatedSum s;
        for (const auto& j : pair.cdf.jumps)
            s.add((j.cum_after - j.cum_before) * std::abs(u - j.t * v));
        return 0.5 * A * s.value() + tail;
    }

    // continuous part: |A| |u - v F^{-1}(2s)| over (0,1/2); integrable
    // endpoint blow-ups of F^{-1} get graded panels, the single interior
    // sign change is bisected to machine resolution
    auto h = [&](double s) { return u - v * quantile(pair.cdf, 2.0 * s); };
    std::vector<double> kinks;
    if (v != 0.0) {
        double lo = 1e-12, hi = 0.5 - 1e-12;
        double hlo = h(lo), hhi = h(hi);
        if ((hlo > 0) != (hhi > 0)) {
            for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi);
                double hm = h(mid);
                if ((hm > 0) == (hlo > 0)) {
                    lo = mid;
                    hlo = hm;
                } else {
                    hi = mid;
                }
            }
            kinks.push_back(0.5 * (lo + hi));
        }
    }
    const double singular[] = {0.0, 0.5};
    IntegralResult integral = integrate([&](double s) { return std::abs(h(s)); }, 0.0, 0.5,
                                        kinks, opts, singular);
    return A * integral.value + tail;
}

ResidualReport residual_scan(const NormSpec& spec, const RepresentingMeasure& m,
                             const EmbeddingPair& pair, std::span<const Vec2> grid,
                             const QuadratureOptions& opts) {
    if (grid.empty()) throw std::invalid_argument("residual_scan: empty grid");
    ResidualReport rep;
    for (Vec2 x : grid) {
        double n = eval_norm(spec, x);
        rep.max_residual_decomposition =
            std::max(rep.max_residual_decomposition,
                     std::abs(n - eval_decomposition(m, x.u, x.v, opts)));
        rep.max_residual_embedding = std::max(
            rep.max_residual_embedding, std::abs(n - eval_embedding(pair, x.u, x.v, opts)));
    }
    return rep;
}

ResidualReport residual_scan(const NormSpec& spec, std::span<const Vec2> grid,
                             const QuadratureOptions& opts) {
    ConvexProfile profile = profile_from_norm(spec);
    RepresentingMeasure m = measure_from_profile(profile);
    EmbeddingPair pair = embedding_pair(profile);
    return residual_scan(spec, m, pair, grid, opts);
}

std::vector<Vec2> square_grid(int n, double extent) {
    if (n < 2) throw std::invalid_argument("square_grid: n >= 2");
    std::vector<Vec2> g;
    g.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.push_back({-extent + 2.0 * extent * i / (n - 1),
                         -extent + 2.0 * extent * j / (n - 1)});
    return g;
}

}  // namespace normdec
