#include "normdec/cf_moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "normdec/summation.hpp"

namespace normdec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 1 - cos(z) without cancellation
double one_minus_cos(double z) {
    double s = std::sin(0.5 * z);
    return 2.0 * s * s;
}

// int_T^inf (1-cos(ty))/t^2 dt by two integration-by-parts pairs;
// remainder <= 24|y|/z^5, so callers keep z = T|y| >= 64
double tail_series(double y, double T) {
    y = std::abs(y);
    const double z = T * y;
    const double s = std::sin(z), c = std::cos(z);
    const double z2 = z * z;
    return 1.0 / T + y * (s / z2 - 2.0 * c / (z2 * z) - 6.0 * s / (z2 * z2) +
                          24.0 * c / (z2 * z2 * z));
}

// full tail beyond T for one cosine term; honest top-up integration when the
// asymptotic series is not yet valid at T
double tail_beyond(double y, double T, const QuadratureOptions& inner, long& evals) {
    y = std::abs(y);
    if (y == 0.0) return 0.0;
    const double z0 = 64.0;
    if (T * y >= z0) return tail_series(y, T);
    const double T2 = z0 / y;
    IntegralResult r = integrate(
        [y](double t) { return one_minus_cos(t * y) / (t * t); }, T, T2, {}, inner);
    evals += r.evals;
    return r.value + tail_series(y, T2);
}

// I(l) = int_0^inf (1 - Re phi(tl))/t^2 dt for the finite-support cf with
// projections ys and weights ps
double inner_cf_integral(const std::vector<double>& ys, const std::vector<double>& ps,
                         const CfOptions& opts, long& evals) {
    double scale = 0.0;
    for (double y : ys) scale = std::max(scale, std::abs(y));
    if (scale == 0.0) return 0.0;
    const double T = opts.t_scale_floor / scale;

    auto f = [&](double t) {
        if (t == 0.0) {
            double s = 0.0;
            for (std::size_t i = 0; i < ys.size(); ++i) s += ps[i] * ys[i] * ys[i];
            return 0.5 * s;  // removable singularity: (1/2) E (Xl)^2
        }
        double s = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i) s += ps[i] * one_minus_cos(t * ys[i]);
        if (!(s >= -1e-9 && s <= 2.0 + 1e-9))
            throw std::logic_error("cf integrand left [0,2]");
        return s / (t * t);
    };
    IntegralResult core = integrate(f, 0.0, T, {}, opts.inner);
    evals += core.evals;

    CompensatedSum total;
    total.add(core.value);
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (ys[i] != 0.0) total.add(ps[i] * tail_beyond(ys[i], T, opts.inner, evals));
    return total.value();
}

}  // namespace

void CharFn::validate() const {
    dist.validate();
    if (dist.dim() != 2) throw std::invalid_argument("CharFn: distribution must be planar");
}

std::complex<double> CharFn::operator()(Functional2 l) const {
    CompensatedSum re, im;
    for (std::size_t a = 0; a < dist.support.size(); ++a) {
        double phase = dist.support[a][0] * l.a + dist.support[a][1] * l.b;
        re.add(dist.probs[a] * std::cos(phase));
        im.add(dist.probs[a] * std::sin(phase));
    }
    return {re.value(), im.value()};
}

double expected_norm_via_cf(const RepresentingMeasure& m, const CharFn& cf,
                            const CfOptions& opts) {
    cf.validate();
    if (m.source.dim() != 2)
        throw std::invalid_argument("expected_norm_via_cf: measure must come from a planar norm");

    long evals = 0;
    auto inner_at = [&](Functional2 l) {
        std::vector<double> ys(cf.dist.support.size());
        for (std::size_t a = 0; a < ys.size(); ++a)
            ys[a] = cf.dist.support[a][0] * l.a + cf.dist.support[a][1] * l.b;
        return inner_cf_integral(ys, cf.dist.probs, opts, evals);
    };

    // l(t) = (1,-t): the projection x_a.l vanishes at t = x_a1/x_a2
    std::vector<double> kinks;
    for (const VecD& x : cf.dist.support)
        if (x[1] != 0.0) kinks.push_back(x[0] / x[1]);

    double pf = functional_pushforward(m, inner_at, kinks, opts.outer, 1);
    return (2.0 / kPi) * pf;
}

namespace {

struct AxisNode {
    double weight;   // mu-weight (already halved per the pushforward)
    Functional2 l;
};

// fixed high-order panels for the density side of the mu-axis
std::vector<AxisNode> mu_axis_nodes(const RepresentingMeasure& m, const CfOptions& opts) {
    std::vector<AxisNode> nodes;
    nodes.push_back({0.5 * m.c, Functional2{0.0, 1.0}});
    for (const Atom& a : m.atoms) nodes.push_back({0.5 * a.mass, Functional2{1.0, -a.t}});
    if (!m.density) return nodes;

    const DensitySpec& den = *m.density;
    double T;
    if (std::isinf(den.t_lo) || std::isinf(den.t_hi)) {
        const double q = den.envelope.exponent;
        const double C = 2.0 * den.envelope.coef;  // growth degree 1
        T = std::pow(C / (opts.moment_tail_tol * (q - 2.0)), 1.0 / (q - 2.0));
        T = std::clamp(T, 64.0, 1e200);
    } else {
        T = std::max(std::abs(den.t_lo), std::abs(den.t_hi));
    }

    // panel edges: geometric into 0 (integrable singularities), dyadic out
    std::vector<double> edges{0.0};
    for (int j = 12; j >= 1; --j) edges.push_back(std::pow(4.0, -j));
    for (double e = 1.0; e < T; e *= 2.0) edges.push_back(e);
    edges.push_back(T);

    // 15-point Kronrod weights reused as a fixed rule per panel
    static const double gx[8] = {0.991455371120812639, 0.949107912342758525,
                                 0.864864423359769073, 0.741531185599394440,
                                 0.586087235467691130, 0.405845151377397167,
                                 0.207784955007898468, 0.0};
    static const double gw[8] = {0.022935322010529225, 0.063092092629978553,
                                 0.104790010322250184, 0.140653259715525919,
                                 0.169004726639267903, 0.190350578064785410,
                                 0.204432940075298892, 0.209482141084727828};
    auto add_panel = [&](double a, double b) {
        double c0 = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < 8; ++i) {
            for (int sgn : {-1, +1}) {
                if (i == 7 && sgn == +1) continue;
                double t = c0 + sgn * h * gx[i];
                double w = gw[i] * h * den.rho(t);
                if (w != 0.0) nodes.push_back({0.5 * w, Functional2{1.0, -t}});
            }
        }
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] > edges[i]) {
            add_panel(edges[i], edges[i + 1]);      // positive side
            add_panel(-edges[i + 1], -edges[i]);    // mirrored
        }
    }
    return nodes;
}

// fixed t-rule on (0, T_t): dyadic panels subdivided to resolve the fastest
// oscillation present
void t_axis_rule(double ymax, double T_t, std::vector<double>& ts, std::vector<double>& ws) {
    ts.clear();
    ws.clear();
    static const double gx[8] = {0.991455371120812639, 0.949107912342758525,
                                 0.864864423359769073, 0.741531185599394440,
                                 0.586087235467691130, 0.405845151377397167,
                                 0.207784955007898468, 0.0};
    static const double gw[8] = {0.022935322010529225, 0.063092092629978553,
                                 0.104790010322250184, 0.140653259715525919,
                                 0.169004726639267903, 0.190350578064785410,
                                 0.204432940075298892, 0.209482141084727828};
    auto add_panel = [&](double a, double b) {
        double c0 = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < 8; ++i) {
            for (int sgn : {-1, +1}) {
                if (i == 7 && sgn == +1) continue;
                ts.push_back(c0 + sgn * h * gx[i]);
                ws.push_back(gw[i] * h);
            }
        }
    };
    std::vector<double> edges;
    for (int j = 30; j >= 1; --j) edges.push_back(std::pow(2.0, -j));
    edges.insert(edges.begin(), 0.0);
    for (double e = 1.0; e < T_t; e *= 2.0) edges.push_back(e);
    edges.push_back(T_t);
    const double max_w = 4.5 / std::max(ymax, 1e-300);  // ~0.7 period
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        if (!(b > a)) continue;
        int parts = std::max(1, static_cast<int>(std::ceil((b - a) / max_w)));
        for (int p = 0; p < parts; ++p)
            add_panel(a + (b - a) * p / parts, a + (b - a) * (p + 1) / parts);
    }
}

}  // namespace

double moment_via_cf(const RepresentingMeasure& m, const CharFn& cf, int j,
                     const CfOptions& opts) {
    cf.validate();
    if (j < 1 || j > 3)
        throw std::invalid_argument("moment_via_cf: j in {1,2,3} (cost guard)");
    if (j == 1) return expected_norm_via_cf(m, cf, opts);

    std::vector<AxisNode> mu_nodes = mu_axis_nodes(m, opts);

    // projections y[b][i] = x_b . l_i and the global frequency scale
    const std::size_t ns = cf.dist.support.size();
    std::vector<std::vector<double>> y(ns, std::vector<double>(mu_nodes.size()));
    double ymax = 0.0;
    for (std::size_t b = 0; b < ns; ++b)
        for (std::size_t i = 0; i < mu_nodes.size(); ++i) {
            y[b][i] = cf.dist.support[b][0] * mu_nodes[i].l.a +
                      cf.dist.support[b][1] * mu_nodes[i].l.b;
            ymax = std::max(ymax, std::abs(y[b][i]));
        }
    if (ymax == 0.0) return 0.0;

    std::vector<double> ts, ws;
    const double T_t = 1e3 / ymax;
    t_axis_rule(ymax, T_t, ts, ws);
    if (static_cast<long>(ts.size()) * static_cast<long>(mu_nodes.size()) >
        opts.axis_node_guard)
        throw std::invalid_argument("moment_via_cf: axis node guard exceeded");

    // One axis integral per support point. The j-fold product rule applied to
    // E prod_alpha (1-cos(t_alpha y_alpha)) factorizes per support point b
    // into [axis(b)]^j; this is the same tensor sum, reassociated.
    long evals = 0;
    CompensatedSum result;
    for (std::size_t b = 0; b < ns; ++b) {
        CompensatedSum axis;
        for (std::size_t i = 0; i < mu_nodes.size(); ++i) {
            const double yb = y[b][i];
            if (yb == 0.0 || mu_nodes[i].weight == 0.0) continue;
            CompensatedSum tsum;
            for (std::size_t q = 0; q < ts.size(); ++q) {
                double t = ts[q];
                double val = t == 0.0 ? 0.5 * yb * yb
                                      : one_minus_cos(t * yb) / (t * t);
                tsum.add(ws[q] * val);
            }
            tsum.add(tail_beyond(yb, T_t, opts.inner, evals));
            axis.add(mu_nodes[i].weight * tsum.value());
        }
        result.add(cf.dist.probs[b] * std::pow((2.0 / kPi) * axis.value(), j));
    }
    return result.value();
}

double ab_expansion(std::span<const double> thetas) {
    const int j = static_cast<int>(thetas.size());
    if (j < 1 || j > 12) throw std::invalid_argument("ab_expansion: 1 <= j <= 12 (3^j terms)");
    long total = 1;
    for (int i = 0; i < j; ++i) total *= 3;

    CompensatedSum sum;
    for (long code = 0; code < total; ++code) {
        long rest = code;
        int in_union = 0;
        double angle = 0.0;
        for (int i = 0; i < j; ++i) {
            int tri = rest % 3;
            rest /= 3;
            if (tri == 1) {
                angle += thetas[i];
                ++in_union;
            } else if (tri == 2) {
                angle -= thetas[i];
                ++in_union;
            }
        }
        sum.add(std::pow(-0.5, in_union) * std::cos(angle));
    }
    double expansion = sum.value();

    double product = 1.0;
    for (double th : thetas) product *= one_minus_cos(th);
    if (std::abs(expansion - product) > 1e-9 * (1.0 + std::abs(product)))
        throw std::logic_error("ab_expansion: identity check failed");
    return expansion;
}

CharFn cf_of_sum(const std::vector<CharFn>& cfs) {
    if (cfs.empty()) throw std::invalid_argument("cf_of_sum: no factors");
    for (const CharFn& c : cfs) c.validate();

    std::map<std::pair<double, double>, double> conv;
    for (std::size_t a = 0; a < cfs[0].dist.support.size(); ++a)
        conv[{cfs[0].dist.support[a][0], cfs[0].dist.support[a][1]}] = cfs[0].dist.probs[a];
    for (std::size_t f = 1; f < cfs.size(); ++f) {
        std::map<std::pair<double, double>, double> next;
        for (const auto& [pt, p] : conv)
            for (std::size_t a = 0; a < cfs[f].dist.support.size(); ++a) {
                auto key = std::make_pair(pt.first + cfs[f].dist.support[a][0],
                                          pt.second + cfs[f].dist.support[a][1]);
                next[key] += p * cfs[f].dist.probs[a];
            }
        if (next.size() > 10000)
            throw std::invalid_argument("cf_of_sum: convolution support blow-up guard");
        conv = std::move(next);
    }

    CharFn out;
    for (const auto& [pt, p] : conv) {
        out.dist.support.push_back({pt.first, pt.second});
        out.dist.probs.push_back(p);
    }
    return out;
}

double expected_norm_exact(const NormSpec& norm, const DiscreteDistribution& dist, int j) {
    dist.validate();
    CompensatedSum s;
    for (std::size_t a = 0; a < dist.support.size(); ++a)
        s.add(dist.probs[a] * std::pow(eval_norm(norm, dist.support[a]), j));
    return s.value();
}

}  // namespace normdec
