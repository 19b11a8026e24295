#include "normdec/measure.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "normdec/summation.hpp"

namespace normdec {

namespace {

// Fritsch-Carlson monotone piecewise cubic of N' samples; its derivative is
// the reconstructed density (nonnegative by the slope limiter).
struct MonotoneCubic {
    std::vector<double> x, y, m;  // nodes, values, limited slopes

    static MonotoneCubic fit(std::vector<double> xs, std::vector<double> ys) {
        MonotoneCubic pc;
        pc.x = std::move(xs);
        pc.y = std::move(ys);
        const std::size_t n = pc.x.size();
        pc.m.assign(n, 0.0);
        if (n < 2) return pc;
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double h = pc.x[i + 1] - pc.x[i];
            d[i] = h > 0 ? (pc.y[i + 1] - pc.y[i]) / h : 0.0;
        }
        pc.m[0] = d[0];
        pc.m[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0)
                pc.m[i] = 0.0;
            else {
                double w1 = 2.0 * (pc.x[i + 1] - pc.x[i]) + (pc.x[i] - pc.x[i - 1]);
                double w2 = (pc.x[i + 1] - pc.x[i]) + 2.0 * (pc.x[i] - pc.x[i - 1]);
                pc.m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);  // harmonic, monotone
            }
        }
        // FC limiter on the end slopes
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            std::size_t j = (i == 0) ? 0 : n - 2;
            if (d[j] == 0.0)
                pc.m[i] = 0.0;
            else if (pc.m[i] / d[j] > 3.0)
                pc.m[i] = 3.0 * d[j];
            else if (pc.m[i] / d[j] < 0.0)
                pc.m[i] = 0.0;
        }
        return pc;
    }

    double derivative(double t) const {
        if (x.empty()) return 0.0;
        if (t <= x.front() || t >= x.back()) return 0.0;
        auto it = std::upper_bound(x.begin(), x.end(), t);
        std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        double h = x[i + 1] - x[i];
        double s = (t - x[i]) / h;
        double dy = (y[i + 1] - y[i]) / h;
        return dy * (6.0 * s - 6.0 * s * s) + m[i] * (3.0 * s * s - 4.0 * s + 1.0) +
               m[i + 1] * (3.0 * s * s - 2.0 * s);
    }
};

}  // namespace

double lp_density(double p, double t) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("lp_density: p must lie in (1, inf); atomic cases elsewhere");
    double a = std::abs(t);
    if (a == 0.0) {
        if (p < 2.0) return kInf;  // integrable blow-up; quadrature never lands here
        return p == 2.0 ? 1.0 : 0.0;
    }
    if (a <= 1.0)
        return (p - 1.0) * std::pow(a, p - 2.0) *
               std::exp((1.0 / p - 2.0) * std::log1p(std::pow(a, p)));
    // |t|^{p-2} (|t|^p+1)^{1/p-2} = |t|^{-1-p} (1+|t|^{-p})^{1/p-2}
    return (p - 1.0) * std::pow(a, -1.0 - p) *
           std::exp((1.0 / p - 2.0) * std::log1p(std::pow(a, -p)));
}

RepresentingMeasure measure_from_profile(const ConvexProfile& profile,
                                         const MeasureOptions& opts) {
    RepresentingMeasure m;
    m.source = profile.norm;
    m.k = profile.k;
    m.c = profile.c;

    switch (profile.kind) {
        case ProfileKind::PiecewiseLinear: {
            for (std::size_t i = 0; i < profile.breakpoints.size(); ++i) {
                double jump = profile.pl_slopes[i + 1] - profile.pl_slopes[i];
                if (jump <= 0.0)
                    throw std::runtime_error("measure_from_profile: non-increasing slopes");
                m.atoms.push_back({profile.breakpoints[i], jump});
            }
            return m;
        }
        case ProfileKind::LpClosedForm: {
            const double p = profile.lp_p;
            DensitySpec den;
            den.rho = [p](double t) { return lp_density(p, t); };
            den.t_lo = -kInf;
            den.t_hi = kInf;
            den.envelope = {p - 1.0, p + 1.0, 1.0};
            if (p < 2.0)
                den.singular_points = {0.0};
            else if (p > 2.0)
                den.kinks = {0.0};
            m.density = std::move(den);
            return m;
        }
        case ProfileKind::Numeric:
            break;
    }

    // numeric reconstruction: atoms from the profile's kink scan, density
    // from the derivative of a monotone cubic through N' samples
    const double tau = opts.atom_threshold_rel * profile.k;
    for (double t : profile.breakpoints) {
        double jump = profile.dN_plus(t) - profile.dN_minus(t);
        if (jump > tau) m.atoms.push_back({t, jump});
    }

    // support window certified by the exact tail masses k - N'+(T)
    double T = 8.0;
    for (double t : profile.breakpoints) T = std::max(T, 2.0 * std::abs(t) + 8.0);
    while ((profile.k - profile.dN_plus(T)) + (profile.k + profile.dN_minus(-T)) >
               opts.window_mass_tol * profile.k &&
           T < 1e8)
        T *= 2.0;

    // graded N' sampling between atoms: refine while the rise per cell is
    // coarse, flanking each atom by a small exclusion pad
    std::vector<double> anchors{-T};
    for (const Atom& a : m.atoms) {
        double pad = 1e-7 * (1.0 + std::abs(a.t));
        anchors.push_back(a.t - pad);
        anchors.push_back(a.t + pad);
    }
    anchors.push_back(T);

    auto dn = [&](double u) { return profile.dN(u); };
    std::vector<MonotoneCubic> pieces;
    std::vector<double> piece_lo, piece_hi;
    for (std::size_t s = 0; s + 1 < anchors.size(); s += 2) {
        double lo = anchors[s], hi = anchors[s + 1];
        if (!(hi > lo)) continue;
        std::vector<double> xs{lo, hi};
        std::vector<double> ys{dn(lo), dn(hi)};
        const double rise_tol = 2.0 * profile.k / 512.0;
        for (bool refined = true; refined && xs.size() < 4000;) {
            refined = false;
            std::vector<double> nx, ny;
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                nx.push_back(xs[i]);
                ny.push_back(ys[i]);
                double w = xs[i + 1] - xs[i];
                bool coarse = (ys[i + 1] - ys[i] > rise_tol &&
                               w > 1e-4 * (1.0 + std::abs(xs[i]))) ||
                              w > 0.35 * (1.0 + std::abs(xs[i]) + std::abs(xs[i + 1]));
                if (coarse) {
                    double mid = 0.5 * (xs[i] + xs[i + 1]);
                    nx.push_back(mid);
                    ny.push_back(dn(mid));
                    refined = true;
                }
            }
            nx.push_back(xs.back());
            ny.push_back(ys.back());
            xs = std::move(nx);
            ys = std::move(ny);
        }
        // enforce monotone data (FD noise can ripple at 1e-10 scale)
        for (std::size_t i = 1; i < ys.size(); ++i) {
            if (ys[i] < ys[i - 1] - opts.density_neg_tol * profile.k)
                throw std::runtime_error("measure_from_profile: N' decreases (not convex)");
            ys[i] = std::max(ys[i], ys[i - 1]);
        }
        piece_lo.push_back(lo);
        piece_hi.push_back(hi);
        pieces.push_back(MonotoneCubic::fit(std::move(xs), std::move(ys)));
    }

    auto table = std::make_shared<std::vector<MonotoneCubic>>(std::move(pieces));
    auto lows = std::make_shared<std::vector<double>>(std::move(piece_lo));
    auto highs = std::make_shared<std::vector<double>>(std::move(piece_hi));
    DensitySpec den;
    den.rho = [table, lows, highs](double t) {
        auto it = std::upper_bound(lows->begin(), lows->end(), t);
        if (it == lows->begin()) return 0.0;
        std::size_t i = static_cast<std::size_t>(it - lows->begin()) - 1;
        if (t >= (*highs)[i]) return 0.0;
        return std::max(0.0, (*table)[i].derivative(t));
    };
    den.t_lo = -T;
    den.t_hi = T;
    for (const Atom& a : m.atoms) den.kinks.push_back(a.t);
    m.density = std::move(den);
    return m;
}

MassReport mass_checks(const RepresentingMeasure& m, const QuadratureOptions& opts) {
    MassReport rep;
    IntegralResult total = stieltjes_integrate(
        m, [](double) { return 1.0; }, {}, opts, 0);
    rep.total_mass_residual = std::abs(total.value - 2.0 * m.k);
    const double kinks[] = {0.0};
    IntegralResult first = stieltjes_integrate(
        m, [](double t) { return std::abs(t); }, kinks, opts, 1);
    double norm01 = eval_norm(m.source, Vec2{0.0, 1.0});
    rep.first_moment_residual = std::abs(first.value - (2.0 * norm01 - m.c));
    return rep;
}

double functional_pushforward(const RepresentingMeasure& m,
                              const std::function<double(Functional2)>& g,
                              std::span<const double> g_kinks_in_t,
                              const QuadratureOptions& opts, int growth_degree) {
    IntegralResult integral = stieltjes_integrate(
        m, [&](double t) { return g(Functional2{1.0, -t}); }, g_kinks_in_t, opts,
        growth_degree);
    return 0.5 * (m.c * g(Functional2{0.0, 1.0}) + integral.value);
}

namespace {

// E|m + a Z| for standard normal Z
double gaussian_abs_mean(double mu, double a) {
    if (a <= 0.0) return std::abs(mu);
    static const double sqrt2 = std::sqrt(2.0);
    static const double sqrt_2_over_pi = std::sqrt(2.0 / 3.14159265358979323846);
    return mu * std::erf(mu / (a * sqrt2)) +
           a * sqrt_2_over_pi * std::exp(-mu * mu / (2.0 * a * a));
}

}  // namespace

double euclidean_identity_residual(int d, const VecD& x, int hermite_order,
                                   bool rotation_fast_path) {
    if (d < 1 || d > 3) throw std::invalid_argument("euclidean_identity_residual: d in {1,2,3}");
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("euclidean_identity_residual: dimension mismatch");
    if (hermite_order < 10)
        throw std::invalid_argument("euclidean_identity_residual: hermite_order >= 10");

    double norm2 = 0.0;
    for (double c : x) norm2 += c * c;
    norm2 = std::sqrt(norm2);
    if (norm2 == 0.0) return 0.0;

    static const double pi = 3.14159265358979323846;
    const double half_pi_factor = std::sqrt(pi / 2.0);

    if (rotation_fast_path) {
        // rotational invariance: x.Z ~ ||x||_2 Z_1
        return std::abs(half_pi_factor * gaussian_abs_mean(0.0, norm2) - norm2);
    }

    int inner = 0;
    for (int i = 1; i < d; ++i)
        if (std::abs(x[i]) > std::abs(x[inner])) inner = i;
    const double a = std::abs(x[inner]);

    auto [nodes, weights] = gauss_hermite(hermite_order);
    const double sqrt2 = std::sqrt(2.0);

    double total = 0.0;
    if (d == 1) {
        total = gaussian_abs_mean(0.0, a);
    } else if (d == 2) {
        double other = x[1 - inner];
        CompensatedSum s;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s.add(weights[i] * gaussian_abs_mean(other * sqrt2 * nodes[i], a));
        total = s.value() / std::sqrt(pi);
    } else {
        double o1 = 0.0, o2 = 0.0;
        bool first = true;
        for (int i = 0; i < d; ++i) {
            if (i == inner) continue;
            (first ? o1 : o2) = x[i];
            first = false;
        }
        CompensatedSum s;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = 0; j < nodes.size(); ++j)
                s.add(weights[i] * weights[j] *
                      gaussian_abs_mean((o1 * nodes[i] + o2 * nodes[j]) * sqrt2, a));
        total = s.value() / pi;
    }
    return std::abs(half_pi_factor * total - norm2);
}

}  // namespace normdec
