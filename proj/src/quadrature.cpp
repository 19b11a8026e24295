#include "normdec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "normdec/measure.hpp"
#include "normdec/summation.hpp"

namespace normdec {

namespace {

// QUADPACK G7/K15 pair on [-1,1]; Gauss points are the odd-index Kronrod ones.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    const double mean = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    resasc *= std::abs(h);

    const double value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs * std::abs(h);
    err = std::max(err, round_floor);
    if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
    return {value, err};
}

struct Panel {
    double a, b;
    double value, error;
    int depth;
};

struct PanelLess {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

bool width_exhausted(double a, double b) {
    const double w = b - a;
    return w <= 8.0 * std::numeric_limits<double>::epsilon() *
                    std::max({1.0, std::abs(a), std::abs(b)});
}

void push_dyadic_points(double a, double b, std::vector<double>& pts) {
    for (double t = 2.0; t < b && std::isfinite(t); t *= 2.0)
        if (t > a) pts.push_back(t);
    for (double t = -2.0; t > a && std::isfinite(t); t *= 2.0)
        if (t < b) pts.push_back(t);
}

}  // namespace

void QuadratureOptions::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || !(truncation_tail_tol > 0))
        throw std::invalid_argument("QuadratureOptions: tolerances must be positive");
    if (max_depth < 10) throw std::invalid_argument("QuadratureOptions: max_depth must be >= 10");
}

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         std::span<const double> kinks, const QuadratureOptions& opts,
                         std::span<const double> singular) {
    opts.validate();
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    IntegralResult res;

    std::vector<double> pts{a, b};
    for (double t : kinks)
        if (t > a && t < b) pts.push_back(t);
    for (double t : singular)
        if (t > a && t < b) pts.push_back(t);
    push_dyadic_points(a, b, pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double x, double y) {
                              return y - x <= 1e-15 * std::max({1.0, std::abs(x), std::abs(y)});
                          }),
              pts.end());
    pts.front() = a;
    pts.back() = b;

    auto is_singular = [&](double t) {
        for (double s : singular)
            if (t == s || std::abs(t - s) <= 1e-15 * std::max(1.0, std::abs(s))) return true;
        return false;
    };

    // Geometric grading toward singular panel edges: shells shrink by 1/8
    // until their contribution is negligible, restoring convergence for
    // integrable algebraic singularities that plain bisection cannot reach
    // within max_depth.
    std::vector<Panel> panels;
    auto eval_panel = [&](double lo, double hi) {
        PanelEstimate e = gk15(f, lo, hi);
        res.evals += 15;
        panels.push_back({lo, hi, e.value, e.error, 0});
    };
    auto graded_toward = [&](double s, double far, double tol_hint) {
        // integrates the panel between s and far, shells accumulating at s
        const double w = std::abs(far - s);
        const double dir = (far > s) ? 1.0 : -1.0;
        double outer = w;
        double prev_mag = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 90; ++j) {
            double inner = outer / 8.0;
            if (width_exhausted(std::min(s + dir * inner, s + dir * outer),
                                std::max(s + dir * inner, s + dir * outer)))
                break;
            double lo = std::min(s + dir * inner, s + dir * outer);
            double hi = std::max(s + dir * inner, s + dir * outer);
            eval_panel(lo, hi);
            double mag = std::abs(panels.back().value) + panels.back().error;
            if (mag < 0.01 * tol_hint && mag <= prev_mag) {
                // closure: remaining sliver bounded by the last shell's size
                double clo = std::min(s, s + dir * inner), chi = std::max(s, s + dir * inner);
                if (!width_exhausted(clo, chi)) {
                    eval_panel(clo, chi);
                    panels.back().error += std::abs(panels.back().value);
                    panels.back().depth = opts.max_depth;  // do not refine into the singularity
                }
                return;
            }
            prev_mag = mag;
            outer = inner;
        }
        double clo = std::min(s, s + dir * outer), chi = std::max(s, s + dir * outer);
        if (!width_exhausted(clo, chi)) {
            eval_panel(clo, chi);
            panels.back().error += std::abs(panels.back().value);
            panels.back().depth = opts.max_depth;
        }
    };

    const double tol_seed = std::max(opts.abs_tol, opts.rel_tol);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double lo = pts[i], hi = pts[i + 1];
        if (!(hi > lo)) continue;
        bool slo = is_singular(lo), shi = is_singular(hi);
        if (slo && shi) {
            double mid = 0.5 * (lo + hi);
            graded_toward(lo, mid, tol_seed);
            graded_toward(hi, mid, tol_seed);
        } else if (slo) {
            graded_toward(lo, hi, tol_seed);
        } else if (shi) {
            graded_toward(hi, lo, tol_seed);
        } else {
            eval_panel(lo, hi);
        }
    }

    CompensatedSum vsum;
    double esum = 0.0;
    for (const Panel& p : panels) {
        vsum.add(p.value);
        esum += p.error;
    }

    std::make_heap(panels.begin(), panels.end(), PanelLess{});
    const std::size_t panel_cap = 200000;
    std::vector<Panel> frozen;  // at max depth or width limit; value kept, never refined
    double frozen_err = 0.0;
    while (!panels.empty() && panels.size() + frozen.size() < panel_cap) {
        double tol_now = std::max(opts.abs_tol, opts.rel_tol * std::abs(vsum.value()));
        if (esum + frozen_err <= tol_now) break;
        std::pop_heap(panels.begin(), panels.end(), PanelLess{});
        Panel worst = panels.back();
        panels.pop_back();
        if (worst.depth >= opts.max_depth || width_exhausted(worst.a, worst.b)) {
            frozen.push_back(worst);
            frozen_err += worst.error;
            esum -= worst.error;
            continue;
        }
        vsum.add(-worst.value);
        esum -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            PanelEstimate e = gk15(f, lo, hi);
            res.evals += 15;
            panels.push_back({lo, hi, e.value, e.error, worst.depth + 1});
            std::push_heap(panels.begin(), panels.end(), PanelLess{});
            vsum.add(e.value);
            esum += e.error;
        }
    }

    // exact recomputation of totals (the incremental ones drift slightly)
    CompensatedSum final_sum;
    double final_err = 0.0;
    for (const Panel& p : panels) {
        final_sum.add(p.value);
        final_err += p.error;
    }
    for (const Panel& p : frozen) {
        final_sum.add(p.value);
        final_err += p.error;
    }
    res.panels = static_cast<int>(panels.size() + frozen.size());
    res.value = final_sum.value();
    res.error_estimate = final_err;
    const double tol_final = std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value));
    res.converged = res.error_estimate <= 1.01 * tol_final;
    return res;
}

IntegralResult integrate_halfline(const std::function<double(double)>& f, int sign,
                                  double tail_coef, const QuadratureOptions& opts,
                                  bool tan_transform) {
    opts.validate();
    if (sign != 1 && sign != -1) throw std::invalid_argument("integrate_halfline: sign is +1/-1");
    if (!(tail_coef > 0)) throw std::invalid_argument("integrate_halfline: tail_coef must be > 0");
    auto g = [&](double t) { return sign > 0 ? f(t) : f(-t); };

    if (tan_transform) {
        const double half_pi = std::acos(-1.0) / 2.0;
        auto h = [&](double th) {
            double c = std::cos(th);
            double t = std::tan(th);
            return g(t) / (c * c);
        };
        const double sing[] = {half_pi};
        IntegralResult r = integrate(h, 0.0, half_pi, {}, opts, sing);
        return r;
    }

    IntegralResult res;
    double T = 1024.0;
    IntegralResult head = integrate(g, 0.0, T, {}, opts);
    CompensatedSum total;
    total.add(head.value);
    res.evals += head.evals;
    res.panels += head.panels;
    double err = head.error_estimate;
    while (tail_coef / T >
               opts.truncation_tail_tol * std::max(std::abs(total.value()), opts.abs_tol) &&
           T < 1e290) {
        IntegralResult seg = integrate(g, T, 2.0 * T, {}, opts);
        total.add(seg.value);
        err += seg.error_estimate;
        res.evals += seg.evals;
        res.panels += seg.panels;
        T *= 2.0;
    }
    // envelope check by sampling past the truncation point
    for (double fac : {1.03, 1.41, 2.2, 3.7, 6.3, 11.0, 23.0, 47.0}) {
        double t = T * fac;
        if (!std::isfinite(t)) break;
        double ft = g(t);
        res.evals += 1;
        if (std::abs(ft) * t * t > tail_coef * 1.001 + 1e-300)
            throw std::runtime_error("integrate_halfline: tail envelope violated at t=" +
                                     std::to_string(t));
    }
    res.value = total.value();
    res.error_estimate = err + tail_coef / T;
    res.converged =
        res.error_estimate <= 1.01 * std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value)) +
                                  tail_coef / T;
    return res;
}

IntegralResult stieltjes_integrate(const RepresentingMeasure& m,
                                   const std::function<double(double)>& g,
                                   std::span<const double> g_kinks, const QuadratureOptions& opts,
                                   int g_growth_degree, std::span<const double> g_discontinuities) {
    opts.validate();
    if (g_growth_degree < 0) throw std::invalid_argument("stieltjes_integrate: bad growth degree");

    IntegralResult res;
    CompensatedSum total;
    for (const Atom& atom : m.atoms) {
        for (double dpt : g_discontinuities)
            if (std::abs(atom.t - dpt) <= 1e-12 * std::max(1.0, std::abs(atom.t)))
                throw std::invalid_argument(
                    "stieltjes_integrate: g discontinuous at an atom of the measure");
        total.add(atom.mass * g(atom.t));
        res.evals += 1;
    }

    double err = 0.0;
    if (m.density) {
        const DensitySpec& den = *m.density;
        double lo = den.t_lo, hi = den.t_hi;
        const double tail_tol = opts.truncation_tail_tol * std::max(1.0, 2.0 * m.k);
        if (std::isinf(lo) || std::isinf(hi)) {
            if (!(den.envelope.coef > 0) || !(den.envelope.exponent > g_growth_degree + 1.05))
                throw std::invalid_argument(
                    "stieltjes_integrate: infinite support needs an integrable tail envelope");
            const double q = den.envelope.exponent;
            const double deg = g_growth_degree;
            const double C = den.envelope.coef * std::pow(2.0, deg);  // (1+t)^deg <= (2t)^deg, t>=1
            double T = std::pow(C / (tail_tol * (q - deg - 1.0)), 1.0 / (q - deg - 1.0));
            T = std::clamp(T, std::max(64.0, den.envelope.valid_from), 1e250);
            if (std::isinf(lo)) lo = -T;
            if (std::isinf(hi)) hi = T;
            err += 2.0 * tail_tol;
        }
        std::vector<double> kinks(g_kinks.begin(), g_kinks.end());
        kinks.insert(kinks.end(), den.kinks.begin(), den.kinks.end());
        auto integrand = [&](double t) { return g(t) * den.rho(t); };
        IntegralResult di =
            integrate(integrand, lo, hi, kinks, opts,
                      std::span<const double>(den.singular_points));
        total.add(di.value);
        err += di.error_estimate;
        res.evals += di.evals;
        res.panels += di.panels;
    }

    res.value = total.value();
    res.error_estimate = err;
    res.converged =
        res.error_estimate <= 1.05 * std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value)) +
                                  4.0 * opts.truncation_tail_tol * std::max(1.0, 2.0 * m.k);
    return res;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1 || n > 500) throw std::invalid_argument("gauss_hermite: order out of range");
    // orthonormal Hermite recurrence (weight e^{-x^2}), stable to high order
    auto eval = [&](double x, int upto, std::vector<double>* store) -> double {
        double pm1 = 0.0;
        double p = std::pow(3.14159265358979323846, -0.25);
        if (store) (*store)[0] = p;
        for (int k = 0; k < upto; ++k) {
            double pn = x * std::sqrt(2.0 / (k + 1)) * p -
                        std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
            pm1 = p;
            p = pn;
            if (store && k + 1 < static_cast<int>(store->size())) (*store)[k + 1] = p;
        }
        return p;
    };
    auto hn = [&](double x) { return eval(x, n, nullptr); };

    // bracket the nonnegative roots on a fine grid, polish by bisection
    const double xmax = std::sqrt(2.0 * n + 1.0) + 2.0;
    const int grid = 40 * n + 200;
    std::vector<double> roots;
    double prev_x = 0.0, prev_f = hn(0.0);
    if (prev_f == 0.0) roots.push_back(0.0);
    for (int i = 1; i <= grid; ++i) {
        double x = xmax * i / grid;
        double fx = hn(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (prev_f != 0.0 && ((fx > 0) != (prev_f > 0))) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (a + b);
                double fm = hn(mid);
                if (fm == 0.0 || b - a < 1e-16 * std::max(1.0, mid)) {
                    a = b = mid;
                    break;
                }
                if ((fm > 0) == (fa > 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    // assemble symmetric node set
    std::vector<double> nodes;
    for (auto it = roots.rbegin(); it != roots.rend(); ++it)
        if (*it > 0.0) nodes.push_back(-*it);
    if (n % 2 == 1) nodes.push_back(0.0);
    for (double r : roots)
        if (r > 0.0) nodes.push_back(r);
    if (static_cast<int>(nodes.size()) != n)
        throw std::runtime_error("gauss_hermite: root search failed");

    // Christoffel numbers: w_i = 1 / sum_{k<n} p_k(x_i)^2
    std::vector<double> weights(n);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) {
        eval(nodes[i], n, &vals);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += vals[k] * vals[k];
        weights[i] = 1.0 / s;
    }
    return {nodes, weights};
}

}  // namespace normdec
