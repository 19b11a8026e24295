#include "normdec/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace normdec {

HlawkaReport hlawka_margin(const NormSpec& norm, const VecD& x, const VecD& y, const VecD& z) {
    if (x.size() != y.size() || y.size() != z.size())
        throw std::invalid_argument("hlawka_margin: dimension mismatch");
    HlawkaReport rep;
    rep.triple = {x, y, z};
    rep.margin = eval_norm(norm, add(add(x, y), z)) + eval_norm(norm, x) + eval_norm(norm, y) +
                 eval_norm(norm, z) - eval_norm(norm, add(x, y)) - eval_norm(norm, add(y, z)) -
                 eval_norm(norm, add(z, x));
    return rep;
}

std::optional<HlawkaReport> hlawka_search(const NormSpec& norm, int d, int radius,
                                          long long eval_cap) {
    if (d < 2) throw std::invalid_argument("hlawka_search: d >= 2");
    if (radius < 1) throw std::invalid_argument("hlawka_search: radius >= 1");

    const int side = 2 * radius + 1;
    long long npts = 1;
    for (int i = 0; i < d; ++i) npts *= side;

    std::vector<VecD> lattice;
    lattice.reserve(static_cast<std::size_t>(npts));
    VecD cur(d, -static_cast<double>(radius));
    for (long long c = 0; c < npts; ++c) {
        lattice.push_back(cur);
        for (int i = 0; i < d; ++i) {
            if (cur[i] < radius) {
                cur[i] += 1.0;
                break;
            }
            cur[i] = -static_cast<double>(radius);
        }
    }

    long long evals = 0;
    std::optional<HlawkaReport> found;
    for (const VecD& x : lattice) {
        for (const VecD& y : lattice) {
            for (const VecD& z : lattice) {
                evals += 7;
                if (evals > eval_cap) return found;
                HlawkaReport rep = hlawka_margin(norm, x, y, z);
                if (rep.margin < -1e-12 &&
                    (!found || rep.margin < found->margin - 1e-12 ||
                     (std::abs(rep.margin - found->margin) <= 1e-12 &&
                      rep.triple < found->triple)))
                    found = rep;
            }
        }
    }
    return found;
}

KhinchinChain khinchin_chain(const RepresentingMeasure& m, const RademacherInstance& inst,
                             const QuadratureOptions& opts) {
    inst.validate();
    if (m.source.dim() != 2)
        throw std::invalid_argument("khinchin_chain: needs a norm on R^2");
    for (const VecD& x : inst.vectors)
        if (x.size() != 2) throw std::invalid_argument("khinchin_chain: vectors must be 2-D");

    KhinchinChain chain;
    double e1 = rademacher_moment(m.source, inst, 1);
    chain.two_E_sq = 2.0 * e1 * e1;
    chain.second_moment = rademacher_moment(m.source, inst, 2);

    // g(l) = sqrt(sum_i (x_i l)^2); in t-coordinates the only derivative
    // kinks are where the quadratic can vanish, t = x_i1/x_i2
    std::vector<double> kinks;
    for (const VecD& x : inst.vectors)
        if (x[1] != 0.0) kinks.push_back(x[0] / x[1]);
    auto g = [&](Functional2 l) {
        double s = 0.0;
        for (const VecD& x : inst.vectors) {
            double v = x[0] * l.a + x[1] * l.b;
            s += v * v;
        }
        return std::sqrt(s);
    };
    double b = functional_pushforward(m, g, kinks, opts, 1);
    chain.improved_bound = b * b;
    return chain;
}

KhinchinChain khinchin_chain(const NormSpec& spec2d, const RademacherInstance& inst,
                             const QuadratureOptions& opts) {
    ConvexProfile profile = profile_from_norm(spec2d);
    RepresentingMeasure m = measure_from_profile(profile);
    return khinchin_chain(m, inst, opts);
}

double buja_margin(const NormSpec& norm2d, const DiscreteDistribution& dist) {
    if (norm2d.dim() != 2 || dist.dim() != 2)
        throw std::invalid_argument("buja_margin: needs a planar norm and 2-D distribution");
    auto [e_diff, e_sum] = pairwise_expectations(norm2d, dist);
    return e_sum - e_diff;
}

std::vector<CounterexampleRow> johnson_counterexamples() {
    std::vector<CounterexampleRow> rows;
    {
        // d = 3: e_1, e_2, e_3 and -(e_1+e_2+e_3)/2, each with probability 1/4
        std::vector<std::vector<Rational>> support;
        for (int i = 0; i < 3; ++i) {
            std::vector<Rational> e(3, Rational(0));
            e[i] = Rational(1);
            support.push_back(e);
        }
        support.push_back({Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)});
        std::vector<Rational> probs(4, Rational(1, 4));
        auto [ed, es] = pairwise_expectations_rational(3, support, probs);
        rows.push_back({3, ed, es});
    }
    for (int d = 4; d <= 6; ++d) {
        std::vector<std::vector<Rational>> support;
        for (int i = 0; i < d; ++i) {
            std::vector<Rational> e(d, Rational(0));
            e[i] = Rational(1);
            support.push_back(e);
        }
        std::vector<Rational> probs(d, Rational(1, d));
        auto [ed, es] = pairwise_expectations_rational(d, support, probs);
        rows.push_back({d, ed, es});
    }
    return rows;
}

}  // namespace normdec
