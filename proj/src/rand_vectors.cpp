#include "normdec/rand_vectors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "normdec/summation.hpp"

namespace normdec {

int DiscreteDistribution::dim() const {
    return support.empty() ? 0 : static_cast<int>(support.front().size());
}

void DiscreteDistribution::validate() const {
    if (support.empty() || support.size() != probs.size())
        throw std::invalid_argument("DiscreteDistribution: support/probs mismatch");
    const std::size_t d = support.front().size();
    CompensatedSum total;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i].size() != d)
            throw std::invalid_argument("DiscreteDistribution: ragged support");
        for (double c : support[i])
            if (!std::isfinite(c))
                throw std::invalid_argument("DiscreteDistribution: non-finite support point");
        if (!(probs[i] > 0.0))
            throw std::invalid_argument("DiscreteDistribution: probabilities must be positive");
        total.add(probs[i]);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::invalid_argument("DiscreteDistribution: probabilities must sum to 1");
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j)
            if (support[i] == support[j])
                throw std::invalid_argument("DiscreteDistribution: duplicate support point");
}

void RademacherInstance::validate() const {
    if (vectors.empty()) throw std::invalid_argument("RademacherInstance: n >= 1 required");
    if (vectors.size() > 24)
        throw std::invalid_argument("RademacherInstance: n <= 24 (enumeration guard)");
    const std::size_t d = vectors.front().size();
    for (const VecD& x : vectors)
        if (x.size() != d) throw std::invalid_argument("RademacherInstance: ragged vectors");
}

double rademacher_moment(const NormSpec& norm, const RademacherInstance& inst, int j) {
    inst.validate();
    if (j < 1) throw std::invalid_argument("rademacher_moment: j >= 1");
    const int n = static_cast<int>(inst.vectors.size());
    const std::size_t d = inst.vectors.front().size();

    // start at all signs +1; Gray code flips exactly one sign per step
    VecD sum(d, 0.0);
    for (const VecD& x : inst.vectors) sum = add(sum, x);
    std::vector<int> sign(n, +1);

    CompensatedSum acc;
    const std::uint64_t total = 1ull << n;
    acc.add(std::pow(eval_norm(norm, sum), j));
    for (std::uint64_t step = 1; step < total; ++step) {
        // bit flipped between successive Gray codes = lowest set bit of step
        int bit = 0;
        while (!((step >> bit) & 1ull)) ++bit;
        double flip = -2.0 * sign[bit];
        for (std::size_t c = 0; c < d; ++c) sum[c] += flip * inst.vectors[bit][c];
        sign[bit] = -sign[bit];
        acc.add(std::pow(eval_norm(norm, sum), j));
    }
    return acc.value() / static_cast<double>(total);
}

std::pair<double, double> pairwise_expectations(const NormSpec& norm,
                                                const DiscreteDistribution& dist) {
    dist.validate();
    const std::size_t n = dist.support.size();
    if (n * n > 10000)
        throw std::invalid_argument("pairwise_expectations: pair count guard exceeded");
    CompensatedSum e_diff, e_sum;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double p = dist.probs[a] * dist.probs[b];
            e_diff.add(p * eval_norm(norm, sub(dist.support[a], dist.support[b])));
            e_sum.add(p * eval_norm(norm, add(dist.support[a], dist.support[b])));
        }
    }
    return {e_diff.value(), e_sum.value()};
}

namespace {

Rational johnson_norm_rational(int d, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("johnson_norm_rational: dimension mismatch");
    Rational best(0);
    for (int i = 0; i < d; ++i) {
        best = std::max(best, x[i].abs());
        for (int j = i + 1; j < d; ++j) best = std::max(best, (x[i] - x[j]).abs());
    }
    return best;
}

}  // namespace

std::pair<Rational, Rational> pairwise_expectations_rational(
    int d, const std::vector<std::vector<Rational>>& support,
    const std::vector<Rational>& probs) {
    if (d < 3) throw std::invalid_argument("pairwise_expectations_rational: d >= 3");
    if (support.empty() || support.size() != probs.size())
        throw std::invalid_argument("pairwise_expectations_rational: support/probs mismatch");
    Rational total(0);
    for (const Rational& p : probs) total = total + p;
    if (total != Rational(1))
        throw std::invalid_argument("pairwise_expectations_rational: probs must sum to 1");

    Rational e_diff(0), e_sum(0);
    for (std::size_t a = 0; a < support.size(); ++a) {
        for (std::size_t b = 0; b < support.size(); ++b) {
            Rational p = probs[a] * probs[b];
            std::vector<Rational> diff(d), sum(d);
            for (int i = 0; i < d; ++i) {
                diff[i] = support[a][i] - support[b][i];
                sum[i] = support[a][i] + support[b][i];
            }
            e_diff = e_diff + p * johnson_norm_rational(d, diff);
            e_sum = e_sum + p * johnson_norm_rational(d, sum);
        }
    }
    return {e_diff, e_sum};
}

double one_dim_identity_residual(const DiscreteDistribution& dist) {
    dist.validate();
    if (dist.dim() != 1)
        throw std::invalid_argument("one_dim_identity_residual: needs a 1-D distribution");
    const std::size_t n = dist.support.size();

    CompensatedSum e_sum, e_diff;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double p = dist.probs[a] * dist.probs[b];
            e_sum.add(p * std::abs(dist.support[a][0] + dist.support[b][0]));
            e_diff.add(p * std::abs(dist.support[a][0] - dist.support[b][0]));
        }

    // [P(X>r) - P(X<-r)]^2 is constant between consecutive |support| values
    std::vector<double> cuts{0.0};
    for (const VecD& x : dist.support) cuts.push_back(std::abs(x[0]));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    CompensatedSum integral;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double r = 0.5 * (cuts[i] + cuts[i + 1]);
        CompensatedSum bracket;
        for (std::size_t a = 0; a < n; ++a) {
            if (dist.support[a][0] > r) bracket.add(dist.probs[a]);
            if (dist.support[a][0] < -r) bracket.add(-dist.probs[a]);
        }
        double h = bracket.value();
        integral.add(h * h * (cuts[i + 1] - cuts[i]));
    }
    return e_sum.value() - e_diff.value() - 2.0 * integral.value();
}

}  // namespace normdec
