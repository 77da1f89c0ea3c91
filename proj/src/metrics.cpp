#include "psmine/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace psmine {

namespace {

void require_fixed(const PartialSolution& ps, std::size_t k) {
    if (k >= ps.size() || !ps.is_fixed(k)) throw ContractViolation("position is not fixed in the partial solution");
}

double contribution_from(double p_ab, double p_a, double p_b) {
    if (p_ab <= 0.0 || p_a <= 0.0 || p_b <= 0.0) return 0.0;
    return p_ab * std::log(p_ab / (p_a * p_b));
}

}  // namespace

std::size_t simplicity(const PartialSolution& ps) { return ps.star_count(); }

double mean_fitness(const EvaluatedPopulation& pop, const PartialSolution& ps) {
    const auto mask = pop.observation_mask(ps);
    const std::size_t count = mask.count();
    if (count == 0) return kWorstMeanFitness;
    return mask.sum_over(pop.raw_fitness()) / static_cast<double>(count);
}

double benefit(const EvaluatedPopulation& pop, const PartialSolution& ps) {
    return pop.observation_mask(ps).sum_over(pop.norm_fitness());
}

PartialSolution isolate(const PartialSolution& ps, std::size_t k) {
    require_fixed(ps, k);
    return PartialSolution::universal(ps.size()).with_cell(k, ps[k]);
}

PartialSolution exclude(const PartialSolution& ps, std::size_t k) {
    require_fixed(ps, k);
    return ps.with_cell(k, PartialSolution::kStar);
}

double contribution(const EvaluatedPopulation& pop, const PartialSolution& ps, std::size_t k) {
    require_fixed(ps, k);
    return contribution_from(benefit(pop, ps), benefit(pop, isolate(ps, k)), benefit(pop, exclude(ps, k)));
}

double atomicity(const EvaluatedPopulation& pop, const PartialSolution& ps) {
    const auto fixed = ps.fixed_positions();
    if (fixed.empty()) return 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (auto k : fixed) lo = std::min(lo, contribution(pop, ps, k));
    return lo;
}

MetricTriple evaluate_metrics(const EvaluatedPopulation& pop, const PartialSolution& ps) {
    pop.space().validate(ps);
    MetricTriple out;
    out.simplicity = ps.star_count();

    const auto fixed = ps.fixed_positions();
    const std::size_t m = fixed.size();
    if (m == 0) {
        out.mean_fitness = pop.size() == 0 ? kWorstMeanFitness : pop.total_raw() / static_cast<double>(pop.size());
        out.atomicity = 0.0;
        return out;
    }

    // prefix[j] = AND of masks of fixed[0..j), suffix[j] = AND of masks of fixed[j..m)
    thread_local std::vector<IndexMask> prefix, suffix;
    prefix.resize(m + 1);
    suffix.resize(m + 1);
    prefix[0] = IndexMask(pop.size(), true);
    for (std::size_t j = 0; j < m; ++j) {
        prefix[j + 1] = prefix[j];
        prefix[j + 1] &= pop.mask(fixed[j], ps[fixed[j]]);
    }
    suffix[m] = IndexMask(pop.size(), true);
    for (std::size_t j = m; j-- > 0;) {
        suffix[j] = suffix[j + 1];
        suffix[j] &= pop.mask(fixed[j], ps[fixed[j]]);
    }

    const IndexMask& obs = prefix[m];
    const std::size_t count = obs.count();
    if (count == 0) {
        // p_AB = 0 makes every contribution 0
        out.mean_fitness = kWorstMeanFitness;
        out.atomicity = 0.0;
        return out;
    }
    out.mean_fitness = obs.sum_over(pop.raw_fitness()) / static_cast<double>(count);
    const double p_ab = obs.sum_over(pop.norm_fitness());

    double lo = std::numeric_limits<double>::infinity();
    IndexMask excluded(pop.size());
    for (std::size_t j = 0; j < m; ++j) {
        excluded = prefix[j];
        excluded &= suffix[j + 1];
        const double p_b = excluded.sum_over(pop.norm_fitness());
        const double p_a = pop.mask_benefit(fixed[j], ps[fixed[j]]);
        lo = std::min(lo, contribution_from(p_ab, p_a, p_b));
    }
    out.atomicity = lo;
    return out;
}

std::vector<double> remap(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (is_worst(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (is_worst(values[i]))
            out[i] = 0.0;
        else if (hi > lo)
            out[i] = (values[i] - lo) / (hi - lo);
        else
            out[i] = 0.5;
    }
    return out;
}

std::vector<double> aggregate_scores(std::span<const MetricTriple> batch) {
    std::vector<double> s(batch.size()), f(batch.size()), a(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        s[i] = static_cast<double>(batch[i].simplicity);
        f[i] = batch[i].mean_fitness;
        a[i] = batch[i].atomicity;
    }
    const auto rs = remap(s), rf = remap(f), ra = remap(a);
    std::vector<double> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = (rf[i] + rs[i] + ra[i]) / 3.0;
    return out;
}

std::vector<double> aggregate_scores(const EvaluatedPopulation& pop, std::span<const PartialSolution> batch) {
    std::vector<MetricTriple> triples;
    triples.reserve(batch.size());
    for (const auto& ps : batch) triples.push_back(evaluate_metrics(pop, ps));
    return aggregate_scores(triples);
}

}  // namespace psmine
