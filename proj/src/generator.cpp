#include "psmine/generator.hpp"

#include <cmath>
#include <numeric>

namespace psmine {

std::size_t GeneratorConfig::limit_for(std::size_t n) const {
    if (merge_limit != 0) return merge_limit;
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

std::size_t weighted_random_choice(std::span<const double> weights, Rng& rng) {
    if (weights.empty()) throw ContractViolation("weighted_random_choice: no candidates");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || std::isinf(w)) throw ContractViolation("weighted_random_choice: weights must be finite and >= 0");
        total += w;
    }
    if (total == 0.0) return std::uniform_int_distribution<std::size_t>(0, weights.size() - 1)(rng);

    const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        running += weights[i];
        last_positive = i;
        if (target < running) return i;
    }
    return last_positive;
}

PartialSolution merge_from(std::span<const CatalogEntry> catalog, std::size_t n, std::size_t merge_limit, Rng& rng) {
    std::vector<std::size_t> available(catalog.size());
    std::iota(available.begin(), available.end(), std::size_t{0});
    std::vector<double> weights;

    auto result = PartialSolution::universal(n);
    std::size_t added = 0;
    while (!available.empty() && added < merge_limit) {
        weights.clear();
        for (auto i : available) weights.push_back(catalog[i].score);
        const auto pick = weighted_random_choice(weights, rng);
        const auto& candidate = catalog[available[pick]].ps;
        available.erase(available.begin() + static_cast<std::ptrdiff_t>(pick));
        if (mergeable(result, candidate)) {
            result = merge(result, candidate);
            ++added;
        }
    }
    return result;
}

FullSolution fill_gaps(const SearchSpace& space, const PartialSolution& ps, Rng& rng) {
    space.validate(ps);
    std::vector<int> values(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
        values[i] = ps.is_fixed(i) ? ps[i] : std::uniform_int_distribution<int>(0, space.cardinality(i) - 1)(rng);
    return FullSolution(std::move(values));
}

std::vector<FullSolution> generate(std::span<const CatalogEntry> catalog,
                                   const SearchSpace& space,
                                   const GeneratorConfig& cfg,
                                   std::size_t count) {
    for (const auto& e : catalog) space.validate(e.ps);
    Rng rng(cfg.rng_seed);
    const std::size_t limit = cfg.limit_for(space.size());
    if (limit < 1) throw ContractViolation("merge limit must be >= 1");
    std::vector<FullSolution> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) out.push_back(fill_gaps(space, merge_from(catalog, space.size(), limit, rng), rng));
    return out;
}

}  // namespace psmine
