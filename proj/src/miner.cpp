#include "psmine/miner.hpp"

#include <algorithm>
#include <numeric>

namespace psmine {

std::string_view to_string(LocalSearch variant) {
    switch (variant) {
        case LocalSearch::SimplificationOnly: return "simplification";
        case LocalSearch::SpecializationOnly: return "specialization";
        case LocalSearch::FullLocal: return "full";
    }
    return "?";
}

LocalSearch parse_local_search(std::string_view text) {
    if (text == "simplification" || text == "simplification-only") return LocalSearch::SimplificationOnly;
    if (text == "specialization" || text == "specialization-only") return LocalSearch::SpecializationOnly;
    if (text == "full" || text == "full-local") return LocalSearch::FullLocal;
    throw ContractViolation("unknown local search variant '" + std::string(text) + "'");
}

std::size_t MinerConfig::parents_per_generation() const noexcept {
    return selected_count != 0 ? selected_count : std::max<std::size_t>(1, population_size / 3);
}

void MinerConfig::validate() const {
    if (tournament_size < 2 || population_size < tournament_size)
        throw ContractViolation("miner config: need population_size >= tournament_size >= 2");
    if (qty_ret < 1) throw ContractViolation("miner config: qty_ret must be >= 1");
}

bool PSCatalog::contains(const PartialSolution& ps) const {
    return std::any_of(entries.begin(), entries.end(), [&](const CatalogEntry& e) { return e.ps == ps; });
}

std::vector<PartialSolution> PSCatalog::patterns() const {
    std::vector<PartialSolution> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.ps);
    return out;
}

StoppingRule StoppingRule::all_targets(std::vector<PartialSolution> targets) {
    return {[targets = std::move(targets)](const PsSet& found) {
        return std::all_of(targets.begin(), targets.end(),
                           [&](const PartialSolution& t) { return found.count(t) != 0; });
    }};
}

bool PsPool::insert(const PartialSolution& ps) {
    if (!index_.insert(ps).second) return false;
    items_.push_back(ps);
    return true;
}

void PsPool::clear() {
    items_.clear();
    index_.clear();
}

const MetricTriple& PsEvaluator::metrics(const PartialSolution& ps) {
    auto it = cache_.find(ps);
    if (it == cache_.end()) it = cache_.emplace(ps, evaluate_metrics(pop_, ps)).first;
    return it->second;
}

std::vector<double> PsEvaluator::score(std::span<const PartialSolution> batch) {
    std::vector<MetricTriple> triples;
    triples.reserve(batch.size());
    for (const auto& ps : batch) triples.push_back(metrics(ps));
    evals_.fetch_add(batch.size(), std::memory_order_relaxed);
    return aggregate_scores(triples);
}

std::vector<std::size_t> rank_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

std::vector<CatalogEntry> top_entries(PsEvaluator& evaluator,
                                      std::span<const PartialSolution> candidates,
                                      std::size_t quantity) {
    if (candidates.empty()) return {};
    const auto scores = evaluator.score(candidates);
    const auto order = rank_order(scores);
    std::vector<CatalogEntry> out;
    for (std::size_t i = 0; i < order.size() && out.size() < quantity; ++i) {
        const auto& ps = candidates[order[i]];
        out.push_back({ps, evaluator.metrics(ps), scores[order[i]]});
    }
    return out;
}

std::vector<PartialSolution> simplifications(const PartialSolution& ps) {
    std::vector<PartialSolution> out;
    for (std::size_t k = 0; k < ps.size(); ++k)
        if (ps.is_fixed(k)) out.push_back(ps.with_cell(k, PartialSolution::kStar));
    return out;
}

std::vector<PartialSolution> specializations(const SearchSpace& space, const PartialSolution& ps) {
    std::vector<PartialSolution> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps.is_fixed(i)) continue;
        for (int v = 0; v < space.cardinality(i); ++v) out.push_back(ps.with_cell(i, v));
    }
    return out;
}

std::vector<PartialSolution> get_local(LocalSearch variant, const SearchSpace& space, const PartialSolution& ps) {
    switch (variant) {
        case LocalSearch::SimplificationOnly: return simplifications(ps);
        case LocalSearch::SpecializationOnly: return specializations(space, ps);
        case LocalSearch::FullLocal: {
            auto out = simplifications(ps);
            auto more = specializations(space, ps);
            out.insert(out.end(), more.begin(), more.end());
            return out;
        }
    }
    return {};
}

std::vector<PartialSolution> get_init(LocalSearch variant, const EvaluatedPopulation& pop, std::size_t population_size) {
    PsPool init;
    if (variant != LocalSearch::SimplificationOnly) init.insert(PartialSolution::universal(pop.space().size()));
    if (variant != LocalSearch::SpecializationOnly) {
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto raw = pop.raw_fitness();
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });
        std::size_t taken = 0;
        for (std::size_t i = 0; i < order.size() && taken < population_size; ++i)
            if (init.insert(from_full(pop.members()[order[i]]))) ++taken;
    }
    return init.items();
}

namespace {

/// Size-2 (or larger) tournaments; each winner leaves the pool.
std::vector<std::size_t> tournament_select(std::span<const double> scores,
                                           std::size_t tournament_size,
                                           std::size_t count,
                                           Rng& rng) {
    std::vector<std::size_t> pool(scores.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> winners;
    count = std::min(count, pool.size());
    while (winners.size() < count) {
        const std::size_t entrants = std::min(tournament_size, pool.size());
        // partial Fisher-Yates over the pool picks distinct entrants
        std::size_t best_slot = pool.size();
        for (std::size_t e = 0; e < entrants; ++e) {
            std::uniform_int_distribution<std::size_t> pick(e, pool.size() - 1);
            std::swap(pool[e], pool[pick(rng)]);
            if (best_slot == pool.size() || scores[pool[e]] > scores[pool[best_slot]] ||
                (scores[pool[e]] == scores[pool[best_slot]] && pool[e] < pool[best_slot]))
                best_slot = e;
        }
        winners.push_back(pool[best_slot]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_slot));
    }
    return winners;
}

struct ScoredPopulation {
    std::vector<PartialSolution> items;
    std::vector<double> scores;
};

ScoredPopulation truncate(PsEvaluator& evaluator, std::vector<PartialSolution> candidates, std::size_t size) {
    ScoredPopulation out;
    if (candidates.empty()) return out;
    const auto scores = evaluator.score(candidates);
    const auto order = rank_order(scores);
    for (std::size_t i = 0; i < order.size() && i < size; ++i) {
        out.items.push_back(std::move(candidates[order[i]]));
        out.scores.push_back(scores[order[i]]);
    }
    return out;
}

}  // namespace

PSCatalog mine(const MinerConfig& cfg, const EvaluatedPopulation& pop, const StoppingRule& stop,
               const GenerationObserver& observer) {
    cfg.validate();
    PSCatalog catalog;
    if (cfg.eval_budget == 0) return catalog;

    PsEvaluator evaluator(pop);
    Rng rng(cfg.rng_seed);
    const std::size_t parents = cfg.parents_per_generation();

    auto population = truncate(evaluator, get_init(cfg.variant, pop, cfg.population_size), cfg.population_size);
    PsPool archive;
    std::vector<PartialSolution> best;  // all-time best buffer when the archive is off

    auto refresh_best = [&] {
        PsPool merged;
        for (const auto& ps : best) merged.insert(ps);
        for (const auto& ps : population.items) merged.insert(ps);
        best.clear();
        for (auto& e : top_entries(evaluator, merged.items(), cfg.qty_ret)) best.push_back(std::move(e.ps));
    };
    if (!cfg.use_archive) refresh_best();

    // The predicate sees the catalog the run would return right now. Ranking the
    // archive here is an oracle check of the experiment, so it is not counted.
    auto stop_now = [&] {
        if (!stop.found) return false;
        if (!cfg.use_archive) return stop.satisfied(PsSet(best.begin(), best.end()));
        if (!stop.satisfied(archive.set())) return false;
        std::vector<MetricTriple> triples;
        for (const auto& ps : archive.items()) triples.push_back(evaluator.metrics(ps));
        const auto scores = aggregate_scores(triples);
        const auto order = rank_order(scores);
        PsSet would_return;
        for (std::size_t i = 0; i < order.size() && i < cfg.qty_ret; ++i) would_return.insert(archive.items()[order[i]]);
        return stop.satisfied(would_return);
    };
    // room kept for the final ranking pass, which is also counted
    auto reserve = [&] { return cfg.use_archive ? archive.size() + parents : best.size(); };

    std::size_t generation = 0;
    while (!population.items.empty() && evaluator.evals_used() + reserve() < cfg.eval_budget && !stop_now()) {
        const auto winners = tournament_select(population.scores, cfg.tournament_size, parents, rng);
        std::vector<PartialSolution> selected;
        for (auto w : winners) selected.push_back(population.items[w]);

        PsPool localities;
        for (const auto& sel : selected)
            for (auto& ps : get_local(cfg.variant, pop.space(), sel)) localities.insert(ps);

        if (cfg.use_archive)
            for (const auto& sel : selected) archive.insert(sel);

        PsPool next;
        for (const auto& ps : population.items)
            if (!archive.contains(ps)) next.insert(ps);
        for (const auto& ps : localities.items())
            if (!archive.contains(ps)) next.insert(ps);

        population = truncate(evaluator, next.items(), cfg.population_size);
        if (!cfg.use_archive) refresh_best();
        ++generation;
        if (observer) {
            observer(GenerationTrace{generation, std::move(selected), population.items, evaluator.evals_used()});
        }
    }

    const std::vector<PartialSolution>* finalists = &best;
    if (cfg.use_archive) finalists = archive.empty() ? &population.items : &archive.items();
    catalog.entries = top_entries(evaluator, *finalists, cfg.qty_ret);
    catalog.evals_used = evaluator.evals_used();
    return catalog;
}

}  // namespace psmine
