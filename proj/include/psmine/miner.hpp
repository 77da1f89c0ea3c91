#pragma once

/// @file miner.hpp
/// @brief Archive-based partial solution miner and the catalog it produces.
///
/// The miner evolves a population of partial solutions by tournament selection
/// and local search (simplifications and/or specializations). Selected items go
/// into an exclusion archive and never re-enter the population. Scores are the
/// batch-relative aggregate of simplicity, mean fitness and atomicity, so every
/// PS placed in a scored batch costs one evaluation against the budget.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "psmine/metrics.hpp"
#include "psmine/random.hpp"
#include "psmine/search_core.hpp"

namespace psmine {

enum class LocalSearch { SimplificationOnly, SpecializationOnly, FullLocal };

std::string_view to_string(LocalSearch variant);
LocalSearch parse_local_search(std::string_view text);

struct MinerConfig {
    std::size_t population_size = 150;
    LocalSearch variant = LocalSearch::SpecializationOnly;
    bool use_archive = true;
    std::size_t qty_ret = 50;
    std::size_t eval_budget = 100000;
    std::size_t tournament_size = 2;
    /// Parents picked per generation; 0 means population_size / 3.
    std::size_t selected_count = 0;
    std::uint64_t rng_seed = 0;

    std::size_t parents_per_generation() const noexcept;
    void validate() const;
};

struct CatalogEntry {
    PartialSolution ps;
    MetricTriple metrics;
    double score = 0.0;
};

/// Ranked output of a miner: descending by score, no duplicates.
struct PSCatalog {
    std::vector<CatalogEntry> entries;
    std::size_t evals_used = 0;

    bool contains(const PartialSolution& ps) const;
    std::vector<PartialSolution> patterns() const;
};

using PsSet = std::unordered_set<PartialSolution>;

/// Optional early termination on top of budget exhaustion. The predicate sees the
/// catalog the miner would return at that point (top of the archive, or the
/// best-so-far buffer).
struct StoppingRule {
    std::function<bool(const PsSet&)> found;

    static StoppingRule budget_only() { return {}; }
    static StoppingRule all_targets(std::vector<PartialSolution> targets);

    bool satisfied(const PsSet& candidates) const { return found && found(candidates); }
};

/// Insertion-ordered set of partial solutions.
class PsPool {
public:
    bool insert(const PartialSolution& ps);
    bool contains(const PartialSolution& ps) const { return index_.count(ps) != 0; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const std::vector<PartialSolution>& items() const noexcept { return items_; }
    const PsSet& set() const noexcept { return index_; }
    void clear();

private:
    std::vector<PartialSolution> items_;
    PsSet index_;
};

/// Aggregate scorer owning the evaluation counter of one run. Metric triples are
/// cached per PS; the counter still advances once per PS in every scored batch.
class PsEvaluator {
public:
    explicit PsEvaluator(const EvaluatedPopulation& pop) : pop_(pop) {}

    PsEvaluator(const PsEvaluator&) = delete;
    PsEvaluator& operator=(const PsEvaluator&) = delete;

    const EvaluatedPopulation& population() const noexcept { return pop_; }

    std::vector<double> score(std::span<const PartialSolution> batch);
    const MetricTriple& metrics(const PartialSolution& ps);

    std::size_t evals_used() const noexcept { return evals_.load(std::memory_order_relaxed); }
    std::size_t distinct_evaluated() const noexcept { return cache_.size(); }

private:
    const EvaluatedPopulation& pop_;
    std::unordered_map<PartialSolution, MetricTriple> cache_;
    std::atomic<std::size_t> evals_{0};
};

/// Indices of `scores` sorted by descending score, ties by position.
std::vector<std::size_t> rank_order(std::span<const double> scores);

/// Scores `candidates` as one batch and returns the best `quantity` as catalog entries.
std::vector<CatalogEntry> top_entries(PsEvaluator& evaluator,
                                      std::span<const PartialSolution> candidates,
                                      std::size_t quantity);

std::vector<PartialSolution> get_init(LocalSearch variant,
                                      const EvaluatedPopulation& pop,
                                      std::size_t population_size);

/// Neighbors of ps; never includes ps itself.
std::vector<PartialSolution> get_local(LocalSearch variant,
                                       const SearchSpace& space,
                                       const PartialSolution& ps);

std::vector<PartialSolution> simplifications(const PartialSolution& ps);
std::vector<PartialSolution> specializations(const SearchSpace& space, const PartialSolution& ps);

/// What one generation did; passed to an optional observer of mine().
struct GenerationTrace {
    std::size_t generation = 0;
    std::vector<PartialSolution> selected;
    std::vector<PartialSolution> population;
    std::size_t evals_used = 0;
};

using GenerationObserver = std::function<void(const GenerationTrace&)>;

PSCatalog mine(const MinerConfig& cfg, const EvaluatedPopulation& pop, const StoppingRule& stop = {},
               const GenerationObserver& observer = {});

/// `score<TAB>meanFitness<TAB>simplicity<TAB>atomicity<TAB>pattern`, one entry per line,
/// after a `#` header line.
void write_catalog_tsv(std::ostream& out, const PSCatalog& catalog);
PSCatalog read_catalog_tsv(std::istream& in);

std::string catalog_to_json(const PSCatalog& catalog);
PSCatalog catalog_from_json(std::string_view text);

/// Shortest-round-trip decimal form used by every text output.
std::string format_real(double value);

}  // namespace psmine
