#pragma once

/// @file baselines.hpp
/// @brief Comparators: generational GA and UMDA over full solutions, GA and
/// hill climber over partial solutions, and the GA used to evolve reference
/// populations.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "psmine/benchmarks.hpp"
#include "psmine/miner.hpp"
#include "psmine/random.hpp"
#include "psmine/search_core.hpp"

namespace psmine {

struct GAConfig {
    std::size_t population_size = 150;
    std::size_t tournament_size = 2;
    std::size_t elite_count = 2;
    /// Probability that an offspring gets one position resampled.
    double mutation_rate = 0.075;
    /// Probability that a parent pair undergoes two-point crossover.
    double crossover_rate = 0.7;
    /// Apply mutation_rate per gene instead of per offspring.
    bool per_gene_mutation = false;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct UMDAConfig {
    std::size_t population_size = 150;
    double selection_fraction = 0.5;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct HistoryRecord {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    std::size_t evals_used = 0;
};

struct RunResult {
    FullSolution best;
    double best_fitness = 0.0;
    std::vector<HistoryRecord> history;
    std::size_t evals_used = 0;
    /// Extremes of every UMDA marginal fitted during the run (UMDA only).
    double min_marginal = 1.0;
    double max_marginal = 0.0;
};

/// Fitness function with a hard evaluation limit. Evaluating past the limit is a
/// contract violation, so algorithms must check remaining() first.
class CountingFitness {
public:
    CountingFitness(const BenchmarkProblem& problem, std::size_t budget) : problem_(problem), budget_(budget) {}

    double operator()(const FullSolution& x);

    std::size_t used() const noexcept { return used_; }
    std::size_t budget() const noexcept { return budget_; }
    std::size_t remaining() const noexcept { return budget_ - used_; }

private:
    const BenchmarkProblem& problem_;
    std::size_t budget_;
    std::size_t used_ = 0;
};

FullSolution random_solution(const SearchSpace& space, Rng& rng);
EvaluatedPopulation random_reference_population(const BenchmarkProblem& problem, std::size_t size, Rng& rng,
                                                CountingFitness* counter = nullptr);

/// Two-point crossover in place; cut points drawn uniformly with i <= j.
void two_point_crossover(std::vector<int>& a, std::vector<int>& b, Rng& rng);

RunResult run_full_ga(const BenchmarkProblem& problem, const GAConfig& cfg, std::size_t eval_budget);

RunResult run_umda(const BenchmarkProblem& problem, const UMDAConfig& cfg, std::size_t eval_budget);

/// Per-position value probabilities of `selected`, clamped to [1/N, 1 - 1/N].
std::vector<std::vector<double>> fit_marginals(const SearchSpace& space,
                                               std::span<const FullSolution> selected,
                                               std::size_t population_size);

/// One draw with every position sampled independently from its marginal.
FullSolution sample_from_marginals(const std::vector<std::vector<double>>& marginals, Rng& rng);

PSCatalog run_ps_ga(const EvaluatedPopulation& pop, const GAConfig& cfg, std::size_t qty_ret,
                    std::size_t eval_budget, const StoppingRule& stop = {});

PSCatalog run_ps_hill_climber(const EvaluatedPopulation& pop, std::size_t qty_ret, std::size_t eval_budget,
                              std::uint64_t rng_seed, const StoppingRule& stop = {});

/// Uniform random population evolved for `generations` generations of the
/// reference GA; 0 generations returns the random sample itself.
EvaluatedPopulation evolve_reference_population(const BenchmarkProblem& problem, std::size_t size,
                                                std::size_t generations, const GAConfig& cfg);

void write_history_csv(std::ostream& out, const std::vector<HistoryRecord>& history);

}  // namespace psmine
