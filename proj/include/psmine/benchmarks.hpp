#pragma once

/// @file benchmarks.hpp
/// @brief Royal Road, Royal Road with Overlaps and Trap-k, each with shuffled
/// variable positions, known target partial solutions and an exact
/// global-optimum predicate.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psmine/miner.hpp"
#include "psmine/search_core.hpp"

namespace psmine {

enum class ProblemKind { RoyalRoad, RoyalRoadOverlaps, TrapK };

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view text);

class BenchmarkProblem {
public:
    static BenchmarkProblem royal_road(std::size_t k, std::size_t num_groups, std::uint64_t rng_seed);
    static BenchmarkProblem royal_road_overlaps(std::size_t k, std::size_t q, std::size_t l, std::uint64_t rng_seed);
    static BenchmarkProblem trap_k(std::size_t k, std::size_t num_groups, std::uint64_t rng_seed);

    /// The parameter set used in every experiment: RR(4,5), RRO(4,5,15), Trap(5,5).
    static BenchmarkProblem standard(ProblemKind kind, std::uint64_t rng_seed);

    ProblemKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return to_string(kind_); }
    const SearchSpace& space() const noexcept { return space_; }
    std::size_t group_size() const noexcept { return k_; }
    std::uint64_t seed() const noexcept { return seed_; }

    double fitness(const FullSolution& x) const;
    bool is_global_optimum(const FullSolution& x) const { return fitness(x) == max_fitness_; }
    double max_fitness() const noexcept { return max_fitness_; }

    const std::vector<PartialSolution>& targets() const noexcept { return targets_; }
    const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }
    /// permutation[j] is the variable that plays role j of the unshuffled layout.
    const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

    std::string to_json() const;
    static BenchmarkProblem from_json(std::string_view text);

private:
    BenchmarkProblem(ProblemKind kind, std::size_t n, std::size_t k, std::uint64_t seed,
                     std::vector<std::vector<std::size_t>> groups, std::vector<std::size_t> permutation);

    double group_fitness_sum(std::span<const int> values) const;

    ProblemKind kind_;
    SearchSpace space_;
    std::size_t k_;
    std::uint64_t seed_;
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<std::size_t> permutation_;
    std::vector<PartialSolution> targets_;
    double max_fitness_ = 0.0;
};

/// Trap sub-function of one group with unitation u.
double trap_subfitness(std::size_t u, std::size_t k);

bool catalog_contains_all_targets(const PSCatalog& catalog, const BenchmarkProblem& problem);

}  // namespace psmine
