#pragma once

/// @file generator.hpp
/// @brief Pick-and-merge: build full solutions by sampling catalog entries by
/// score, merging the compatible ones and filling the remaining wildcards at random.
///
/// Nothing here calls a fitness function.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "psmine/miner.hpp"
#include "psmine/random.hpp"
#include "psmine/search_core.hpp"

namespace psmine {

struct GeneratorConfig {
    /// 0 means ceil(sqrt(n)).
    std::size_t merge_limit = 0;
    std::uint64_t rng_seed = 0;

    std::size_t limit_for(std::size_t n) const;
};

/// Index drawn proportionally to `weights`; uniform when they are all zero.
std::size_t weighted_random_choice(std::span<const double> weights, Rng& rng);

PartialSolution merge_from(std::span<const CatalogEntry> catalog, std::size_t n, std::size_t merge_limit, Rng& rng);

FullSolution fill_gaps(const SearchSpace& space, const PartialSolution& ps, Rng& rng);

std::vector<FullSolution> generate(std::span<const CatalogEntry> catalog,
                                   const SearchSpace& space,
                                   const GeneratorConfig& cfg,
                                   std::size_t count);

}  // namespace psmine
