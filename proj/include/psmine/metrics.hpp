#pragma once

/// @file metrics.hpp
/// @brief Simplicity, mean fitness and atomicity of partial solutions, and the
/// batch-relative aggregate score that combines them.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "psmine/search_core.hpp"

namespace psmine {

/// Mean fitness of a PS with no observations. Sorts below every real value.
inline constexpr double kWorstMeanFitness = -std::numeric_limits<double>::infinity();

inline bool is_worst(double mean_fitness) noexcept { return mean_fitness == kWorstMeanFitness; }

struct MetricTriple {
    std::size_t simplicity = 0;
    double mean_fitness = 0.0;
    double atomicity = 0.0;

    friend bool operator==(const MetricTriple&, const MetricTriple&) = default;
};

std::size_t simplicity(const PartialSolution& ps);

double mean_fitness(const EvaluatedPopulation& pop, const PartialSolution& ps);

double benefit(const EvaluatedPopulation& pop, const PartialSolution& ps);

PartialSolution isolate(const PartialSolution& ps, std::size_t k);
PartialSolution exclude(const PartialSolution& ps, std::size_t k);

/// Mutual-information style dependence of fixed cell k on the rest of ps (nats).
double contribution(const EvaluatedPopulation& pop, const PartialSolution& ps, std::size_t k);

/// Minimum contribution over the fixed cells; 0 for the universal PS.
double atomicity(const EvaluatedPopulation& pop, const PartialSolution& ps);

/// All three metrics in one pass, sharing prefix/suffix mask intersections.
/// Agrees with the individual functions above.
MetricTriple evaluate_metrics(const EvaluatedPopulation& pop, const PartialSolution& ps);

/// Min-max remap of one metric across a batch. Constant input maps to 0.5;
/// WORST entries map to 0 and are left out of the min/max.
std::vector<double> remap(std::span<const double> values);

/// Per-item mean of the three remapped metrics. Output is in [0, 1].
std::vector<double> aggregate_scores(std::span<const MetricTriple> batch);

std::vector<double> aggregate_scores(const EvaluatedPopulation& pop,
                                     std::span<const PartialSolution> batch);

}  // namespace psmine
