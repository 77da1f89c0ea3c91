#include "psmine/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace psmine {

void GAConfig::validate() const {
    if (mutation_rate < 0.0 || mutation_rate > 1.0 || crossover_rate < 0.0 || crossover_rate > 1.0)
        throw ContractViolation("GA config: rates must lie in [0, 1]");
    if (elite_count >= population_size) throw ContractViolation("GA config: elite_count must be < population_size");
    if (tournament_size < 1) throw ContractViolation("GA config: tournament_size must be >= 1");
}

void UMDAConfig::validate() const {
    if (!(selection_fraction > 0.0 && selection_fraction <= 1.0))
        throw ContractViolation("UMDA config: selection_fraction must be in (0, 1]");
    if (population_size < 2) throw ContractViolation("UMDA config: population_size must be >= 2");
}

double CountingFitness::operator()(const FullSolution& x) {
    if (used_ >= budget_) throw ContractViolation("fitness evaluation budget exceeded");
    ++used_;
    return problem_.fitness(x);
}

FullSolution random_solution(const SearchSpace& space, Rng& rng) {
    std::vector<int> values(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        values[i] = std::uniform_int_distribution<int>(0, space.cardinality(i) - 1)(rng);
    return FullSolution(std::move(values));
}

EvaluatedPopulation random_reference_population(const BenchmarkProblem& problem, std::size_t size, Rng& rng,
                                                CountingFitness* counter) {
    std::vector<FullSolution> members;
    std::vector<double> fitness;
    members.reserve(size);
    fitness.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        members.push_back(random_solution(problem.space(), rng));
        fitness.push_back(counter ? (*counter)(members.back()) : problem.fitness(members.back()));
    }
    return EvaluatedPopulation(problem.space(), std::move(members), std::move(fitness));
}

void two_point_crossover(std::vector<int>& a, std::vector<int>& b, Rng& rng) {
    std::uniform_int_distribution<std::size_t> cut(0, a.size());
    auto i = cut(rng), j = cut(rng);
    if (i > j) std::swap(i, j);
    std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(i), a.begin() + static_cast<std::ptrdiff_t>(j),
                     b.begin() + static_cast<std::ptrdiff_t>(i));
}

namespace {

std::size_t tournament(std::span<const double> fitness, std::size_t size, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, fitness.size() - 1);
    std::size_t best = pick(rng);
    for (std::size_t t = 1; t < size; ++t) {
        const auto c = pick(rng);
        if (fitness[c] > fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
    }
    return best;
}

/// One-point mutation of a full solution: the chosen position takes a
/// different value. With per_gene_mutation every position is a candidate.
void mutate_full(std::vector<int>& genome, const SearchSpace& space, const GAConfig& cfg, Rng& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto resample = [&](std::size_t i) {
        int v = std::uniform_int_distribution<int>(0, space.cardinality(i) - 2)(rng);
        if (v >= genome[i]) ++v;
        genome[i] = v;
    };
    if (cfg.per_gene_mutation) {
        for (std::size_t i = 0; i < genome.size(); ++i)
            if (coin(rng) < cfg.mutation_rate) resample(i);
    } else if (coin(rng) < cfg.mutation_rate) {
        resample(std::uniform_int_distribution<std::size_t>(0, genome.size() - 1)(rng));
    }
}

std::vector<std::size_t> elite_indices(std::span<const double> fitness, std::size_t count) {
    auto order = rank_order(fitness);
    order.resize(std::min(count, order.size()));
    return order;
}

/// Elites followed by offspring until `size` genomes.
template <class Mutate>
std::vector<std::vector<int>> breed(const std::vector<std::vector<int>>& parents, std::span<const double> fitness,
                                    const GAConfig& cfg, std::size_t size, Mutate mutate_fn, Rng& rng,
                                    std::size_t& elites_out) {
    std::vector<std::vector<int>> next;
    for (auto e : elite_indices(fitness, cfg.elite_count)) next.push_back(parents[e]);
    elites_out = next.size();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    while (next.size() < size) {
        auto a = parents[tournament(fitness, cfg.tournament_size, rng)];
        auto b = parents[tournament(fitness, cfg.tournament_size, rng)];
        if (coin(rng) < cfg.crossover_rate) two_point_crossover(a, b, rng);
        mutate_fn(a);
        mutate_fn(b);
        next.push_back(std::move(a));
        if (next.size() < size) next.push_back(std::move(b));
    }
    return next;
}

std::vector<int> genome_of(const FullSolution& x) { return {x.values().begin(), x.values().end()}; }

struct FullPopulation {
    std::vector<std::vector<int>> genomes;
    std::vector<double> fitness;
};

void track_best(RunResult& result, const std::vector<int>& genome, double fitness) {
    if (result.best.size() == 0 || fitness > result.best_fitness) {
        result.best = FullSolution(genome);
        result.best_fitness = fitness;
    }
}

/// One generation of the reference GA. Only offspring are evaluated; stops
/// early (returning a shorter population) when `evaluate` signals exhaustion.
template <class Evaluate>
FullPopulation ga_generation(const FullPopulation& current, const SearchSpace& space, const GAConfig& cfg,
                             std::size_t size, Evaluate evaluate, Rng& rng) {
    auto mutate_fn = [&](std::vector<int>& g) { mutate_full(g, space, cfg, rng); };
    std::size_t elites = 0;
    FullPopulation next;
    next.genomes = breed(current.genomes, current.fitness, cfg, size, mutate_fn, rng, elites);
    for (auto e : elite_indices(current.fitness, cfg.elite_count)) next.fitness.push_back(current.fitness[e]);
    for (std::size_t i = elites; i < next.genomes.size(); ++i) {
        double f = 0.0;
        if (!evaluate(next.genomes[i], f)) {
            next.genomes.resize(i);
            break;
        }
        next.fitness.push_back(f);
    }
    return next;
}

}  // namespace

RunResult run_full_ga(const BenchmarkProblem& problem, const GAConfig& cfg, std::size_t eval_budget) {
    cfg.validate();
    Rng rng(cfg.rng_seed);
    CountingFitness fitness(problem, eval_budget);
    RunResult result;
    auto evaluate = [&](const std::vector<int>& g, double& f) {
        if (fitness.remaining() == 0) return false;
        f = fitness(FullSolution(g));
        track_best(result, g, f);
        return true;
    };

    FullPopulation population;
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        auto g = genome_of(random_solution(problem.space(), rng));
        double f = 0.0;
        if (!evaluate(g, f)) break;
        population.genomes.push_back(std::move(g));
        population.fitness.push_back(f);
    }
    std::size_t generation = 0;
    if (!population.genomes.empty()) result.history.push_back({generation, result.best_fitness, fitness.used()});

    while (fitness.remaining() > 0 && population.genomes.size() == cfg.population_size) {
        population = ga_generation(population, problem.space(), cfg, cfg.population_size, evaluate, rng);
        result.history.push_back({++generation, result.best_fitness, fitness.used()});
    }
    result.evals_used = fitness.used();
    return result;
}

std::vector<std::vector<double>> fit_marginals(const SearchSpace& space, std::span<const FullSolution> selected,
                                               std::size_t population_size) {
    const double eps = 1.0 / static_cast<double>(population_size);
    std::vector<std::vector<double>> marginals(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        auto& p = marginals[i];
        p.assign(static_cast<std::size_t>(space.cardinality(i)), 0.0);
        for (const auto& x : selected) p[static_cast<std::size_t>(x[i])] += 1.0;
        for (auto& v : p) v = std::clamp(v / static_cast<double>(selected.size()), eps, 1.0 - eps);
        if (p.size() == 2) {
            p[0] = 1.0 - p[1];
        } else {
            const double total = std::accumulate(p.begin(), p.end(), 0.0);
            for (auto& v : p) v /= total;
        }
    }
    return marginals;
}

FullSolution sample_from_marginals(const std::vector<std::vector<double>>& marginals, Rng& rng) {
    std::vector<int> values(marginals.size());
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        std::discrete_distribution<int> d(marginals[i].begin(), marginals[i].end());
        values[i] = d(rng);
    }
    return FullSolution(std::move(values));
}

RunResult run_umda(const BenchmarkProblem& problem, const UMDAConfig& cfg, std::size_t eval_budget) {
    cfg.validate();
    Rng rng(cfg.rng_seed);
    CountingFitness fitness(problem, eval_budget);
    RunResult result;
    const auto& space = problem.space();

    std::vector<FullSolution> population;
    std::vector<double> scores;
    auto evaluate_into = [&](FullSolution x) {
        if (fitness.remaining() == 0) return false;
        const double f = fitness(x);
        track_best(result, genome_of(x), f);
        population.push_back(std::move(x));
        scores.push_back(f);
        return true;
    };

    for (std::size_t i = 0; i < cfg.population_size; ++i)
        if (!evaluate_into(random_solution(space, rng))) break;
    std::size_t generation = 0;
    if (!population.empty()) result.history.push_back({generation, result.best_fitness, fitness.used()});

    const auto selected_count = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.selection_fraction * static_cast<double>(cfg.population_size)));
    while (fitness.remaining() > 0 && population.size() == cfg.population_size) {
        const auto order = rank_order(scores);
        std::vector<FullSolution> selected;
        for (std::size_t i = 0; i < selected_count; ++i) selected.push_back(population[order[i]]);
        const auto marginals = fit_marginals(space, selected, cfg.population_size);
        for (const auto& p : marginals)
            for (double v : p) {
                result.min_marginal = std::min(result.min_marginal, v);
                result.max_marginal = std::max(result.max_marginal, v);
            }

        population.clear();
        scores.clear();
        for (std::size_t s = 0; s < cfg.population_size; ++s)
            if (!evaluate_into(sample_from_marginals(marginals, rng))) break;
        result.history.push_back({++generation, result.best_fitness, fitness.used()});
    }
    result.evals_used = fitness.used();
    return result;
}

namespace {

PartialSolution random_partial(const SearchSpace& space, Rng& rng) {
    std::vector<int> cells(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        const int symbol = std::uniform_int_distribution<int>(0, space.cardinality(i))(rng);
        cells[i] = symbol == space.cardinality(i) ? PartialSolution::kStar : symbol;
    }
    return PartialSolution(std::move(cells));
}

/// best = top(best ∪ extra, quantity), one counted batch.
void refresh_best(PsEvaluator& evaluator, std::vector<PartialSolution>& best,
                  std::span<const PartialSolution> extra, std::size_t quantity) {
    PsPool merged;
    for (const auto& ps : best) merged.insert(ps);
    for (const auto& ps : extra) merged.insert(ps);
    best.clear();
    for (auto& e : top_entries(evaluator, merged.items(), quantity)) best.push_back(std::move(e.ps));
}

bool stop_on(const StoppingRule& stop, std::span<const PartialSolution> best) {
    if (!stop.found) return false;
    return stop.satisfied(PsSet(best.begin(), best.end()));
}

}  // namespace

PSCatalog run_ps_ga(const EvaluatedPopulation& pop, const GAConfig& cfg, std::size_t qty_ret,
                    std::size_t eval_budget, const StoppingRule& stop) {
    cfg.validate();
    PSCatalog catalog;
    if (eval_budget == 0) return catalog;
    PsEvaluator evaluator(pop);
    Rng rng(cfg.rng_seed);
    const auto& space = pop.space();

    std::vector<PartialSolution> population;
    for (std::size_t i = 0; i < cfg.population_size; ++i) population.push_back(random_partial(space, rng));
    auto scores = evaluator.score(population);
    std::vector<PartialSolution> best;
    refresh_best(evaluator, best, population, qty_ret);

    // each cell resamples over {values, *}; symbol == cardinality stands for *
    auto mutate_fn = [&](std::vector<int>& g) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        auto resample = [&](std::size_t i) {
            const int symbol = std::uniform_int_distribution<int>(0, space.cardinality(i))(rng);
            g[i] = symbol == space.cardinality(i) ? PartialSolution::kStar : symbol;
        };
        if (cfg.per_gene_mutation) {
            for (std::size_t i = 0; i < g.size(); ++i)
                if (coin(rng) < cfg.mutation_rate) resample(i);
        } else if (coin(rng) < cfg.mutation_rate) {
            resample(std::uniform_int_distribution<std::size_t>(0, g.size() - 1)(rng));
        }
    };

    while (evaluator.evals_used() + best.size() < eval_budget && !stop_on(stop, best)) {
        std::vector<std::vector<int>> genomes;
        for (const auto& ps : population) genomes.emplace_back(ps.cells().begin(), ps.cells().end());
        std::size_t elites = 0;
        auto next = breed(genomes, scores, cfg, cfg.population_size, mutate_fn, rng, elites);
        population.clear();
        for (auto& g : next) population.emplace_back(std::move(g));
        scores = evaluator.score(population);
        refresh_best(evaluator, best, population, qty_ret);
    }
    catalog.entries = top_entries(evaluator, best, qty_ret);
    catalog.evals_used = evaluator.evals_used();
    return catalog;
}

PSCatalog run_ps_hill_climber(const EvaluatedPopulation& pop, std::size_t qty_ret, std::size_t eval_budget,
                              std::uint64_t rng_seed, const StoppingRule& stop) {
    PSCatalog catalog;
    if (eval_budget == 0) return catalog;
    PsEvaluator evaluator(pop);
    Rng rng(rng_seed);
    const auto& space = pop.space();
    PsPool optima;

    auto room = [&] { return evaluator.evals_used() + optima.size() + 1 < eval_budget; };

    while (room() && !stop.satisfied(optima.set())) {
        auto current = random_partial(space, rng);
        PsSet visited{current};
        while (true) {
            std::vector<PartialSolution> batch{current};
            for (std::size_t i = 0; i < space.size(); ++i) {
                for (int v = 0; v < space.cardinality(i); ++v)
                    if (current[i] != v) batch.push_back(current.with_cell(i, v));
                if (current.is_fixed(i)) batch.push_back(current.with_cell(i, PartialSolution::kStar));
            }
            const auto scores = evaluator.score(batch);
            // steepest ascent; first maximum in position order wins ties
            std::size_t best = 1;
            for (std::size_t j = 2; j < batch.size(); ++j)
                if (scores[j] > scores[best]) best = j;
            if (batch.size() < 2 || scores[best] <= scores[0] || visited.count(batch[best]) || !room()) break;
            current = batch[best];
            visited.insert(current);
        }
        optima.insert(current);
    }
    catalog.entries = top_entries(evaluator, optima.items(), qty_ret);
    catalog.evals_used = evaluator.evals_used();
    return catalog;
}

EvaluatedPopulation evolve_reference_population(const BenchmarkProblem& problem, std::size_t size,
                                                std::size_t generations, const GAConfig& cfg) {
    Rng rng(cfg.rng_seed);
    auto initial = random_reference_population(problem, size, rng);
    if (generations == 0) return initial;
    GAConfig sized = cfg;
    sized.population_size = size;
    sized.validate();

    FullPopulation population;
    for (const auto& m : initial.members()) population.genomes.push_back(genome_of(m));
    population.fitness.assign(initial.raw_fitness().begin(), initial.raw_fitness().end());
    auto evaluate = [&](const std::vector<int>& g, double& f) {
        f = problem.fitness(FullSolution(g));
        return true;
    };
    for (std::size_t gen = 0; gen < generations; ++gen)
        population = ga_generation(population, problem.space(), sized, size, evaluate, rng);

    std::vector<FullSolution> members;
    for (auto& g : population.genomes) members.emplace_back(std::move(g));
    return EvaluatedPopulation(problem.space(), std::move(members), std::move(population.fitness));
}

void write_history_csv(std::ostream& out, const std::vector<HistoryRecord>& history) {
    out << "generation,best_fitness,evals_used\n";
    for (const auto& h : history)
        out << h.generation << ',' << format_real(h.best_fitness) << ',' << h.evals_used << '\n';
}

}  // namespace psmine
