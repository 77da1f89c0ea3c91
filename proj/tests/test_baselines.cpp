#include <doctest.h>

#include <sstream>

#include "psmine/baselines.hpp"

using namespace psmine;

TEST_CASE("counting fitness refuses to go past its budget") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 1);
    CountingFitness f(p, 2);
    const FullSolution x(std::vector<int>(20, 1));
    CHECK(f(x) == 5.0);
    CHECK(f(x) == 5.0);
    CHECK(f.remaining() == 0);
    CHECK_THROWS_AS(f(x), ContractViolation);
}

TEST_CASE("two-point crossover keeps genes position by position") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<int> a(10, 0), b(10, 1);
        two_point_crossover(a, b, rng);
        for (std::size_t j = 0; j < 10; ++j) CHECK(a[j] + b[j] == 1);
        // the swapped region is contiguous
        std::size_t switches = 0;
        for (std::size_t j = 1; j < 10; ++j) switches += a[j] != a[j - 1] ? 1U : 0U;
        CHECK(switches <= 2);
    }
}

TEST_CASE("full GA uses exactly its budget and never loses its best") {
    for (auto kind : {ProblemKind::RoyalRoad, ProblemKind::TrapK}) {
        const auto p = BenchmarkProblem::standard(kind, 5);
        GAConfig cfg;
        cfg.rng_seed = 5;
        for (std::size_t budget : {1u, 149u, 150u, 1000u, 4321u}) {
            const auto r = run_full_ga(p, cfg, budget);
            CHECK(r.evals_used == budget);
            CHECK(r.best_fitness == p.fitness(r.best));
            for (std::size_t i = 1; i < r.history.size(); ++i)
                CHECK(r.history[i].best_fitness >= r.history[i - 1].best_fitness);
        }
    }
}

TEST_CASE("GA with a budget below one population returns the best sampled solution") {
    const auto p = BenchmarkProblem::standard(ProblemKind::TrapK, 2);
    GAConfig cfg;
    cfg.rng_seed = 9;
    const auto r = run_full_ga(p, cfg, 40);
    CHECK(r.evals_used == 40);
    CHECK(r.best.size() == 25);
    Rng rng(9);
    double best = -1;
    for (int i = 0; i < 40; ++i) best = std::max(best, p.fitness(random_solution(p.space(), rng)));
    CHECK(r.best_fitness == best);
}

TEST_CASE("GA runs are reproducible") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 6);
    GAConfig cfg;
    cfg.rng_seed = 12;
    std::ostringstream a, b;
    write_history_csv(a, run_full_ga(p, cfg, 3000).history);
    write_history_csv(b, run_full_ga(p, cfg, 3000).history);
    CHECK(a.str() == b.str());
}

TEST_CASE("GA config validation") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 6);
    GAConfig cfg;
    cfg.elite_count = cfg.population_size;
    CHECK_THROWS_AS(run_full_ga(p, cfg, 100), ContractViolation);
    cfg = {};
    cfg.mutation_rate = 1.5;
    CHECK_THROWS_AS(run_full_ga(p, cfg, 100), ContractViolation);
}

TEST_CASE("UMDA budget and marginal bounds") {
    for (auto kind : {ProblemKind::RoyalRoadOverlaps, ProblemKind::TrapK}) {
        const auto p = BenchmarkProblem::standard(kind, 4);
        UMDAConfig cfg;
        cfg.rng_seed = 4;
        for (std::size_t budget : {10u, 150u, 1000u, 5000u}) {
            const auto r = run_umda(p, cfg, budget);
            CHECK(r.evals_used == budget);
            if (budget > cfg.population_size) {
                CHECK(r.min_marginal >= 1.0 / 150.0 - 1e-12);
                CHECK(r.max_marginal <= 1.0 - 1.0 / 150.0 + 1e-12);
            }
            for (std::size_t i = 1; i < r.history.size(); ++i)
                CHECK(r.history[i].best_fitness >= r.history[i - 1].best_fitness);
        }
    }
}

TEST_CASE("fitted marginals") {
    const auto space = SearchSpace::binary(2);
    const std::vector<FullSolution> selected{parse_full("11"), parse_full("11"), parse_full("01"), parse_full("11")};
    const auto m = fit_marginals(space, selected, 4);
    CHECK(m[0][1] == doctest::Approx(0.75));
    CHECK(m[1][1] == doctest::Approx(0.75));
    CHECK(m[1][0] == doctest::Approx(0.25));

    const auto clamped = fit_marginals(space, selected, 10);
    CHECK(clamped[1][1] == doctest::Approx(0.9));
    CHECK(clamped[1][0] == doctest::Approx(0.1));
}

TEST_CASE("sampling from certain marginals reproduces the optimum") {
    Rng rng(1);
    const std::vector<std::vector<double>> certain(6, std::vector<double>{0.0, 1.0});
    for (int i = 0; i < 50; ++i) CHECK(sample_from_marginals(certain, rng) == parse_full("111111"));
}

TEST_CASE("PS-space baselines keep to their budgets") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 3);
    Rng rng(3);
    const auto pop = random_reference_population(p, 1000, rng);
    for (std::size_t size : {50u, 150u}) {
        GAConfig cfg;
        cfg.population_size = size;
        cfg.rng_seed = size;
        for (std::size_t budget : {10u, 2000u, 9000u}) {
            const auto c = run_ps_ga(pop, cfg, 50, budget);
            CHECK(c.evals_used <= budget + 2 * size + 50);
            CHECK(c.entries.size() <= 50);
        }
    }
    CHECK(run_ps_ga(pop, GAConfig{}, 50, 0).entries.empty());
    for (std::size_t budget : {1u, 100u, 5000u}) {
        const auto c = run_ps_hill_climber(pop, 50, budget, 7);
        CHECK(c.evals_used <= budget + 1 + 40 + 50);
        CHECK(c.entries.size() <= 50);
    }
    const auto empty = run_ps_hill_climber(pop, 50, 0, 7);
    CHECK(empty.entries.empty());
    CHECK(empty.evals_used == 0);
}

TEST_CASE("hill climber stops at local optima") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 3);
    Rng rng(3);
    const auto pop = random_reference_population(p, 1000, rng);
    const auto c = run_ps_hill_climber(pop, 50, 20000, 11);
    REQUIRE_FALSE(c.entries.empty());
    // scores are relative to the neighbour batch, so a climb can also end on a
    // revisited PS; most returned PSs still beat every neighbour
    std::size_t optima = 0;
    for (const auto& e : c.entries) {
        std::vector<PartialSolution> batch{e.ps};
        for (std::size_t i = 0; i < e.ps.size(); ++i) {
            for (int v = 0; v < 2; ++v)
                if (e.ps[i] != v) batch.push_back(e.ps.with_cell(i, v));
            if (e.ps.is_fixed(i)) batch.push_back(e.ps.with_cell(i, PartialSolution::kStar));
        }
        const auto scores = aggregate_scores(pop, batch);
        double best_neighbour = 0.0;
        for (std::size_t j = 1; j < scores.size(); ++j) best_neighbour = std::max(best_neighbour, scores[j]);
        optima += scores[0] >= best_neighbour - 1e-12 ? 1U : 0U;
    }
    CHECK(optima * 2 > c.entries.size());
}

TEST_CASE("evolved reference populations") {
    const auto p = BenchmarkProblem::standard(ProblemKind::TrapK, 8);
    GAConfig cfg;
    cfg.rng_seed = 8;
    const auto gen0 = evolve_reference_population(p, 300, 0, cfg);
    Rng rng(8);
    const auto random = random_reference_population(p, 300, rng);
    CHECK(gen0.members() == random.members());
    for (std::size_t gens : {1u, 10u}) {
        const auto evolved = evolve_reference_population(p, 300, gens, cfg);
        CHECK(evolved.size() == 300);
        for (std::size_t i = 0; i < evolved.size(); ++i)
            CHECK(evolved.raw_fitness()[i] == p.fitness(evolved.members()[i]));
    }
    const auto mean = [](const EvaluatedPopulation& e) {
        double s = 0;
        for (double f : e.raw_fitness()) s += f;
        return s / static_cast<double>(e.size());
    };
    CHECK(mean(evolve_reference_population(p, 300, 20, cfg)) > mean(gen0));
}
