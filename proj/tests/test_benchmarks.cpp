#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "oracle.hpp"
#include "psmine/baselines.hpp"
#include "psmine/benchmarks.hpp"

using namespace psmine;

namespace {

FullSolution with_group(const BenchmarkProblem& p, std::size_t g, int value, int rest) {
    std::vector<int> x(p.space().size(), rest);
    for (auto pos : p.groups()[g]) x[pos] = value;
    return FullSolution(x);
}

}  // namespace

TEST_CASE("royal road values") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 3);
    CHECK(p.space().size() == 20);
    CHECK(p.fitness(FullSolution(std::vector<int>(20, 1))) == 5.0);
    CHECK(p.fitness(FullSolution(std::vector<int>(20, 0))) == 0.0);
    CHECK(p.fitness(with_group(p, 2, 1, 0)) == 1.0);
    CHECK(p.targets().size() == 5);
    CHECK(p.max_fitness() == 5.0);
    CHECK(p.is_global_optimum(FullSolution(std::vector<int>(20, 1))));
}

TEST_CASE("royal road maximum by enumeration") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 11);
    double best = 0.0;
    std::size_t optima = 0;
    for (std::uint64_t code = 0; code < (1ULL << 20); ++code) {
        const double f = p.fitness(FullSolution(oracle::bits(code, 20)));
        if (f > best) {
            best = f;
            optima = 0;
        }
        if (f == best) ++optima;
    }
    CHECK(best == p.max_fitness());
    CHECK(optima == 1);
}

TEST_CASE("royal road with overlaps") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoadOverlaps, seed);
        CHECK(p.space().size() == 15);
        CHECK(p.targets().size() == 5);
        CHECK(p.fitness(FullSolution(std::vector<int>(15, 0))) == 5.0);
        CHECK(p.fitness(with_group(p, 0, 1, 0)) <= 4.0);
        std::set<std::vector<std::size_t>> distinct(p.groups().begin(), p.groups().end());
        CHECK(distinct.size() == 5);
        for (const auto& t : p.targets()) CHECK(t.fixed_count() == 4);
    }
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoadOverlaps, 5);
    double best = 0.0;
    for (std::uint64_t code = 0; code < (1ULL << 15); ++code) {
        const auto x = oracle::bits(code, 15);
        const double f = p.fitness(FullSolution(x));
        std::size_t count = 0;
        for (const auto& t : p.targets()) count += contains(FullSolution(x), t) ? 1U : 0U;
        REQUIRE(f == static_cast<double>(count));
        REQUIRE(f <= 5.0);
        best = std::max(best, f);
    }
    CHECK(best == p.max_fitness());
    CHECK_THROWS_AS(BenchmarkProblem::royal_road_overlaps(4, 2000, 15, 1), ContractViolation);
}

TEST_CASE("trap-k values and deception") {
    CHECK(trap_subfitness(5, 5) == 5.0);
    CHECK(trap_subfitness(0, 5) == 4.0);
    for (std::size_t u = 1; u < 5; ++u) CHECK(trap_subfitness(u, 5) < trap_subfitness(u - 1, 5));
    CHECK(trap_subfitness(5, 5) > trap_subfitness(0, 5));

    const auto p = BenchmarkProblem::standard(ProblemKind::TrapK, 4);
    CHECK(p.space().size() == 25);
    CHECK(p.fitness(FullSolution(std::vector<int>(25, 0))) == 20.0);
    CHECK(p.fitness(FullSolution(std::vector<int>(25, 1))) == 25.0);
    CHECK(p.max_fitness() == 25.0);
    CHECK(p.is_global_optimum(FullSolution(std::vector<int>(25, 1))));
    CHECK_FALSE(p.is_global_optimum(FullSolution(std::vector<int>(25, 0))));
}

TEST_CASE("fitness agrees with a direct implementation") {
    Rng rng(77);
    for (auto kind : {ProblemKind::RoyalRoad, ProblemKind::RoyalRoadOverlaps, ProblemKind::TrapK}) {
        const auto p = BenchmarkProblem::standard(kind, 31);
        for (int i = 0; i < 10000; ++i) {
            const auto x = random_solution(p.space(), rng);
            REQUIRE(p.fitness(x) == oracle::fitness(p, {x.values().begin(), x.values().end()}));
        }
    }
}

TEST_CASE("groups are a shuffled partition for royal road and trap") {
    for (auto kind : {ProblemKind::RoyalRoad, ProblemKind::TrapK}) {
        const auto p = BenchmarkProblem::standard(kind, 9);
        std::vector<std::size_t> all;
        for (const auto& g : p.groups()) all.insert(all.end(), g.begin(), g.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expected(p.space().size());
        std::iota(expected.begin(), expected.end(), std::size_t{0});
        CHECK(all == expected);
        auto perm = p.permutation();
        std::sort(perm.begin(), perm.end());
        CHECK(perm == expected);
        CHECK(p.permutation() != expected);
        for (std::size_t g = 0; g < p.groups().size(); ++g)
            for (auto pos : p.groups()[g]) CHECK(p.targets()[g][pos] == 1);
    }
}

TEST_CASE("fitness is invariant under group-preserving permutations") {
    Rng rng(5);
    for (auto kind : {ProblemKind::RoyalRoad, ProblemKind::TrapK}) {
        const auto p = BenchmarkProblem::standard(kind, 13);
        const auto& groups = p.groups();
        for (int i = 0; i < 1000; ++i) {
            const auto x = random_solution(p.space(), rng);
            // swap whole groups and shuffle within each group
            std::vector<std::size_t> order(groups.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<int> y(x.size());
            for (std::size_t g = 0; g < groups.size(); ++g) {
                auto src = groups[order[g]];
                std::shuffle(src.begin(), src.end(), rng);
                for (std::size_t j = 0; j < src.size(); ++j) y[groups[g][j]] = x[src[j]];
            }
            REQUIRE(p.fitness(x) == p.fitness(FullSolution(y)));
        }
    }
}

TEST_CASE("problem JSON round trip") {
    for (auto kind : {ProblemKind::RoyalRoad, ProblemKind::RoyalRoadOverlaps, ProblemKind::TrapK}) {
        const auto p = BenchmarkProblem::standard(kind, 21);
        const auto q = BenchmarkProblem::from_json(p.to_json());
        CHECK(q.kind() == p.kind());
        CHECK(q.groups() == p.groups());
        CHECK(q.targets() == p.targets());
        CHECK(q.max_fitness() == p.max_fitness());
        CHECK(q.to_json() == p.to_json());
    }
    CHECK_THROWS(BenchmarkProblem::from_json("{\"name\": \"RR\"}"));
}

TEST_CASE("problem names") {
    CHECK(parse_problem_kind("rr") == ProblemKind::RoyalRoad);
    CHECK(parse_problem_kind("RRO") == ProblemKind::RoyalRoadOverlaps);
    CHECK(parse_problem_kind("trap") == ProblemKind::TrapK);
    CHECK(parse_problem_kind(to_string(ProblemKind::TrapK)) == ProblemKind::TrapK);
    CHECK_THROWS_AS(parse_problem_kind("onemax"), ContractViolation);
}

TEST_CASE("catalog target check") {
    const auto p = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 2);
    PSCatalog catalog;
    for (const auto& t : p.targets()) catalog.entries.push_back({t, {}, 0.5});
    CHECK(catalog_contains_all_targets(catalog, p));
    catalog.entries.push_back({PartialSolution::universal(20), {}, 0.1});
    CHECK(catalog_contains_all_targets(catalog, p));
    catalog.entries.erase(catalog.entries.begin());
    CHECK_FALSE(catalog_contains_all_targets(catalog, p));
}
