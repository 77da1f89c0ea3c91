#include <doctest.h>

#include <set>

#include "psmine/benchmarks.hpp"
#include "psmine/generator.hpp"

using namespace psmine;

namespace {

std::vector<CatalogEntry> entries(std::initializer_list<std::pair<const char*, double>> items) {
    std::vector<CatalogEntry> out;
    for (const auto& [text, score] : items) out.push_back({parse_partial(text), {}, score});
    return out;
}

std::vector<CatalogEntry> target_catalog(const BenchmarkProblem& problem) {
    std::vector<CatalogEntry> out;
    for (const auto& t : problem.targets()) out.push_back({t, {}, 0.7});
    return out;
}

}  // namespace

TEST_CASE("merge limit default") {
    GeneratorConfig cfg;
    CHECK(cfg.limit_for(20) == 5);
    CHECK(cfg.limit_for(25) == 5);
    CHECK(cfg.limit_for(15) == 4);
    CHECK(cfg.limit_for(1) == 1);
    cfg.merge_limit = 2;
    CHECK(cfg.limit_for(100) == 2);
}

TEST_CASE("weighted random choice") {
    Rng rng(1);
    const std::vector<double> single{0.3};
    CHECK(weighted_random_choice(single, rng) == 0);
    const std::vector<double> first_only{1.0, 0.0};
    for (int i = 0; i < 200; ++i) CHECK(weighted_random_choice(first_only, rng) == 0);

    const std::vector<double> w{1.0, 3.0};
    int second = 0;
    for (int i = 0; i < 10000; ++i) second += weighted_random_choice(w, rng) == 1 ? 1 : 0;
    CHECK(second / 10000.0 == doctest::Approx(0.75).epsilon(0.02 / 0.75));

    const std::vector<double> zeros{0.0, 0.0, 0.0, 0.0};
    std::set<std::size_t> seen;
    for (int i = 0; i < 200; ++i) seen.insert(weighted_random_choice(zeros, rng));
    CHECK(seen.size() == 4);

    const std::vector<double> negative{0.5, -0.1};
    CHECK_THROWS_AS(weighted_random_choice(negative, rng), ContractViolation);
    CHECK_THROWS_AS(weighted_random_choice(std::vector<double>{}, rng), ContractViolation);
}

TEST_CASE("merge_from") {
    Rng rng(2);
    const auto both = entries({{"1***", 0.5}, {"*1**", 0.5}});
    CHECK(merge_from(both, 4, 2, rng) == parse_partial("11**"));

    const auto conflict = entries({{"1***", 0.5}, {"0***", 0.5}});
    std::set<std::string> seen;
    for (int i = 0; i < 100; ++i) seen.insert(to_string(merge_from(conflict, 4, 2, rng)));
    CHECK(seen == std::set<std::string>{"1***", "0***"});

    CHECK(merge_from({}, 4, 3, rng) == PartialSolution::universal(4));

    // a failed merge consumes the candidate but not the limit
    const auto three = entries({{"1***", 1.0}, {"0***", 1.0}, {"**1*", 1.0}});
    for (int i = 0; i < 50; ++i) CHECK(merge_from(three, 4, 2, rng).fixed_count() == 2);
}

TEST_CASE("fill_gaps") {
    Rng rng(3);
    const auto space = SearchSpace::binary(3);
    CHECK(fill_gaps(space, parse_partial("101"), rng) == parse_full("101"));
    std::set<std::string> seen;
    for (int i = 0; i < 200; ++i) {
        const auto x = fill_gaps(space, parse_partial("1*1"), rng);
        CHECK(contains(x, parse_partial("1*1")));
        seen.insert(to_string(x));
    }
    CHECK(seen == std::set<std::string>{"101", "111"});

    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += fill_gaps(SearchSpace::binary(1), parse_partial("*"), rng)[0];
    CHECK(ones / 10000.0 == doctest::Approx(0.5).epsilon(0.02 / 0.5));

    const SearchSpace wide({5, 5});
    for (int i = 0; i < 100; ++i) {
        const auto x = fill_gaps(wide, PartialSolution::universal(2), rng);
        CHECK(x[0] < 5);
        CHECK(x[1] < 5);
    }
}

TEST_CASE("target catalogs generate the global optimum") {
    for (auto kind : {ProblemKind::RoyalRoad, ProblemKind::TrapK}) {
        const auto problem = BenchmarkProblem::standard(kind, 17);
        GeneratorConfig cfg;
        cfg.rng_seed = 4;
        const auto catalog = target_catalog(problem);
        for (const auto& x : generate(catalog, problem.space(), cfg, 50)) CHECK(problem.is_global_optimum(x));
    }
}

TEST_CASE("generate") {
    const auto problem = BenchmarkProblem::standard(ProblemKind::RoyalRoad, 3);
    const auto catalog = entries({{"1111****************", 0.9}, {"0000****************", 0.4}, {"****1***************", 0.1}});
    GeneratorConfig cfg;
    cfg.rng_seed = 7;
    CHECK(generate(catalog, problem.space(), cfg, 0).empty());

    const auto a = generate(catalog, problem.space(), cfg, 30);
    const auto b = generate(catalog, problem.space(), cfg, 30);
    CHECK(a == b);
    for (const auto& x : a) {
        CHECK(x.size() == 20);
        CHECK((contains(x, catalog[0].ps) || contains(x, catalog[1].ps) || contains(x, catalog[2].ps)));
    }
    CHECK_THROWS_AS(generate(catalog, SearchSpace::binary(19), cfg, 1), ContractViolation);
}
