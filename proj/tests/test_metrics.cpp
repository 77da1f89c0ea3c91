#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "psmine/metrics.hpp"

using namespace psmine;

namespace {

std::vector<int> cells_of(const PartialSolution& ps) { return {ps.cells().begin(), ps.cells().end()}; }

/// Every PS over n cells with the given cardinality, universal first.
std::vector<PartialSolution> all_partials(std::size_t n, int card) {
    std::vector<PartialSolution> out;
    std::vector<int> cells(n, -1);
    while (true) {
        out.emplace_back(cells);
        std::size_t i = 0;
        while (i < n && cells[i] == card - 1) cells[i++] = -1;
        if (i == n) break;
        ++cells[i];
    }
    return out;
}

/// Two adjacent royal-road groups of 4 bits over every 8-bit string.
EvaluatedPopulation royal_road_8() {
    std::vector<FullSolution> members;
    std::vector<double> raw;
    for (std::uint64_t code = 0; code < 256; ++code) {
        const auto x = oracle::bits(code, 8);
        double f = 0;
        for (int g = 0; g < 2; ++g) {
            bool full = true;
            for (int j = 0; j < 4; ++j) full = full && x[g * 4 + j] == 1;
            f += full ? 1.0 : 0.0;
        }
        members.emplace_back(x);
        raw.push_back(f);
    }
    return EvaluatedPopulation(SearchSpace::binary(8), members, raw);
}

struct RandomPop {
    EvaluatedPopulation pop;
    oracle::Population plain;
};

RandomPop random_pop(std::size_t n, int card, std::size_t size, std::uint64_t seed, bool integer_fitness) {
    std::mt19937_64 rng(seed);
    oracle::Population plain;
    std::vector<FullSolution> members;
    for (std::size_t i = 0; i < size; ++i) {
        std::vector<int> x(n);
        for (auto& v : x) v = std::uniform_int_distribution<int>(0, card - 1)(rng);
        const double f = integer_fitness ? std::uniform_int_distribution<int>(0, 4)(rng)
                                         : std::uniform_real_distribution<double>(-2.0, 7.0)(rng);
        plain.members.push_back(x);
        plain.raw.push_back(f);
        members.emplace_back(x);
    }
    return {EvaluatedPopulation(SearchSpace(std::vector<int>(n, card)), members, plain.raw), plain};
}

}  // namespace

TEST_CASE("simplicity") {
    CHECK(simplicity(PartialSolution::universal(5)) == 5);
    CHECK(simplicity(parse_partial("0110")) == 0);
    CHECK(simplicity(parse_partial("1**1")) == 2);
}

TEST_CASE("mean fitness and benefit on a single royal road group") {
    std::vector<FullSolution> members;
    std::vector<double> raw;
    for (std::uint64_t code = 0; code < 16; ++code) {
        members.emplace_back(oracle::bits(code, 4));
        raw.push_back(code == 15 ? 1.0 : 0.0);
    }
    EvaluatedPopulation pop(SearchSpace::binary(4), members, raw);
    CHECK(mean_fitness(pop, parse_partial("1111")) == doctest::Approx(1.0));
    CHECK(mean_fitness(pop, PartialSolution::universal(4)) == doctest::Approx(1.0 / 16.0));
    CHECK(benefit(pop, PartialSolution::universal(4)) == doctest::Approx(1.0));
    CHECK(benefit(pop, parse_partial("0***")) == doctest::Approx(0.0));

    EvaluatedPopulation tiny(SearchSpace::binary(2), {parse_full("00")}, {1.0});
    CHECK(is_worst(mean_fitness(tiny, parse_partial("1*"))));
    CHECK(benefit(tiny, parse_partial("1*")) == 0.0);
}

TEST_CASE("isolate and exclude") {
    const auto ps = parse_partial("111**1");
    CHECK(isolate(ps, 0) == parse_partial("1*****"));
    CHECK(exclude(ps, 0) == parse_partial("*11**1"));
    CHECK(isolate(parse_partial("1*"), 0) == parse_partial("1*"));
    CHECK(exclude(parse_partial("1*"), 0) == PartialSolution::universal(2));
    CHECK(merge(isolate(ps, 2), exclude(ps, 2)) == ps);
    CHECK_THROWS_AS(isolate(ps, 3), ContractViolation);
    CHECK_THROWS_AS(contribution(royal_road_8(), parse_partial("1*******"), 1), ContractViolation);
}

TEST_CASE("contribution and atomicity on two royal road groups") {
    const auto pop = royal_road_8();
    const auto inside = parse_partial("1111****");
    const auto spanning = parse_partial("1111***1");
    for (std::size_t k = 0; k < 4; ++k) CHECK(contribution(pop, inside, k) > 0.0);
    for (std::size_t k = 0; k < 4; ++k) CHECK(contribution(pop, spanning, 7) <= contribution(pop, spanning, k));
    CHECK(atomicity(pop, inside) > atomicity(pop, spanning));
    CHECK(atomicity(pop, PartialSolution::universal(8)) == 0.0);
    CHECK(atomicity(pop, parse_partial("***1****")) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(contribution(pop, parse_partial("0*******"), 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("metrics match the direct transcription on every small PS") {
    struct Case {
        std::size_t n;
        int card;
        std::size_t size;
        bool integer_fitness;
    };
    const Case cases[] = {{4, 2, 16, true}, {5, 2, 40, false}, {6, 2, 64, true}, {6, 2, 64, false}, {4, 3, 50, false}};
    std::uint64_t seed = 1;
    for (const auto& c : cases) {
        const auto [pop, plain] = random_pop(c.n, c.card, c.size, seed++, c.integer_fitness);
        for (const auto& ps : all_partials(c.n, c.card)) {
            const auto cells = cells_of(ps);
            const auto fast = evaluate_metrics(pop, ps);
            REQUIRE(fast.simplicity == static_cast<std::size_t>(oracle::simplicity(cells)));
            const double mf = oracle::mean_fitness(plain, cells);
            if (std::isinf(mf)) {
                REQUIRE(is_worst(fast.mean_fitness));
                REQUIRE(is_worst(mean_fitness(pop, ps)));
            } else {
                REQUIRE(std::abs(fast.mean_fitness - mf) < 1e-9);
                REQUIRE(std::abs(mean_fitness(pop, ps) - mf) < 1e-9);
            }
            REQUIRE(std::abs(benefit(pop, ps) - oracle::benefit(plain, cells)) < 1e-9);
            for (auto k : ps.fixed_positions())
                REQUIRE(std::abs(contribution(pop, ps, k) - oracle::contribution(plain, cells, k)) < 1e-9);
            const double at = oracle::atomicity(plain, cells);
            REQUIRE(std::abs(fast.atomicity - at) < 1e-9);
            REQUIRE(std::abs(atomicity(pop, ps) - at) < 1e-9);
            if (ps.fixed_count() == 1) REQUIRE(std::abs(fast.atomicity) < 1e-9);
        }
        REQUIRE(std::abs(benefit(pop, PartialSolution::universal(c.n)) - 1.0) < 1e-9);
    }
}

TEST_CASE("benefit shrinks under merge and splits across a position") {
    const auto [pop, plain] = random_pop(6, 2, 64, 99, false);
    std::mt19937_64 rng(3);
    const auto every = all_partials(6, 2);
    std::uniform_int_distribution<std::size_t> pick(0, every.size() - 1);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto& a = every[pick(rng)];
        const auto& b = every[pick(rng)];
        if (!mergeable(a, b)) continue;
        const double m = benefit(pop, merge(a, b));
        CHECK(m <= std::min(benefit(pop, a), benefit(pop, b)) + 1e-12);
    }
    for (const auto& ps : every) {
        const double b = benefit(pop, ps);
        CHECK(b >= -1e-12);
        CHECK(b <= 1.0 + 1e-9);
    }
    // the observations of 0***** and 1***** partition the population
    CHECK(benefit(pop, parse_partial("0*****")) + benefit(pop, parse_partial("1*****")) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("remap") {
    const std::vector<double> v{2.0, 4.0, 3.0};
    CHECK(remap(v) == std::vector<double>{0.0, 1.0, 0.5});
    const std::vector<double> flat{7.0, 7.0};
    CHECK(remap(flat) == std::vector<double>{0.5, 0.5});
    const std::vector<double> with_worst{kWorstMeanFitness, 1.0, 3.0};
    CHECK(remap(with_worst) == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("aggregate scores") {
    const std::vector<MetricTriple> one{{3, 1.5, 0.2}};
    CHECK(aggregate_scores(one)[0] == doctest::Approx(0.5));

    const std::vector<MetricTriple> dominated{{5, 2.0, 0.3}, {2, 1.0, 0.1}, {3, 1.5, 0.2}};
    CHECK(aggregate_scores(dominated)[0] == doctest::Approx(1.0));
    CHECK(aggregate_scores(dominated)[1] == doctest::Approx(0.0));

    const std::vector<MetricTriple> opposite{{5, 1.0, 0.2}, {2, 3.0, 0.2}};
    const auto s = aggregate_scores(opposite);
    CHECK(s[0] == doctest::Approx(0.5));
    CHECK(s[1] == doctest::Approx(0.5));
}

TEST_CASE("aggregate scores match the oracle and stay in range") {
    const auto [pop, plain] = random_pop(6, 2, 64, 7, false);
    const auto every = all_partials(6, 2);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> pick(0, every.size() - 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PartialSolution> batch;
        const auto size = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        for (std::size_t i = 0; i < size; ++i) batch.push_back(every[pick(rng)]);
        const auto scores = aggregate_scores(pop, batch);

        std::vector<double> s, m, a;
        for (const auto& ps : batch) {
            const auto cells = cells_of(ps);
            s.push_back(oracle::simplicity(cells));
            m.push_back(oracle::mean_fitness(plain, cells));
            a.push_back(oracle::atomicity(plain, cells));
        }
        const auto rs = oracle::remap(s), rm = oracle::remap(m), ra = oracle::remap(a);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            REQUIRE(scores[i] >= 0.0);
            REQUIRE(scores[i] <= 1.0);
            REQUIRE(std::abs(scores[i] - (rs[i] + rm[i] + ra[i]) / 3.0) < 1e-9);
        }
    }
}

TEST_CASE("batch argmax ignores positive affine rescaling of fitness") {
    const auto [pop, plain] = random_pop(6, 2, 64, 21, false);
    std::vector<double> scaled;
    for (double f : plain.raw) scaled.push_back(3.5 * f - 11.0);
    EvaluatedPopulation rescaled(pop.space(), pop.members(), scaled);
    const auto every = all_partials(6, 2);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> pick(0, every.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<PartialSolution> batch;
        for (int i = 0; i < 12; ++i) batch.push_back(every[pick(rng)]);
        const auto a = aggregate_scores(pop, batch);
        const auto b = aggregate_scores(rescaled, batch);
        for (std::size_t i = 0; i < batch.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
}
