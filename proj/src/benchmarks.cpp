#include "psmine/benchmarks.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "psmine/random.hpp"

namespace psmine {

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::RoyalRoad: return "RR";
        case ProblemKind::RoyalRoadOverlaps: return "RRO";
        case ProblemKind::TrapK: return "Trap-k";
    }
    return "?";
}

ProblemKind parse_problem_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "rr" || lower == "royal_road") return ProblemKind::RoyalRoad;
    if (lower == "rro" || lower == "royal_road_overlaps") return ProblemKind::RoyalRoadOverlaps;
    if (lower == "trap" || lower == "trap-k" || lower == "trapk" || lower == "trap_k") return ProblemKind::TrapK;
    throw ContractViolation("unknown problem '" + std::string(text) + "'");
}

double trap_subfitness(std::size_t u, std::size_t k) {
    if (u > k) throw ContractViolation("trap: unitation exceeds group size");
    return u == k ? static_cast<double>(k) : static_cast<double>(k - u - 1);
}

namespace {

std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& perm, std::size_t k, std::size_t count) {
    std::vector<std::vector<std::size_t>> groups(count);
    for (std::size_t g = 0; g < count; ++g)
        groups[g].assign(perm.begin() + static_cast<std::ptrdiff_t>(g * k),
                         perm.begin() + static_cast<std::ptrdiff_t>((g + 1) * k));
    return groups;
}

std::vector<std::size_t> shuffled_positions(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

BenchmarkProblem::BenchmarkProblem(ProblemKind kind, std::size_t n, std::size_t k, std::uint64_t seed,
                                   std::vector<std::vector<std::size_t>> groups, std::vector<std::size_t> permutation)
    : kind_(kind), space_(SearchSpace::binary(n)), k_(k), seed_(seed), groups_(std::move(groups)),
      permutation_(std::move(permutation)) {
    if (k_ == 0 || groups_.empty()) throw ContractViolation("benchmark needs k >= 1 and at least one group");
    const int target_value = kind_ == ProblemKind::RoyalRoadOverlaps ? 0 : 1;
    for (auto& g : groups_) {
        if (g.size() != k_) throw ContractViolation("every group must have exactly k positions");
        std::sort(g.begin(), g.end());
        if (std::adjacent_find(g.begin(), g.end()) != g.end() || g.back() >= n)
            throw ContractViolation("group positions must be distinct and in range");
        auto ps = PartialSolution::universal(n);
        for (auto p : g) ps = ps.with_cell(p, target_value);
        targets_.push_back(std::move(ps));
    }

    switch (kind_) {
        case ProblemKind::RoyalRoad: max_fitness_ = static_cast<double>(groups_.size()); break;
        case ProblemKind::TrapK: max_fitness_ = static_cast<double>(groups_.size() * k_); break;
        case ProblemKind::RoyalRoadOverlaps: {
            if (n > 24) throw ContractViolation("RRO optimum enumeration limited to 24 variables");
            std::vector<int> values(n);
            double best = 0.0;
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
                for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<int>((bits >> i) & 1U);
                best = std::max(best, group_fitness_sum(values));
            }
            max_fitness_ = best;
            break;
        }
    }
}

BenchmarkProblem BenchmarkProblem::royal_road(std::size_t k, std::size_t num_groups, std::uint64_t rng_seed) {
    auto perm = shuffled_positions(k * num_groups, rng_seed);
    auto groups = chunk(perm, k, num_groups);
    return BenchmarkProblem(ProblemKind::RoyalRoad, k * num_groups, k, rng_seed, std::move(groups), std::move(perm));
}

BenchmarkProblem BenchmarkProblem::trap_k(std::size_t k, std::size_t num_groups, std::uint64_t rng_seed) {
    auto perm = shuffled_positions(k * num_groups, rng_seed);
    auto groups = chunk(perm, k, num_groups);
    return BenchmarkProblem(ProblemKind::TrapK, k * num_groups, k, rng_seed, std::move(groups), std::move(perm));
}

BenchmarkProblem BenchmarkProblem::royal_road_overlaps(std::size_t k, std::size_t q, std::size_t l, std::uint64_t rng_seed) {
    if (k == 0 || k > l) throw ContractViolation("RRO needs 1 <= k <= l");
    if (static_cast<double>(q) > binomial(l, k)) throw ContractViolation("RRO: not enough distinct groups of size k");

    constexpr int kStreams = 16;
    for (int stream = 0; stream < kStreams; ++stream) {
        Rng rng(derive_seed(rng_seed, "rro-groups", static_cast<std::uint64_t>(stream)));
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::vector<std::size_t>> groups;
        std::vector<std::size_t> positions(l);
        std::size_t attempts = 0;
        while (groups.size() < q && attempts < 1000 * q) {
            ++attempts;
            std::iota(positions.begin(), positions.end(), std::size_t{0});
            std::shuffle(positions.begin(), positions.end(), rng);
            std::vector<std::size_t> g(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(g.begin(), g.end());
            if (seen.insert(g).second) groups.push_back(std::move(g));
        }
        if (groups.size() == q) {
            std::vector<std::size_t> identity(l);
            std::iota(identity.begin(), identity.end(), std::size_t{0});
            return BenchmarkProblem(ProblemKind::RoyalRoadOverlaps, l, k, rng_seed, std::move(groups), std::move(identity));
        }
    }
    throw ContractViolation("RRO: could not place distinct groups");
}

BenchmarkProblem BenchmarkProblem::standard(ProblemKind kind, std::uint64_t rng_seed) {
    switch (kind) {
        case ProblemKind::RoyalRoad: return royal_road(4, 5, rng_seed);
        case ProblemKind::RoyalRoadOverlaps: return royal_road_overlaps(4, 5, 15, rng_seed);
        case ProblemKind::TrapK: return trap_k(5, 5, rng_seed);
    }
    throw ContractViolation("unknown problem kind");
}

double BenchmarkProblem::group_fitness_sum(std::span<const int> values) const {
    double total = 0.0;
    for (const auto& g : groups_) {
        std::size_t ones = 0;
        for (auto p : g) ones += values[p] == 1 ? 1U : 0U;
        switch (kind_) {
            case ProblemKind::RoyalRoad: total += ones == k_ ? 1.0 : 0.0; break;
            case ProblemKind::RoyalRoadOverlaps: total += ones == 0 ? 1.0 : 0.0; break;
            case ProblemKind::TrapK: total += trap_subfitness(ones, k_); break;
        }
    }
    return total;
}

double BenchmarkProblem::fitness(const FullSolution& x) const {
    space_.validate(x);
    return group_fitness_sum(x.values());
}

std::string BenchmarkProblem::to_json() const {
    nlohmann::ordered_json doc;
    doc["name"] = std::string(name());
    doc["n"] = space_.size();
    doc["k"] = k_;
    doc["groups"] = groups_.size();
    doc["seed"] = seed_;
    doc["permutation"] = permutation_;
    doc["group_positions"] = groups_;
    doc["max_fitness"] = max_fitness_;
    return doc.dump(2);
}

BenchmarkProblem BenchmarkProblem::from_json(std::string_view text) {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    const auto kind = parse_problem_kind(doc.at("name").get<std::string>());
    auto problem = BenchmarkProblem(kind, doc.at("n").get<std::size_t>(), doc.at("k").get<std::size_t>(),
                                    doc.at("seed").get<std::uint64_t>(),
                                    doc.at("group_positions").get<std::vector<std::vector<std::size_t>>>(),
                                    doc.at("permutation").get<std::vector<std::size_t>>());
    if (problem.groups_.size() != doc.at("groups").get<std::size_t>())
        throw ContractViolation("problem spec: group count does not match group_positions");
    return problem;
}

bool catalog_contains_all_targets(const PSCatalog& catalog, const BenchmarkProblem& problem) {
    return std::all_of(problem.targets().begin(), problem.targets().end(),
                       [&](const PartialSolution& t) { return catalog.contains(t); });
}

}  // namespace psmine
