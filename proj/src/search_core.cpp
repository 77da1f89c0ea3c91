#include "psmine/search_core.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace psmine {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw ContractViolation(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
}

bool single_digit(std::span<const int> values) {
    return std::all_of(values.begin(), values.end(), [](int v) { return v <= 9; });
}

std::vector<std::string_view> split_cells(std::string_view text) {
    std::vector<std::string_view> out;
    if (text.find(',') == std::string_view::npos) {
        for (std::size_t i = 0; i < text.size(); ++i) out.push_back(text.substr(i, 1));
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

int parse_value(std::string_view cell) {
    int v = 0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc{} || ptr != end || v < 0)
        throw ContractViolation("invalid cell '" + std::string(cell) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

SearchSpace::SearchSpace(std::vector<int> cardinalities) : cardinalities_(std::move(cardinalities)) {
    if (cardinalities_.empty()) throw ContractViolation("search space needs at least one parameter");
    for (int c : cardinalities_)
        if (c < 2) throw ContractViolation("every cardinality must be >= 2");
}

SearchSpace SearchSpace::binary(std::size_t n) { return SearchSpace(std::vector<int>(n, 2)); }

int SearchSpace::max_cardinality() const noexcept {
    return *std::max_element(cardinalities_.begin(), cardinalities_.end());
}

void SearchSpace::validate(const FullSolution& x) const {
    require_same_length(x.size(), size(), "full solution");
    for (std::size_t i = 0; i < size(); ++i)
        if (x[i] >= cardinalities_[i])
            throw ContractViolation("value out of range at position " + std::to_string(i));
}

void SearchSpace::validate(const PartialSolution& ps) const {
    require_same_length(ps.size(), size(), "partial solution");
    for (std::size_t i = 0; i < size(); ++i)
        if (ps.is_fixed(i) && ps[i] >= cardinalities_[i])
            throw ContractViolation("value out of range at position " + std::to_string(i));
}

FullSolution::FullSolution(std::vector<int> values) : values_(std::move(values)) {
    for (int v : values_)
        if (v < 0) throw ContractViolation("full solution values must be non-negative");
}

PartialSolution::PartialSolution(std::vector<int> cells) : cells_(std::move(cells)) {
    for (int v : cells_)
        if (v < kStar) throw ContractViolation("partial solution cells must be >= 0 or *");
}

PartialSolution PartialSolution::universal(std::size_t n) {
    return PartialSolution(std::vector<int>(n, kStar));
}

std::size_t PartialSolution::fixed_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](int v) { return v != kStar; }));
}

std::vector<std::size_t> PartialSolution::fixed_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i] != kStar) out.push_back(i);
    return out;
}

PartialSolution PartialSolution::with_cell(std::size_t i, int value) const {
    PartialSolution copy = *this;
    copy.cells_.at(i) = value;
    return copy;
}

bool contains(const FullSolution& x, const PartialSolution& ps) {
    require_same_length(x.size(), ps.size(), "contains");
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (ps.is_fixed(i) && ps[i] != x[i]) return false;
    return true;
}

bool mergeable(const PartialSolution& a, const PartialSolution& b) {
    require_same_length(a.size(), b.size(), "mergeable");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.is_fixed(i) && b.is_fixed(i) && a[i] != b[i]) return false;
    return true;
}

PartialSolution merge(const PartialSolution& a, const PartialSolution& b) {
    if (!mergeable(a, b)) throw ContractViolation("merge: partial solutions conflict");
    std::vector<int> cells(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) cells[i] = a.is_fixed(i) ? a[i] : b[i];
    return PartialSolution(std::move(cells));
}

FullSolution to_full(const PartialSolution& ps) {
    if (ps.star_count() != 0) throw ContractViolation("to_full: partial solution has * cells");
    return FullSolution(std::vector<int>(ps.cells().begin(), ps.cells().end()));
}

PartialSolution from_full(const FullSolution& x) {
    return PartialSolution(std::vector<int>(x.values().begin(), x.values().end()));
}

std::string to_string(const PartialSolution& ps) {
    const bool compact = single_digit(ps.cells());
    std::string out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!compact && i > 0) out += ',';
        out += ps.is_star(i) ? std::string("*") : std::to_string(ps[i]);
    }
    return out;
}

std::string to_string(const FullSolution& x) { return to_string(from_full(x)); }

PartialSolution parse_partial(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ContractViolation("empty partial solution text");
    std::vector<int> cells;
    for (auto cell : split_cells(text)) cells.push_back(cell == "*" ? PartialSolution::kStar : parse_value(cell));
    return PartialSolution(std::move(cells));
}

FullSolution parse_full(std::string_view text) {
    const auto ps = parse_partial(text);
    if (ps.star_count() != 0) throw ContractViolation("full solution text contains *");
    return to_full(ps);
}

EvaluatedPopulation::EvaluatedPopulation(SearchSpace space,
                                         std::vector<FullSolution> members,
                                         std::vector<double> raw_fitness)
    : space_(std::move(space)), members_(std::move(members)), raw_(std::move(raw_fitness)) {
    require_same_length(members_.size(), raw_.size(), "evaluated population");
    for (const auto& m : members_) space_.validate(m);

    const std::size_t count = members_.size();
    norm_.assign(count, 0.0);
    if (count > 0) {
        const double lo = *std::min_element(raw_.begin(), raw_.end());
        double spread = 0.0;
        for (double f : raw_) spread += f - lo;
        for (std::size_t i = 0; i < count; ++i)
            norm_[i] = spread > 0.0 ? (raw_[i] - lo) / spread : 1.0 / static_cast<double>(count);
        total_raw_ = std::accumulate(raw_.begin(), raw_.end(), 0.0);
    }

    const std::size_t slots = space_.size() * static_cast<std::size_t>(space_.max_cardinality());
    masks_.assign(slots, IndexMask(count));
    for (std::size_t m = 0; m < count; ++m)
        for (std::size_t i = 0; i < space_.size(); ++i) masks_[slot(i, members_[m][i])].set(m);
    mask_benefit_.resize(slots);
    for (std::size_t s = 0; s < slots; ++s) mask_benefit_[s] = masks_[s].sum_over(norm_);
}

std::size_t EvaluatedPopulation::slot(std::size_t position, int value) const {
    return position * static_cast<std::size_t>(space_.max_cardinality()) + static_cast<std::size_t>(value);
}

const IndexMask& EvaluatedPopulation::mask(std::size_t position, int value) const {
    if (position >= space_.size() || value < 0 || value >= space_.cardinality(position))
        throw ContractViolation("mask: (position, value) out of range");
    return masks_[slot(position, value)];
}

double EvaluatedPopulation::mask_benefit(std::size_t position, int value) const {
    mask(position, value);
    return mask_benefit_[slot(position, value)];
}

IndexMask EvaluatedPopulation::observation_mask(const PartialSolution& ps) const {
    space_.validate(ps);
    IndexMask out(size(), true);
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (ps.is_fixed(i)) out &= masks_[slot(i, ps[i])];
    return out;
}

std::vector<std::size_t> observations(const EvaluatedPopulation& pop, const PartialSolution& ps) {
    std::vector<std::size_t> out;
    pop.observation_mask(ps).for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

}  // namespace psmine

namespace {
std::size_t hash_cells(std::span<const int> cells) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (int v : cells) {
        h ^= static_cast<std::uint64_t>(v + 1);
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}
}  // namespace

std::size_t std::hash<psmine::PartialSolution>::operator()(const psmine::PartialSolution& ps) const noexcept {
    return hash_cells(ps.cells());
}

std::size_t std::hash<psmine::FullSolution>::operator()(const psmine::FullSolution& x) const noexcept {
    return hash_cells(x.values());
}
