#pragma once

/// @file search_core.hpp
/// @brief Search spaces, full and partial solutions, containment and merge algebra.
///
/// A partial solution (PS) is a fixed-length pattern where every cell is either a
/// fixed parameter value or the wildcard `*`. A full solution "contains" a PS when
/// it agrees with every fixed cell.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "psmine/index_mask.hpp"

namespace psmine {

/// Raised whenever an operation is called outside its precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class FullSolution;
class PartialSolution;

/// Per-position cardinalities of a discrete search space.
class SearchSpace {
public:
    explicit SearchSpace(std::vector<int> cardinalities);

    static SearchSpace binary(std::size_t n);

    std::size_t size() const noexcept { return cardinalities_.size(); }
    int cardinality(std::size_t i) const { return cardinalities_.at(i); }
    std::span<const int> cardinalities() const noexcept { return cardinalities_; }
    int max_cardinality() const noexcept;

    /// Throws ContractViolation if the solution does not belong to this space.
    void validate(const FullSolution& x) const;
    void validate(const PartialSolution& ps) const;

    friend bool operator==(const SearchSpace&, const SearchSpace&) = default;

private:
    std::vector<int> cardinalities_;
};

class FullSolution {
public:
    FullSolution() = default;
    explicit FullSolution(std::vector<int> values);

    std::size_t size() const noexcept { return values_.size(); }
    int operator[](std::size_t i) const { return values_[i]; }
    std::span<const int> values() const noexcept { return values_; }

    friend bool operator==(const FullSolution&, const FullSolution&) = default;

private:
    std::vector<int> values_;
};

class PartialSolution {
public:
    static constexpr int kStar = -1;

    PartialSolution() = default;
    /// Cells hold a value >= 0 or kStar.
    explicit PartialSolution(std::vector<int> cells);

    static PartialSolution universal(std::size_t n);

    std::size_t size() const noexcept { return cells_.size(); }
    bool is_fixed(std::size_t i) const { return cells_[i] != kStar; }
    bool is_star(std::size_t i) const { return cells_[i] == kStar; }
    int operator[](std::size_t i) const { return cells_[i]; }
    std::span<const int> cells() const noexcept { return cells_; }

    std::size_t fixed_count() const noexcept;
    std::size_t star_count() const noexcept { return size() - fixed_count(); }
    std::vector<std::size_t> fixed_positions() const;

    /// Copy with cell i replaced (value or kStar).
    PartialSolution with_cell(std::size_t i, int value) const;

    friend bool operator==(const PartialSolution&, const PartialSolution&) = default;
    friend auto operator<=>(const PartialSolution&, const PartialSolution&) = default;

private:
    std::vector<int> cells_;
};

bool contains(const FullSolution& x, const PartialSolution& ps);

bool mergeable(const PartialSolution& a, const PartialSolution& b);

/// Positionwise union of fixed cells; `a` wins where both are fixed (they agree).
PartialSolution merge(const PartialSolution& a, const PartialSolution& b);

FullSolution to_full(const PartialSolution& ps);
PartialSolution from_full(const FullSolution& x);

/// Textual form: `1*0*1` when every cell fits in one digit, `1,*,12` otherwise.
std::string to_string(const PartialSolution& ps);
std::string to_string(const FullSolution& x);

PartialSolution parse_partial(std::string_view text);
FullSolution parse_full(std::string_view text);

/// Reference population with raw and normalized fitness, plus one membership
/// mask per (position, value) used to answer observation queries by intersection.
class EvaluatedPopulation {
public:
    EvaluatedPopulation(SearchSpace space,
                        std::vector<FullSolution> members,
                        std::vector<double> raw_fitness);

    const SearchSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return members_.size(); }
    const std::vector<FullSolution>& members() const noexcept { return members_; }
    std::span<const double> raw_fitness() const noexcept { return raw_; }
    std::span<const double> norm_fitness() const noexcept { return norm_; }

    /// Members whose value at `position` equals `value`.
    const IndexMask& mask(std::size_t position, int value) const;
    /// Sum of normalized fitness over mask(position, value).
    double mask_benefit(std::size_t position, int value) const;

    IndexMask observation_mask(const PartialSolution& ps) const;

    double total_raw() const noexcept { return total_raw_; }

private:
    std::size_t slot(std::size_t position, int value) const;

    SearchSpace space_;
    std::vector<FullSolution> members_;
    std::vector<double> raw_;
    std::vector<double> norm_;
    std::vector<IndexMask> masks_;
    std::vector<double> mask_benefit_;
    double total_raw_ = 0.0;
};

/// Indices of the members containing `ps`, ascending.
std::vector<std::size_t> observations(const EvaluatedPopulation& pop, const PartialSolution& ps);

}  // namespace psmine

template <>
struct std::hash<psmine::PartialSolution> {
    std::size_t operator()(const psmine::PartialSolution& ps) const noexcept;
};

template <>
struct std::hash<psmine::FullSolution> {
    std::size_t operator()(const psmine::FullSolution& x) const noexcept;
};
