#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace psmine {

/// Fixed-size bitset over population indices.
class IndexMask {
public:
    IndexMask() = default;
    explicit IndexMask(std::size_t bits, bool value = false)
        : bits_(bits), words_((bits + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        if (value) trim();
    }

    std::size_t bits() const noexcept { return bits_; }
    std::span<std::uint64_t> words() noexcept { return words_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    IndexMask& operator&=(const IndexMask& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
        return *this;
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool none() const noexcept {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                const int b = std::countr_zero(word);
                f(w * 64 + static_cast<std::size_t>(b));
                word &= word - 1;
            }
        }
    }

    /// Sum of values[i] over set bits, in ascending index order.
    double sum_over(std::span<const double> values) const {
        double s = 0.0;
        for_each([&](std::size_t i) { s += values[i]; });
        return s;
    }

    friend bool operator==(const IndexMask&, const IndexMask&) = default;

private:
    void trim() {
        if (bits_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace psmine
