#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace gelshatter {

/// Fenwick (binary indexed) tree over 1-based indices with exact integer
/// weights. Negative deltas are applied through two's-complement wraparound;
/// all prefix sums stay non-negative as long as no weight goes below zero.
class FenwickTree {
public:
    FenwickTree() = default;

    explicit FenwickTree(std::size_t size) : tree_(size + 1, 0), size_(size) {
        top_bit_ = 1;
        while ((top_bit_ << 1) <= size_) top_bit_ <<= 1;
    }

    std::size_t size() const { return size_; }

    std::uint64_t total() const { return total_; }

    void add(std::size_t index, std::uint64_t delta) {
        assert(index >= 1 && index <= size_);
        total_ += delta;
        for (; index <= size_; index += index & (~index + 1)) tree_[index] += delta;
    }

    void subtract(std::size_t index, std::uint64_t delta) {
        add(index, 0 - delta);
    }

    /// Sum of weights over [1, index].
    std::uint64_t prefix(std::size_t index) const {
        assert(index <= size_);
        std::uint64_t sum = 0;
        for (; index > 0; index -= index & (~index + 1)) sum += tree_[index];
        return sum;
    }

    std::uint64_t value_at(std::size_t index) const {
        assert(index >= 1 && index <= size_);
        std::uint64_t v = tree_[index];
        std::size_t j = index - 1;
        const std::size_t stop = index - (index & (~index + 1));
        while (j > stop) {
            v -= tree_[j];
            j -= j & (~j + 1);
        }
        return v;
    }

    struct Location {
        std::size_t index;       // smallest index with prefix(index) > target
        std::uint64_t offset;    // target minus prefix(index - 1)
    };

    /// Locates the index whose weight interval contains `target`,
    /// target in [0, total()).
    Location find(std::uint64_t target) const {
        assert(target < total_);
        std::size_t pos = 0;
        for (std::size_t bit = top_bit_; bit != 0; bit >>= 1) {
            const std::size_t next = pos + bit;
            if (next <= size_ && tree_[next] <= target) {
                pos = next;
                target -= tree_[next];
            }
        }
        return {pos + 1, target};
    }

    /// Rebuilds the tree from raw values in O(size).
    void assign(const std::vector<std::uint64_t>& values) {
        size_ = values.empty() ? 0 : values.size() - 1;  // values is 1-based
        tree_.assign(size_ + 1, 0);
        total_ = 0;
        for (std::size_t i = 1; i <= size_; ++i) {
            tree_[i] += values[i];
            total_ += values[i];
            const std::size_t parent = i + (i & (~i + 1));
            if (parent <= size_) tree_[parent] += tree_[i];
        }
        top_bit_ = 1;
        while ((top_bit_ << 1) <= size_) top_bit_ <<= 1;
    }

    /// Extracts all raw values in O(size).
    std::vector<std::uint64_t> values() const {
        std::vector<std::uint64_t> out(size_ + 1, 0);
        for (std::size_t i = 1; i <= size_; ++i) out[i] = value_at(i);
        return out;
    }

private:
    std::vector<std::uint64_t> tree_;
    std::size_t size_ = 0;
    std::size_t top_bit_ = 0;
    std::uint64_t total_ = 0;
};

}  // namespace gelshatter
