#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace qw::detail {

// Disjoint sets over dense indices; union by size with path halving.
class UnionFind {
public:
    explicit UnionFind(std::uint64_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::uint64_t{0});
    }

    std::uint64_t find(std::uint64_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // True when x and y were in different sets.
    bool unite(std::uint64_t x, std::uint64_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (size_[x] < size_[y]) std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
        return true;
    }

private:
    std::vector<std::uint64_t> parent_;
    std::vector<std::uint64_t> size_;
};

}  // namespace qw::detail
