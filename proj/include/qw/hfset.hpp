#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qw {

/// An extensional hereditarily finite set. Values are hash-consed, so two
/// HfSets are equal exactly when they share a node and == is O(1). The
/// interning table is process-wide and mutex-protected.
class HfSet {
public:
    /// The empty set.
    HfSet();

    /// {e : e in elements}; duplicates collapse.
    static HfSet of(std::vector<HfSet> elements);

    /// Sorted by the canonical order, duplicate-free.
    std::span<const HfSet> elements() const noexcept;
    std::size_t size() const noexcept { return elements().size(); }
    bool empty() const noexcept { return size() == 0; }
    /// 0 for the empty set, else 1 + max element rank.
    std::size_t rank() const noexcept;
    std::size_t hash() const noexcept;

    bool contains(const HfSet& x) const;

    friend bool operator==(const HfSet& a, const HfSet& b) noexcept { return a.node_ == b.node_; }
    /// Canonical order: rank, then cardinality, then elements lexicographically.
    friend std::strong_ordering operator<=>(const HfSet& a, const HfSet& b) noexcept;

private:
    friend class HfInterner;
    struct Node;
    explicit HfSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static HfSet intern(std::vector<HfSet> sortedUnique);

    std::shared_ptr<const Node> node_;
};

/// Set-brace notation, "∅" for the empty set: "{∅,{∅}}".
std::string render_braces(const HfSet& x);

/// Accepts "∅", "{}" or "0" for the empty set and braces with commas.
/// Throws ParseError.
HfSet parse_braces(std::string_view text);

/// The von Neumann natural n.
HfSet von_neumann(std::size_t n);

}  // namespace qw

template <>
struct std::hash<qw::HfSet> {
    std::size_t operator()(const qw::HfSet& x) const noexcept { return x.hash(); }
};
