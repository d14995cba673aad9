#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "qw/hfset.hpp"
#include "qw/signature.hpp"
#include "qw/stages.hpp"
#include "qw/terms.hpp"

namespace qw {

/// A constructor tree whose symmetric-constructor child lists are sorted by
/// the canonical order: rank, then constructor index, then children
/// lexicographically.
struct CanonicalTree {
    CtorIndex ctor = 0;
    std::size_t rank = 0;
    std::vector<CanonicalTree> children;

    friend bool operator==(const CanonicalTree&, const CanonicalTree&) = default;
    friend std::strong_ordering operator<=>(const CanonicalTree& a, const CanonicalTree& b);
};

/// Normal form under Symmetric families on `symmetric` (a per-constructor
/// mask; other constructors keep their child order).
CanonicalTree canon_multiset(const TermPool& pool, TermId t, const std::vector<bool>& symmetric);

/// The extensional value of t: children canonicalized, deduplicated, sorted.
HfSet canon_extensional(const TermPool& pool, TermId t);

std::string render(const Polynomial& poly, const CanonicalTree& t);

/// Which fast path a rule set admits. Explicit equations have none.
enum class CanonicalEngine { Multiset, Extensional };
CanonicalEngine select_engine(const RuleSet& rules);

struct CrosscheckReport {
    CanonicalEngine engine = CanonicalEngine::Multiset;
    std::size_t termCount = 0;
    /// |Q(k)| from the stage engine, k = 1..maxStage.
    std::vector<std::size_t> saturationCounts;
    /// Distinct canonical forms among terms of rank < k, k = 1..maxStage.
    std::vector<std::size_t> canonicalCounts;
    /// Terms whose class and canonical form disagree with an earlier term.
    std::size_t mismatches = 0;
    bool partitionsEqual() const noexcept { return mismatches == 0 && saturationCounts == canonicalCounts; }
};

/// Compares the saturation partition and the canonical-form partition of
/// every term of rank < maxStage. Throws UnsupportedRuleSet for rule sets
/// with explicit equations, CapExceeded from either engine.
CrosscheckReport crosscheck(const Polynomial& poly, const RuleSet& rules, std::size_t maxStage,
                            const BuildOptions& options = {}, std::size_t termCap = 1'000'000);

}  // namespace qw
