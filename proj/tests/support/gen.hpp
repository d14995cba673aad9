#pragma once

// Hand-rolled generators for property tests. Every generator takes the rng
// explicitly so a failing case reproduces from its seed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qw/terms.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

/// A random term of height at most `maxDepth`; nullary constructors are
/// forced at depth 0. Requires a nullary constructor.
inline qw::TermId term(qw::TermPool& pool, Rng& rng, std::size_t maxDepth) {
    const auto& poly = pool.poly();
    std::vector<qw::CtorIndex> options;
    for (qw::CtorIndex a = 0; a < poly.size(); ++a)
        if (maxDepth > 0 || poly.arity(a) == 0) options.push_back(a);
    const qw::CtorIndex a = options[below(rng, options.size())];
    std::vector<qw::TermId> kids;
    for (std::size_t i = 0; i < poly.arity(a); ++i) kids.push_back(term(pool, rng, maxDepth - 1));
    return pool.make(a, kids);
}

/// A random finite set of naturals below `bound`.
inline std::vector<std::size_t> subset(Rng& rng, std::size_t bound, std::size_t maxSize) {
    std::vector<std::size_t> out;
    const std::size_t n = below(rng, maxSize + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(below(rng, bound));
    return out;
}

/// Uniform operation tables for the given arities.
inline std::vector<std::vector<std::uint32_t>> tables(const qw::Polynomial& poly, std::size_t carrier, Rng& rng) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& c : poly.constructors()) {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < c.arity; ++i) cells *= carrier;
        std::vector<std::uint32_t> t(cells);
        for (auto& x : t) x = static_cast<std::uint32_t>(below(rng, carrier));
        out.push_back(std::move(t));
    }
    return out;
}

/// Oracle trees as interned terms, index for index.
inline std::vector<qw::TermId> to_terms(qw::TermPool& pool, const std::vector<oracle::Tree>& ts) {
    std::vector<qw::TermId> out;
    for (const auto& t : ts) {
        std::vector<qw::TermId> kids;
        for (std::size_t k : t.kids) kids.push_back(out[k]);
        out.push_back(pool.make(t.ctor, kids));
    }
    return out;
}

}  // namespace gen
