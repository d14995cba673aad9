#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qw/signature.hpp"

namespace qw {

using TermId = std::uint32_t;

/// Hash-consed store of well-formed constructor trees over one polynomial.
/// Equal subtrees share one id, so a term is a DAG and TermId equality is
/// structural equality. Not internally synchronized: confine a pool to one
/// thread, or only read it concurrently once construction has finished.
class TermPool {
public:
    explicit TermPool(Polynomial poly);

    const Polynomial& poly() const noexcept { return poly_; }

    /// Interns (ctor, children). Throws UnknownConstructor / ArityMismatch.
    TermId make(CtorIndex ctor, std::span<const TermId> children);
    TermId make(CtorIndex ctor, std::initializer_list<TermId> children) {
        return make(ctor, std::span<const TermId>(children.begin(), children.size()));
    }

    CtorIndex ctor(TermId t) const { return nodes_.at(t).ctor; }
    std::span<const TermId> children(TermId t) const;
    /// 0 for childless nodes, else 1 + max child rank. Cached at intern time.
    std::size_t rank(TermId t) const { return nodes_.at(t).rank; }

    std::size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node {
        CtorIndex ctor;
        std::uint32_t firstChild;
        std::uint32_t rank;
    };
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept;
    };

    Polynomial poly_;
    std::vector<Node> nodes_;
    std::vector<TermId> childStore_;
    std::unordered_map<std::vector<std::uint32_t>, TermId, KeyHash> index_;
};

/// `(name child1 ... childk)`, whitespace-insensitive. Nullary constructors
/// may also be written bare. Throws ParseError / UnknownConstructor / ArityMismatch.
TermId parse_term(std::string_view text, TermPool& pool);

std::string render_term(const TermPool& pool, TermId t);

/// Bare (argument-position) names in `text` that are not constructors of
/// `poly`, in order of first appearance. Head names are not reported.
std::vector<std::string> free_names(std::string_view text, const Polynomial& poly);

inline std::size_t term_rank(const TermPool& pool, TermId t) { return pool.rank(t); }

/// Every term of rank <= maxRank exactly once: by rank, then constructor
/// index, then lexicographic on the positions of the children in the
/// output so far. Throws CapExceeded when more than `cap` terms would result.
std::vector<TermId> enumerate_terms(TermPool& pool, std::size_t maxRank, std::size_t cap);

/// t_0 = first nullary constructor, t_{b+1} = nodeCtor(t_b, ..., t_b).
/// Throws NoNullaryConstructor, or InvalidInput when nodeCtor is nullary.
TermId tower(TermPool& pool, CtorIndex nodeCtor, std::size_t beta);

}  // namespace qw
