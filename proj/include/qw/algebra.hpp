#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qw/signature.hpp"
#include "qw/stages.hpp"
#include "qw/terms.hpp"

namespace qw {

using Element = std::uint32_t;

/// A finite algebra: carrier {0..m-1} and, per constructor a, a total table
/// from arity(a)-tuples to the carrier. Tables are flat, indexed by the
/// argument tuple read as a base-m numeral with the first argument most
/// significant (the layout of the nested JSON arrays).
class FiniteAlgebra {
public:
    /// Throws InvalidInput when a table has the wrong size or an entry is
    /// out of range, ArityMismatch when the table count differs from the
    /// constructor count.
    FiniteAlgebra(const Polynomial& poly, std::size_t carrier, std::vector<std::vector<Element>> tables);

    std::size_t carrier() const noexcept { return carrier_; }
    std::size_t ctor_count() const noexcept { return arities_.size(); }
    std::size_t arity(CtorIndex a) const { return arities_.at(a); }
    const std::vector<Element>& table(CtorIndex a) const { return tables_.at(a); }

    Element apply(CtorIndex a, std::span<const Element> args) const;

    /// Evaluates a raw term through the tables.
    Element eval(const TermPool& pool, TermId t) const;

    friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;

private:
    std::size_t carrier_;
    std::vector<std::size_t> arities_;
    std::vector<std::vector<Element>> tables_;
};

FiniteAlgebra terminal_algebra(const Polynomial& poly);

/// Two constructor applications that the rules identify but the tables send
/// to different elements.
struct RuleWitness {
    std::string source;  // which rule produced the pair
    CtorIndex leftCtor = 0;
    std::vector<Element> leftArgs;
    CtorIndex rightCtor = 0;
    std::vector<Element> rightArgs;
    Element leftValue = 0;
    Element rightValue = 0;
    std::optional<std::size_t> equationIndex;
    std::vector<Element> assignment;  // h : V_e -> X for explicit equations
};

std::string describe(const Polynomial& poly, const RuleWitness& w);

struct SatisfactionReport {
    bool satisfied = true;
    std::optional<RuleWitness> witness;
    explicit operator bool() const noexcept { return satisfied; }
};

/// s(a_e, h . l_e) = s(b_e, h . r_e) for every equation and every
/// h : V_e -> X. Throws CapExceeded when |X|^|V_e| > cap for some equation.
SatisfactionReport check_satisfies(const FiniteAlgebra& alg, std::span<const Equation> eqs,
                                   std::uint64_t cap = 10'000'000);

/// For all a, c and f : B_a -> X, g : B_c -> X with equal image,
/// t(a, f) = t(c, g). Equivalent to satisfying every image-preserving
/// equation over sum_a P(B_a).
SatisfactionReport check_equal_image(const FiniteAlgebra& alg, std::uint64_t cap = 10'000'000);

/// Tables of each listed constructor are invariant under permuting arguments.
SatisfactionReport check_symmetric(const FiniteAlgebra& alg, std::span<const CtorIndex> ctors,
                                   std::uint64_t cap = 10'000'000);

/// Explicit equations plus families, each family through its closed form.
SatisfactionReport check_rules(const Polynomial& poly, const RuleSet& rules, const FiniteAlgebra& alg,
                               std::uint64_t cap = 10'000'000);

/// The unique homomorphism out of the truncation, by rank recursion over
/// representatives. Throws NotSatisfying with a merged pair of members on
/// which the tables disagree, or with a rule witness if the truncation is
/// too shallow to exhibit one.
std::vector<Element> fold(const StageFamily& sf, const FiniteAlgebra& alg);

/// h(class(a, f)) = t(a, h . f) for every a and f over classes of rank < depth-1.
bool is_homomorphism(std::span<const Element> h, const StageFamily& sf, const FiniteAlgebra& alg);

/// Brute force: functions from classes of rank <= rankBound to the carrier
/// satisfying the homomorphism condition for every parent of rank <= rankBound.
/// Throws CapExceeded when carrier^classes > cap, InvalidInput when the
/// family is too shallow.
std::uint64_t count_homomorphisms(const StageFamily& sf, const FiniteAlgebra& alg, std::size_t rankBound,
                                  std::uint64_t cap = 50'000'000);

/// The truncated stage algebra: carrier = classes of sf plus one overflow
/// element (the last), sending (a, f) to its class when every child has
/// rank < depth-1 and to overflow otherwise.
FiniteAlgebra stage_algebra(const StageFamily& sf);

struct RankReport {
    ClassId cls = 0;
    std::size_t termRank = 0;
    std::size_t classRank = 0;
    bool preserved() const noexcept { return termRank == classRank; }
};

/// Image of an ordered term under the map into the symmetric stage family.
RankReport ordered_to_unordered(StageFamily& unordered, const TermPool& pool, TermId t);

/// Uniform tables over a carrier of the given size.
FiniteAlgebra random_algebra(const Polynomial& poly, std::size_t carrier, std::mt19937_64& rng);

/// Rejection sampling: uniform carrier size in [1, maxCarrier], then uniform
/// tables over that carrier until check_rules passes (up to 1000 draws
/// before the size is redrawn). Throws CapExceeded if `count`
/// algebras are not found within maxTries draws.
std::vector<FiniteAlgebra> random_satisfying_algebras(const Polynomial& poly, const RuleSet& rules,
                                                      std::size_t count, std::size_t maxCarrier,
                                                      std::uint64_t seed, std::size_t maxTries = 1'000'000);

}  // namespace qw
