#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qw/algebra.hpp"
#include "qw/hfset.hpp"
#include "qw/signature.hpp"
#include "qw/stages.hpp"
#include "qw/terms.hpp"

namespace qw {

/// Is there a constructor whose arity surjects onto a set of `cardinality`
/// elements? For 0 that needs an empty arity; otherwise arity >= cardinality.
bool is_small(const Polynomial& poly, std::size_t cardinality);

bool is_hereditarily_small(const Polynomial& poly, const HfSet& x);

/// s(a, f) = {f(b) | b in B_a}. Throws ArityMismatch.
HfSet hf_build(const Polynomial& poly, CtorIndex a, std::span<const HfSet> children);

inline std::size_t hf_rank(const HfSet& x) { return x.rank(); }

/// All hereditarily small sets of rank <= maxRank, in canonical order
/// (rank, cardinality, lexicographic). Empty when no constructor is nullary.
/// Throws CapExceeded past `cap` values.
std::vector<HfSet> hf_enumerate(const Polynomial& poly, std::size_t maxRank, std::size_t cap);

/// The constructor the fold uses for a set of `cardinality` elements: least
/// arity admitting a surjection, ties to the lowest index.
std::optional<CtorIndex> fold_constructor(const Polynomial& poly, std::size_t cardinality);

/// Does `alg` satisfy every image-preserving equation over sum_a P(B_a)?
/// Decided by the equal-image criterion; see check_equal_image for the witness.
bool check_ip_algebra(const Polynomial& poly, const FiniteAlgebra& alg);

/// The unique homomorphism H -> alg at x: h(x) = t(a, h . f) for the fold
/// constructor a and the surjection f(i) = elements[min(i, |x|-1)].
/// Throws NotSatisfying (with the witnessing pair) or NoConstructorFits.
Element hf_fold(const Polynomial& poly, const FiniteAlgebra& alg, const HfSet& x);

/// A term whose extensional value is x, built with the fold's constructor
/// choice. Throws NoConstructorFits.
TermId hf_to_term(const Polynomial& poly, TermPool& pool, const HfSet& x);

/// The homomorphism from the stage family into (H restricted to rank <
/// alphaBound) + 1; nullopt stands for the overflow point. Requires the
/// all-image-preserving family (UnsupportedRuleSet otherwise).
std::vector<std::optional<HfSet>> approx_fold(const StageFamily& sf, std::size_t alphaBound);

}  // namespace qw
