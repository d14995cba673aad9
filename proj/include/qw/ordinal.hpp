#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qw/signature.hpp"
#include "qw/stages.hpp"

namespace qw {

/// A finite set of naturals, i.e. a finite well-order.
class FiniteOrdinalSet {
public:
    FiniteOrdinalSet() = default;
    /// Sorts and deduplicates.
    explicit FiniteOrdinalSet(std::vector<std::size_t> values);

    const std::vector<std::size_t>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<std::size_t> values_;
};

struct OrderType {
    std::size_t beta = 0;             // the order type, |s|
    std::vector<std::size_t> theta;   // the order isomorphism beta -> s
};

OrderType order_type(const FiniteOrdinalSet& s);

/// The least natural that no arity surjects onto: 1 + max arity.
std::size_t aleph(const Polynomial& poly);

/// (m+n)(m+n+1)/2 + n. Throws InvalidInput on 64-bit overflow.
std::uint64_t cantor_pair(std::uint64_t m, std::uint64_t n);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t p);

/// Bijection between nonempty finite sequences of naturals and the naturals:
/// pair(length-1, left fold of cantor_pair over the entries).
std::uint64_t omega_tuple_code(std::span<const std::uint64_t> xs);
std::vector<std::uint64_t> omega_tuple_decode(std::uint64_t code);

/// F_{x,n} tabulated on kappa^n; tuples are indexed as base-kappa numerals
/// with the first coordinate most significant.
struct SurjectionTable {
    std::size_t kappa = 0;
    std::size_t n = 0;
    std::vector<std::size_t> values;

    std::size_t at(std::span<const std::size_t> betas) const;
    /// The set of values taken.
    std::vector<std::size_t> image() const;
};

/// The canonical surjection kappa^n ->> R_n(x) u {0}, kappa = aleph(poly).
/// n = 1: theta of the order type of R_1(x), 0 past its end. n = m+1:
/// coordinate m+1 picks through the order type of
/// { F_{y,m}(beta_1..beta_m) : y in image(x) }. Throws CapExceeded when
/// kappa^n > cap, InvalidInput for n = 0.
SurjectionTable f_surjection(const StageFamily& sf, ClassId x, std::size_t n, std::uint64_t cap = 10'000'000);

/// The same table, taking the children of x from its representative's child
/// function rather than its image set.
SurjectionTable f_surjection_via_representative(const StageFamily& sf, ClassId x, std::size_t n,
                                                std::uint64_t cap = 10'000'000);

}  // namespace qw
