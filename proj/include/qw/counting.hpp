#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace qw {

// base^exp, or nullopt once the result would exceed `limit`.
inline std::optional<std::uint64_t> bounded_pow(std::uint64_t base, std::size_t exp,
                                                std::uint64_t limit) {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && result > limit / base) return std::nullopt;
        result *= base;
    }
    if (result > limit) return std::nullopt;
    return result;
}

// Mixed-radix digits of `index` in base `base`, most significant first.
template <typename Digit>
void decode_digits(std::uint64_t index, std::uint64_t base, std::span<Digit> digits) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        digits[i] = static_cast<Digit>(index % base);
        index /= base;
    }
}

template <typename Digit>
std::uint64_t encode_digits(std::span<const Digit> digits, std::uint64_t base) {
    std::uint64_t index = 0;
    for (Digit d : digits) index = index * base + static_cast<std::uint64_t>(d);
    return index;
}

}  // namespace qw
