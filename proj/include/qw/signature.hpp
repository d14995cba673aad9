#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qw {

using CtorIndex = std::uint32_t;
using VarIndex = std::uint32_t;

struct Constructor {
    std::string name;
    std::size_t arity = 0;  // B_a = {0, ..., arity-1}

    friend bool operator==(const Constructor&, const Constructor&) = default;
};

/// A polynomial signature: named constructors, each with a finite arity.
/// Constructor indices follow declaration order. Immutable once built.
class Polynomial {
public:
    /// Throws DuplicateName / EmptySignature.
    explicit Polynomial(std::vector<Constructor> constructors);

    std::size_t size() const noexcept { return ctors_.size(); }
    const Constructor& operator[](CtorIndex a) const { return ctors_.at(a); }
    const std::vector<Constructor>& constructors() const noexcept { return ctors_; }

    std::size_t arity(CtorIndex a) const { return ctors_.at(a).arity; }
    const std::string& name(CtorIndex a) const { return ctors_.at(a).name; }
    std::optional<CtorIndex> find(std::string_view name) const;
    std::size_t max_arity() const noexcept;

    /// First constructor with empty arity, if any.
    std::optional<CtorIndex> first_nullary() const noexcept;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<Constructor> ctors_;
};

Polynomial validate_polynomial(std::vector<Constructor> constructors);

/// Unchecked equation as read from a file or built by hand.
struct RawEquation {
    std::size_t varCount = 0;
    CtorIndex leftCtor = 0;
    CtorIndex rightCtor = 0;
    std::vector<VarIndex> leftMap;
    std::vector<VarIndex> rightMap;
};

/// s(left, h . leftMap) = s(right, h . rightMap) for all h : V -> X, where
/// V = {0..varCount-1} and the two maps have the same image in V.
struct Equation {
    std::size_t varCount = 0;
    CtorIndex leftCtor = 0;
    CtorIndex rightCtor = 0;
    std::vector<VarIndex> leftMap;
    std::vector<VarIndex> rightMap;

    /// Sorted distinct variables hit by leftMap (equivalently rightMap).
    std::vector<VarIndex> used_variables() const;

    friend bool operator==(const Equation&, const Equation&) = default;
};

/// Throws UnknownConstructor, ArityMismatch, BadVariableIndex, NotImagePreserving.
Equation validate_equation(const Polynomial& poly, const RawEquation& raw);

enum class FamilyKind { Symmetric, AllImagePreserving };

struct Family {
    FamilyKind kind = FamilyKind::Symmetric;
    CtorIndex ctor = 0;  // only meaningful for Symmetric

    friend bool operator==(const Family&, const Family&) = default;
};

/// Explicit equations plus symbolic families. Families stay symbolic; the
/// stage engine applies them through closed-form identification criteria.
struct RuleSet {
    std::vector<Equation> explicitEquations;
    std::vector<Family> families;

    bool empty() const noexcept { return explicitEquations.empty() && families.empty(); }
    bool has_all_image_preserving() const noexcept;
    /// Per-constructor flag: does some Symmetric family name it?
    std::vector<bool> symmetric_mask(const Polynomial& poly) const;

    friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// Re-validates every equation and family against `poly`.
void validate_rules(const Polynomial& poly, const RuleSet& rules);

struct ExpansionCaps {
    std::size_t maxVars = 16;
    std::size_t maxEquations = 1'000'000;
};

/// Explicit equation list generated by a family. This is an oracle: the
/// engine never calls it. Throws CapExceeded.
std::vector<Equation> expand_family(const Polynomial& poly, const Family& family,
                                    const ExpansionCaps& caps = {});

/// Size of the variable set sum_a P(B_a) used by the all-image-preserving family.
std::size_t all_image_preserving_var_count(const Polynomial& poly);

std::string describe(const Polynomial& poly, const Equation& eq);

}  // namespace qw
