#pragma once

#include <string>
#include <vector>

#include "qw/signature.hpp"

namespace fixtures {

struct Fixture {
    std::string name;
    qw::Polynomial poly;
    qw::RuleSet rules;
};

inline qw::Polynomial leaf_node() { return qw::Polynomial({{"leaf", 0}, {"node", 2}}); }

inline qw::Equation eq(std::size_t vars, qw::CtorIndex a, std::vector<qw::VarIndex> l, qw::CtorIndex b,
                       std::vector<qw::VarIndex> r) {
    return qw::Equation{vars, a, b, std::move(l), std::move(r)};
}

/// leaf:0, node:2 with node symmetric.
inline Fixture ut2() {
    return {"ut2", leaf_node(), qw::RuleSet{{}, {{qw::FamilyKind::Symmetric, 1}}}};
}

/// The same quotient through the explicit swap equation.
inline Fixture ut2_explicit() {
    return {"ut2-explicit", leaf_node(), qw::RuleSet{{eq(2, 1, {0, 1}, 1, {1, 0})}, {}}};
}

/// empty:0, pair:2 with every image-preserving equation.
inline Fixture hf2() {
    return {"hf2", qw::Polynomial({{"empty", 0}, {"pair", 2}}),
            qw::RuleSet{{}, {{qw::FamilyKind::AllImagePreserving, 0}}}};
}

/// Ternary variant of hf2.
inline Fixture hf3() {
    return {"hf3", qw::Polynomial({{"empty", 0}, {"pair", 2}, {"tri", 3}}),
            qw::RuleSet{{}, {{qw::FamilyKind::AllImagePreserving, 0}}}};
}

/// Plain binary trees, no equations.
inline Fixture ordered() { return {"ordered", leaf_node(), qw::RuleSet{}}; }

/// Explicit equations across constructors of different arity:
/// node(x, y) = tri(x, y, y) and tri(x, y, z) = tri(z, y, x).
inline Fixture mix() {
    return {"mix", qw::Polynomial({{"leaf", 0}, {"node", 2}, {"tri", 3}}),
            qw::RuleSet{{eq(2, 1, {0, 1}, 2, {0, 1, 1}), eq(3, 2, {0, 1, 2}, 2, {2, 1, 0})}, {}}};
}

/// A constant plus a symmetric binary and a unary with an equation that
/// collapses s(s(x))-shaped nodes only when children agree: s(x) = n(x, x).
inline Fixture unary_mix() {
    return {"unary-mix", qw::Polynomial({{"z", 0}, {"s", 1}, {"n", 2}}),
            qw::RuleSet{{eq(1, 1, {0}, 2, {0, 0})}, {{qw::FamilyKind::Symmetric, 2}}}};
}

inline std::vector<Fixture> all() { return {ut2(), ut2_explicit(), hf2(), hf3(), ordered(), unary_mix(), mix()}; }

}  // namespace fixtures
