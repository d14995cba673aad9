#include "qw/signature.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "qw/counting.hpp"
#include "qw/error.hpp"

namespace qw {

namespace {

std::vector<VarIndex> image_of(const std::vector<VarIndex>& map) {
    std::vector<VarIndex> image = map;
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    return image;
}

std::string render_set(const std::vector<VarIndex>& vars) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? "," : "") << vars[i];
    out << '}';
    return out.str();
}

}  // namespace

Polynomial::Polynomial(std::vector<Constructor> constructors) : ctors_(std::move(constructors)) {
    if (ctors_.empty()) raise(Errc::EmptySignature, "a signature needs at least one constructor");
    std::unordered_set<std::string> seen;
    for (const auto& c : ctors_) {
        if (c.name.empty()) raise(Errc::InvalidInput, "constructor names must be nonempty");
        if (!seen.insert(c.name).second) raise(Errc::DuplicateName, "constructor '" + c.name + "' declared twice");
    }
}

std::optional<CtorIndex> Polynomial::find(std::string_view name) const {
    for (std::size_t i = 0; i < ctors_.size(); ++i)
        if (ctors_[i].name == name) return static_cast<CtorIndex>(i);
    return std::nullopt;
}

std::size_t Polynomial::max_arity() const noexcept {
    std::size_t m = 0;
    for (const auto& c : ctors_) m = std::max(m, c.arity);
    return m;
}

std::optional<CtorIndex> Polynomial::first_nullary() const noexcept {
    for (std::size_t i = 0; i < ctors_.size(); ++i)
        if (ctors_[i].arity == 0) return static_cast<CtorIndex>(i);
    return std::nullopt;
}

Polynomial validate_polynomial(std::vector<Constructor> constructors) {
    return Polynomial(std::move(constructors));
}

std::vector<VarIndex> Equation::used_variables() const {
    return image_of(leftMap);
}

Equation validate_equation(const Polynomial& poly, const RawEquation& raw) {
    auto check_side = [&](CtorIndex ctor, const std::vector<VarIndex>& map, const char* side) {
        if (ctor >= poly.size())
            raise(Errc::UnknownConstructor, std::string(side) + " constructor index " + std::to_string(ctor) +
                                                " out of range");
        if (map.size() != poly.arity(ctor))
            raise(Errc::ArityMismatch, std::string(side) + " map has length " + std::to_string(map.size()) +
                                           " but '" + poly.name(ctor) + "' has arity " +
                                           std::to_string(poly.arity(ctor)));
        for (VarIndex v : map)
            if (v >= raw.varCount)
                raise(Errc::BadVariableIndex, std::string(side) + " map uses variable " + std::to_string(v) +
                                                  " but only " + std::to_string(raw.varCount) + " are declared");
    };
    check_side(raw.leftCtor, raw.leftMap, "left");
    check_side(raw.rightCtor, raw.rightMap, "right");

    auto li = image_of(raw.leftMap);
    auto ri = image_of(raw.rightMap);
    if (li != ri)
        raise(Errc::NotImagePreserving, "images differ: " + render_set(li) + " vs " + render_set(ri));

    return Equation{raw.varCount, raw.leftCtor, raw.rightCtor, raw.leftMap, raw.rightMap};
}

bool RuleSet::has_all_image_preserving() const noexcept {
    return std::any_of(families.begin(), families.end(),
                       [](const Family& f) { return f.kind == FamilyKind::AllImagePreserving; });
}

std::vector<bool> RuleSet::symmetric_mask(const Polynomial& poly) const {
    std::vector<bool> mask(poly.size(), false);
    for (const auto& f : families)
        if (f.kind == FamilyKind::Symmetric && f.ctor < poly.size()) mask[f.ctor] = true;
    return mask;
}

void validate_rules(const Polynomial& poly, const RuleSet& rules) {
    for (std::size_t i = 0; i < rules.explicitEquations.size(); ++i) {
        const auto& e = rules.explicitEquations[i];
        try {
            validate_equation(poly, RawEquation{e.varCount, e.leftCtor, e.rightCtor, e.leftMap, e.rightMap});
        } catch (const Error& err) {
            raise(err.code(), "equation #" + std::to_string(i) + ": " + err.detail());
        }
    }
    for (const auto& f : rules.families)
        if (f.kind == FamilyKind::Symmetric && f.ctor >= poly.size())
            raise(Errc::UnknownConstructor, "symmetric family names constructor index " + std::to_string(f.ctor));
}

std::size_t all_image_preserving_var_count(const Polynomial& poly) {
    std::size_t total = 0;
    for (const auto& c : poly.constructors()) {
        if (c.arity >= 63) return SIZE_MAX;
        total += std::size_t{1} << c.arity;
    }
    return total;
}

namespace {

std::vector<Equation> expand_symmetric(const Polynomial& poly, CtorIndex a, const ExpansionCaps& caps) {
    if (a >= poly.size()) raise(Errc::UnknownConstructor, "symmetric family constructor out of range");
    const std::size_t n = poly.arity(a);
    std::uint64_t count = 1;
    for (std::size_t k = 2; k <= n; ++k) {
        count *= k;
        if (count > caps.maxEquations)
            raise(Errc::CapExceeded, "|Sym(" + std::to_string(n) + ")| exceeds the equation cap");
    }

    std::vector<VarIndex> identity(n);
    std::iota(identity.begin(), identity.end(), VarIndex{0});
    std::vector<VarIndex> perm = identity;
    std::vector<Equation> out;
    out.reserve(count);
    do {
        out.push_back(validate_equation(poly, RawEquation{n, a, a, identity, perm}));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<Equation> expand_all_image_preserving(const Polynomial& poly, const ExpansionCaps& caps) {
    const std::size_t vars = all_image_preserving_var_count(poly);
    if (vars > caps.maxVars || vars > 64)
        raise(Errc::CapExceeded, "variable set of size " + std::to_string(vars) + " exceeds cap " +
                                     std::to_string(caps.maxVars));

    // Per constructor: every map B_a -> S, bucketed by its image (as a bitmask).
    std::vector<std::map<std::uint64_t, std::vector<std::vector<VarIndex>>>> byImage(poly.size());
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        const std::size_t arity = poly.arity(a);
        auto maps = bounded_pow(vars, arity, caps.maxEquations);
        if (!maps) raise(Errc::CapExceeded, "too many maps out of '" + poly.name(a) + "'");
        std::vector<VarIndex> digits(arity);
        for (std::uint64_t idx = 0; idx < *maps; ++idx) {
            decode_digits<VarIndex>(idx, vars, digits);
            std::uint64_t mask = 0;
            for (VarIndex v : digits) mask |= std::uint64_t{1} << v;
            byImage[a][mask].push_back(digits);
        }
    }

    std::uint64_t total = 0;
    for (CtorIndex a = 0; a < poly.size(); ++a)
        for (CtorIndex b = 0; b < poly.size(); ++b)
            for (const auto& [mask, ls] : byImage[a]) {
                auto it = byImage[b].find(mask);
                if (it == byImage[b].end()) continue;
                total += ls.size() * it->second.size();
                if (total > caps.maxEquations)
                    raise(Errc::CapExceeded, "all-image-preserving expansion exceeds the equation cap");
            }

    std::vector<Equation> out;
    out.reserve(total);
    for (CtorIndex a = 0; a < poly.size(); ++a)
        for (CtorIndex b = 0; b < poly.size(); ++b)
            for (const auto& [mask, ls] : byImage[a]) {
                auto it = byImage[b].find(mask);
                if (it == byImage[b].end()) continue;
                for (const auto& l : ls)
                    for (const auto& r : it->second)
                        out.push_back(validate_equation(poly, RawEquation{vars, a, b, l, r}));
            }
    return out;
}

}  // namespace

std::vector<Equation> expand_family(const Polynomial& poly, const Family& family, const ExpansionCaps& caps) {
    switch (family.kind) {
    case FamilyKind::Symmetric: return expand_symmetric(poly, family.ctor, caps);
    case FamilyKind::AllImagePreserving: return expand_all_image_preserving(poly, caps);
    }
    raise(Errc::Internal, "unknown family kind");
}

std::string describe(const Polynomial& poly, const Equation& eq) {
    auto side = [&](CtorIndex c, const std::vector<VarIndex>& map) {
        std::ostringstream out;
        out << poly.name(c) << '(';
        for (std::size_t i = 0; i < map.size(); ++i) out << (i ? "," : "") << 'v' << map[i];
        out << ')';
        return out.str();
    };
    return side(eq.leftCtor, eq.leftMap) + " = " + side(eq.rightCtor, eq.rightMap);
}

}  // namespace qw
