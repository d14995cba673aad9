#include "qw/hered.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "qw/error.hpp"

namespace qw {

bool is_small(const Polynomial& poly, std::size_t cardinality) {
    for (const auto& c : poly.constructors()) {
        if (cardinality == 0 ? c.arity == 0 : c.arity >= cardinality) return true;
    }
    return false;
}

bool is_hereditarily_small(const Polynomial& poly, const HfSet& x) {
    if (!is_small(poly, x.size())) return false;
    for (const auto& e : x.elements())
        if (!is_hereditarily_small(poly, e)) return false;
    return true;
}

HfSet hf_build(const Polynomial& poly, CtorIndex a, std::span<const HfSet> children) {
    if (a >= poly.size()) raise(Errc::UnknownConstructor, "constructor index " + std::to_string(a));
    if (children.size() != poly.arity(a))
        raise(Errc::ArityMismatch, "'" + poly.name(a) + "' expects " + std::to_string(poly.arity(a)) +
                                       " children, got " + std::to_string(children.size()));
    return HfSet::of(std::vector<HfSet>(children.begin(), children.end()));
}

std::vector<HfSet> hf_enumerate(const Polynomial& poly, std::size_t maxRank, std::size_t cap) {
    std::vector<HfSet> out;
    if (!is_small(poly, 0)) return out;
    auto push = [&](HfSet x) {
        if (out.size() >= cap) raise(Errc::CapExceeded, "enumeration exceeds cap " + std::to_string(cap));
        out.push_back(std::move(x));
    };
    push(HfSet());

    const std::size_t maxSize = poly.max_arity();
    std::size_t below = 0;
    for (std::size_t r = 1; r <= maxRank; ++r) {
        const std::size_t upTo = out.size();  // rank <= r-1 occupy [0, upTo), rank r-1 is [below, upTo)
        if (upTo == below) break;
        std::vector<HfSet> level;
        for (std::size_t k = 1; k <= std::min(maxSize, upTo); ++k) {
            std::vector<std::size_t> pick(k);
            for (std::size_t i = 0; i < k; ++i) pick[i] = i;
            for (;;) {
                if (pick.back() >= below) {
                    std::vector<HfSet> elements;
                    for (std::size_t i : pick) elements.push_back(out[i]);
                    level.push_back(HfSet::of(std::move(elements)));
                    if (out.size() + level.size() > cap)
                        raise(Errc::CapExceeded, "enumeration exceeds cap " + std::to_string(cap));
                }
                // next k-combination of [0, upTo) in lexicographic order
                std::size_t i = k;
                while (i > 0 && pick[i - 1] == upTo - k + (i - 1)) --i;
                if (i == 0) break;
                ++pick[i - 1];
                for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
        std::sort(level.begin(), level.end());
        for (auto& x : level) push(std::move(x));
        below = upTo;
    }
    return out;
}

std::optional<CtorIndex> fold_constructor(const Polynomial& poly, std::size_t cardinality) {
    std::optional<CtorIndex> best;
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        const std::size_t m = poly.arity(a);
        const bool fits = cardinality == 0 ? m == 0 : m >= cardinality;
        if (fits && (!best || m < poly.arity(*best))) best = a;
    }
    return best;
}

bool check_ip_algebra(const Polynomial& poly, const FiniteAlgebra& alg) {
    if (alg.ctor_count() != poly.size()) raise(Errc::InvalidInput, "algebra and signature disagree");
    return check_equal_image(alg).satisfied;
}

namespace {

// The canonical surjection B_a ->> elements(x), repeating the last element.
template <typename T>
std::vector<T> surject(std::span<const T> elements, std::size_t arity) {
    std::vector<T> f(arity);
    for (std::size_t i = 0; i < arity; ++i) f[i] = elements[std::min(i, elements.size() - 1)];
    return f;
}

CtorIndex constructor_for(const Polynomial& poly, const HfSet& x) {
    auto a = fold_constructor(poly, x.size());
    if (!a)
        raise(Errc::NoConstructorFits, render_braces(x) + " has " + std::to_string(x.size()) +
                                           " elements, which no arity surjects onto");
    return *a;
}

}  // namespace

Element hf_fold(const Polynomial& poly, const FiniteAlgebra& alg, const HfSet& x) {
    if (alg.ctor_count() != poly.size()) raise(Errc::InvalidInput, "algebra and signature disagree");
    if (auto report = check_equal_image(alg); !report)
        raise(Errc::NotSatisfying, describe(poly, *report.witness));

    std::unordered_map<HfSet, Element> memo;
    std::function<Element(const HfSet&)> h = [&](const HfSet& s) -> Element {
        if (auto it = memo.find(s); it != memo.end()) return it->second;
        const CtorIndex a = constructor_for(poly, s);
        std::vector<Element> values;
        for (const auto& e : s.elements()) values.push_back(h(e));
        const Element v = alg.apply(a, values.empty() ? values : surject<Element>(values, poly.arity(a)));
        memo.emplace(s, v);
        return v;
    };
    return h(x);
}

TermId hf_to_term(const Polynomial& poly, TermPool& pool, const HfSet& x) {
    const CtorIndex a = constructor_for(poly, x);
    std::vector<TermId> kids;
    for (const auto& e : x.elements()) kids.push_back(hf_to_term(poly, pool, e));
    if (kids.empty()) return pool.make(a, std::span<const TermId>{});
    return pool.make(a, surject<TermId>(kids, poly.arity(a)));
}

std::vector<std::optional<HfSet>> approx_fold(const StageFamily& sf, std::size_t alphaBound) {
    if (!sf.rules().has_all_image_preserving())
        raise(Errc::UnsupportedRuleSet, "approx_fold needs the all-image-preserving family");
    std::vector<std::optional<HfSet>> value(sf.size());
    // Children always carry smaller ids than their parents.
    for (ClassId x = 0; x < sf.size(); ++x) {
        std::vector<HfSet> elements;
        bool defined = true;
        for (ClassId y : sf.image(x)) {
            if (!value[y]) {
                defined = false;
                break;
            }
            elements.push_back(*value[y]);
        }
        if (!defined) continue;
        HfSet s = HfSet::of(std::move(elements));
        if (s.rank() < alphaBound) value[x] = std::move(s);
    }
    return value;
}

}  // namespace qw
