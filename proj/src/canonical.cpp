#include "qw/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "qw/error.hpp"

namespace qw {

std::strong_ordering operator<=>(const CanonicalTree& a, const CanonicalTree& b) {
    if (auto c = a.rank <=> b.rank; c != 0) return c;
    if (auto c = a.ctor <=> b.ctor; c != 0) return c;
    return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(),
                                                  b.children.end());
}

CanonicalTree canon_multiset(const TermPool& pool, TermId t, const std::vector<bool>& symmetric) {
    CanonicalTree out;
    out.ctor = pool.ctor(t);
    out.rank = pool.rank(t);
    for (TermId c : pool.children(t)) out.children.push_back(canon_multiset(pool, c, symmetric));
    if (out.ctor < symmetric.size() && symmetric[out.ctor]) std::sort(out.children.begin(), out.children.end());
    return out;
}

HfSet canon_extensional(const TermPool& pool, TermId t) {
    std::unordered_map<TermId, HfSet> memo;
    auto go = [&](auto&& self, TermId u) -> HfSet {
        if (auto it = memo.find(u); it != memo.end()) return it->second;
        std::vector<HfSet> elements;
        for (TermId c : pool.children(u)) elements.push_back(self(self, c));
        HfSet s = HfSet::of(std::move(elements));
        memo.emplace(u, s);
        return s;
    };
    return go(go, t);
}

std::string render(const Polynomial& poly, const CanonicalTree& t) {
    std::string out = "(" + poly.name(t.ctor);
    for (const auto& c : t.children) out += " " + render(poly, c);
    return out + ")";
}

CanonicalEngine select_engine(const RuleSet& rules) {
    if (!rules.explicitEquations.empty())
        raise(Errc::UnsupportedRuleSet, "explicit equations have no canonical fast path; use the stage engine");
    return rules.has_all_image_preserving() ? CanonicalEngine::Extensional : CanonicalEngine::Multiset;
}

CrosscheckReport crosscheck(const Polynomial& poly, const RuleSet& rules, std::size_t maxStage,
                            const BuildOptions& options, std::size_t termCap) {
    CrosscheckReport report;
    report.engine = select_engine(rules);

    StageFamily sf = build_stages(poly, rules, maxStage, options);
    report.saturationCounts.assign(sf.stage_sizes().begin() + 1, sf.stage_sizes().end());

    TermPool pool(poly);
    std::vector<TermId> terms = maxStage == 0 ? std::vector<TermId>{} : enumerate_terms(pool, maxStage - 1, termCap);
    report.termCount = terms.size();

    const auto symmetric = rules.symmetric_mask(poly);
    const auto n = static_cast<std::int64_t>(terms.size());
    std::vector<ClassId> classes(terms.size());
    std::vector<CanonicalTree> trees;
    std::vector<HfSet> sets;
    if (report.engine == CanonicalEngine::Multiset)
        trees.resize(terms.size());
    else
        sets.resize(terms.size());

    // The pool is only read from here on.
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        classes[k] = *find_class(sf, pool, terms[k]);
        if (report.engine == CanonicalEngine::Multiset)
            trees[k] = canon_multiset(pool, terms[k], symmetric);
        else
            sets[k] = canon_extensional(pool, terms[k]);
    }

    // Partitions agree iff canonical form -> class is a bijection.
    std::map<CanonicalTree, ClassId> classOfTree;
    std::map<HfSet, ClassId> classOfSet;
    std::unordered_map<ClassId, std::size_t> firstTermOfClass;
    report.canonicalCounts.assign(maxStage, 0);
    for (std::size_t k = 0; k < terms.size(); ++k) {
        ClassId expected;
        bool fresh;
        if (report.engine == CanonicalEngine::Multiset) {
            auto [it, f] = classOfTree.emplace(trees[k], classes[k]);
            expected = it->second;
            fresh = f;
        } else {
            auto [it, f] = classOfSet.emplace(sets[k], classes[k]);
            expected = it->second;
            fresh = f;
        }
        auto [cit, newClass] = firstTermOfClass.emplace(classes[k], k);
        if (expected != classes[k] || fresh != newClass) ++report.mismatches;
        if (fresh)
            for (std::size_t s = pool.rank(terms[k]); s < maxStage; ++s) ++report.canonicalCounts[s];
    }
    return report;
}

}  // namespace qw
