// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "qw/algebra.hpp"
#include "qw/canonical.hpp"
#include "qw/error.hpp"
#include "qw/hered.hpp"
#include "qw/ordinal.hpp"
#include "qw/stages.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace qw;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::set<std::size_t> below(std::size_t n) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) s.insert(i);
    return s;
}

std::string str(const std::vector<std::size_t>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

// 1. Stage sizes and saturation partition vs brute-force normal forms.
Outcome ac1() {
    Outcome o;
    std::size_t terms = 0;
    for (const auto& f : {fixtures::ut2(), fixtures::hf2()}) {
        StageFamily sf = build_stages(f.poly, f.rules, 4);
        if (sf.stage_sizes() != std::vector<std::size_t>{0, 1, 2, 4, 11})
            o.fail(f.name + " stage sizes " + str(sf.stage_sizes()));
        auto trees = oracle::all_trees(f.poly, 3);
        TermPool pool(f.poly);
        auto ids = gen::to_terms(pool, trees);
        const bool ext = f.rules.has_all_image_preserving();
        std::vector<std::string> forms;
        std::vector<std::size_t> labels;
        for (std::size_t i = 0; i < trees.size(); ++i) {
            forms.push_back(ext ? oracle::set_form(trees, i) : oracle::multiset_form(f.poly, trees, i, {1}));
            auto c = find_class(sf, pool, ids[i]);
            if (!c) {
                o.fail(f.name + " term outside the stages");
                return o;
            }
            labels.push_back(*c);
        }
        const auto expected = oracle::partition_by(forms);
        const auto got = oracle::normalize(labels);
        std::size_t disagree = 0;
        for (std::size_t i = 0; i < trees.size(); ++i) disagree += expected.cls[i] != got.cls[i];
        if (disagree) o.fail(f.name + ": " + std::to_string(disagree) + " terms disagree");
        terms += trees.size();
    }
    if (o.pass) o.detail = "sizes [0,1,2,4,11] for ut2 and hf2; " + std::to_string(terms) + " terms agree";
    return o;
}

// 2. Ranks occurring in TC(x) are exactly 0..rank(x)-1.
Outcome ac2() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& f : fixtures::all()) {
        StageFamily sf = build_stages(f.poly, f.rules, 4);
        for (ClassId x = 0; x < sf.size(); ++x, ++checked) {
            std::set<std::size_t> ranks;
            for (ClassId y : transitive_closure(sf, x)) ranks.insert(sf.rank(y));
            if (ranks != below(sf.rank(x))) o.fail(f.name + " class c" + std::to_string(x));
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " classes";
    return o;
}

// 3. The union of R_1..R_4 is exactly 0..rank(x)-1.
Outcome ac3() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& f : fixtures::all()) {
        StageFamily sf = build_stages(f.poly, f.rules, 4);
        for (ClassId x = 0; x < sf.size(); ++x, ++checked) {
            std::set<std::size_t> all;
            for (std::size_t n = 1; n <= 4; ++n)
                for (auto r : r_n(sf, x, n)) all.insert(r);
            if (all != below(sf.rank(x))) o.fail(f.name + " class c" + std::to_string(x));
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " classes";
    return o;
}

// 4. image(F_{x,n}) = R_n(x) u {0} with kappa = aleph.
Outcome ac4() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& f : fixtures::all()) {
        StageFamily sf = build_stages(f.poly, f.rules, 4);
        for (ClassId x = 0; x < sf.size(); ++x)
            for (std::size_t n = 1; n <= 4; ++n, ++checked) {
                auto table = f_surjection(sf, x, n);
                auto r = r_n(sf, x, n);
                std::set<std::size_t> expected(r.begin(), r.end());
                expected.insert(0);
                auto img = table.image();
                if (table.kappa != aleph(f.poly) || std::set<std::size_t>(img.begin(), img.end()) != expected)
                    o.fail(f.name + " class c" + std::to_string(x) + " n=" + std::to_string(n));
            }
    }
    if (o.pass) o.detail = std::to_string(checked) + " (x, n) pairs";
    return o;
}

// 5. Every equation instance over Q(3) lands in one class of Q(4).
Outcome ac5() {
    Outcome o;
    std::size_t instances = 0, violations = 0;
    auto sweep = [&](const StageFamily& sf, const Equation& e, const std::vector<ClassId>& q3) {
        std::vector<std::size_t> g(e.varCount, 0);
        for (;;) {
            std::vector<ClassId> l, r;
            for (auto v : e.leftMap) l.push_back(q3[g[v]]);
            for (auto v : e.rightMap) r.push_back(q3[g[v]]);
            auto a = sf.lookup(e.leftCtor, l);
            auto b = sf.lookup(e.rightCtor, r);
            ++instances;
            if (!a || !b || *a != *b) ++violations;
            std::size_t k = g.size();
            while (k > 0 && ++g[k - 1] == q3.size()) g[--k] = 0;
            if (k == 0) break;
        }
    };
    std::size_t equations = 0;
    for (const auto& f : fixtures::all()) {
        StageFamily sf = build_stages(f.poly, f.rules, 4);
        std::vector<ClassId> q3;
        for (ClassId x = 0; x < sf.size(); ++x)
            if (sf.first_stage(x) <= 3) q3.push_back(x);
        std::vector<Equation> eqs = f.rules.explicitEquations;
        // Family instances too, where the assignment space stays small.
        for (const auto& fam : f.rules.families)
            if (fam.kind == FamilyKind::Symmetric || all_image_preserving_var_count(f.poly) <= 5)
                for (auto& e : expand_family(f.poly, fam)) eqs.push_back(e);
        for (const auto& e : eqs) sweep(sf, e, q3);
        equations += eqs.size();
    }
    if (violations) o.fail(std::to_string(violations) + " violations");
    o.detail += std::to_string(equations) + " equations, " + std::to_string(instances) + " instances, " +
                std::to_string(violations) + " violations";
    return o;
}

// 6. Fold is a homomorphism and the only one, for 100 algebras per fixture.
Outcome ac6() {
    Outcome o;
    std::size_t algebras = 0;
    std::size_t byCarrier[4] = {};
    for (const auto& f : fixtures::all()) {
        StageFamily sf = build_stages(f.poly, f.rules, 4);
        auto algs = random_satisfying_algebras(f.poly, f.rules, 100, 3, 20240611);
        for (const auto& alg : algs) {
            ++byCarrier[alg.carrier()];
            if (!check_rules(f.poly, f.rules, alg)) o.fail(f.name + ": sampled algebra does not satisfy the rules");
            auto h = fold(sf, alg);
            if (!is_homomorphism(h, sf, alg)) o.fail(f.name + ": fold is not a homomorphism");
            const auto n = count_homomorphisms(sf, alg, 2);
            if (n != 1) o.fail(f.name + ": " + std::to_string(n) + " homomorphisms at rank 2");
        }
        algebras += algs.size();
    }
    if (o.pass) o.detail = std::to_string(algebras) + " algebras over " + std::to_string(fixtures::all().size()) + " fixtures (carrier 1/2/3: " +
                 std::to_string(byCarrier[1]) + "/" + std::to_string(byCarrier[2]) + "/" + std::to_string(byCarrier[3]) + ")";
    return o;
}

// 7. Hereditarily small sets vs the all-image-preserving stages.
Outcome ac7() {
    Outcome o;
    const auto f = fixtures::hf2();
    auto sets = hf_enumerate(f.poly, 3, 1000);
    if (sets.size() != 11) o.fail(std::to_string(sets.size()) + " sets");
    StageFamily sf = build_stages(f.poly, f.rules, 4);
    TermPool pool(f.poly);
    std::vector<HfSet> value(sf.size());
    for (ClassId x = 0; x < sf.size(); ++x) value[x] = canon_extensional(pool, materialize(sf, pool, x));
    std::set<HfSet> hit(value.begin(), value.end());
    if (hit.size() != sf.size()) o.fail("not injective");
    if (hit != std::set<HfSet>(sets.begin(), sets.end())) o.fail("not onto the enumerated sets");
    for (ClassId x = 0; x < sf.size(); ++x) {
        if (value[x].rank() != sf.rank(x)) o.fail("rank differs at c" + std::to_string(x));
        std::set<HfSet> img;
        for (ClassId c : sf.image(x)) img.insert(value[c]);
        const auto el = value[x].elements();
        if (img != std::set<HfSet>(el.begin(), el.end())) o.fail("image differs at c" + std::to_string(x));
    }
    std::size_t changed = 0;
    for (std::size_t a = 0; a <= 5; ++a) {
        auto lo = approx_fold(sf, a);
        auto hi = approx_fold(sf, a + 1);
        for (ClassId x = 0; x < sf.size(); ++x) {
            std::optional<HfSet> restricted = hi[x] && hi[x]->rank() < a ? hi[x] : std::nullopt;
            if (lo[x] && lo[x]->rank() >= a) ++changed;
            if (lo[x] != restricted) ++changed;
        }
        for (ClassId x = 0; x < sf.size(); ++x)
            if (a > sf.rank(x) && lo[x] != value[x]) ++changed;
    }
    if (changed) o.fail(std::to_string(changed) + " changed approximation values");
    if (o.pass) o.detail = "11 sets in rank and image preserving bijection; approx_fold 0..5 monotone";
    return o;
}

// 8. Ordered terms into the symmetric stages: rank preserved and onto.
Outcome ac8() {
    Outcome o;
    auto ordered = fixtures::ordered();
    auto unordered = fixtures::ut2();
    StageFamily sf = build_stages(unordered.poly, unordered.rules, 5);
    TermPool pool(ordered.poly);
    auto terms = enumerate_terms(pool, 4, 1'000'000);
    std::set<ClassId> hit;
    for (TermId t : terms) {
        auto r = ordered_to_unordered(sf, pool, t);
        if (!r.preserved()) o.fail("rank not preserved for " + render_term(pool, t));
        hit.insert(r.cls);
    }
    std::size_t target = 0;
    for (ClassId x = 0; x < sf.size(); ++x) target += sf.rank(x) <= 4;
    if (hit.size() != target) o.fail(std::to_string(hit.size()) + " of " + std::to_string(target) + " classes hit");
    for (std::size_t beta = 0; beta <= 8; ++beta)
        if (term_rank(pool, tower(pool, 1, beta)) != beta) o.fail("tower rank at " + std::to_string(beta));
    if (o.pass)
        o.detail = std::to_string(terms.size()) + " terms onto " + std::to_string(target) + " classes; towers 0..8";
    return o;
}

// 9. Validator soundness and expansion counts.
Outcome ac9() {
    Outcome o;
    try {
        validate_equation(fixtures::leaf_node(), RawEquation{2, 1, 1, {0, 0}, {0, 1}});
        o.fail("unequal images accepted");
    } catch (const Error& e) {
        if (e.code() != Errc::NotImagePreserving) o.fail("wrong error code");
    }
    auto maps = [](std::size_t m, std::size_t n) {
        std::vector<std::vector<VarIndex>> out;
        std::vector<VarIndex> cur(m, 0);
        for (;;) {
            out.push_back(cur);
            std::size_t i = m;
            while (i > 0 && ++cur[i - 1] == n) cur[--i] = 0;
            if (i == 0) break;
        }
        return out;
    };
    auto image = [](const std::vector<VarIndex>& m) { return std::set<VarIndex>(m.begin(), m.end()); };
    std::size_t expansions = 0;
    auto validate_all = [&](const Polynomial& p, const std::vector<Equation>& eqs) {
        for (const auto& e : eqs) {
            validate_equation(p, RawEquation{e.varCount, e.leftCtor, e.rightCtor, e.leftMap, e.rightMap});
            ++expansions;
        }
    };
    for (std::size_t arity = 0; arity <= 3; ++arity) {
        const Polynomial p({{"z", 0}, {"f", arity}});
        auto eqs = expand_family(p, Family{FamilyKind::Symmetric, 1});
        std::size_t fact = 1;
        for (std::size_t k = 2; k <= arity; ++k) fact *= k;
        if (eqs.size() != fact) o.fail("symmetric count at arity " + std::to_string(arity));
        validate_all(p, eqs);
    }
    ExpansionCaps caps;
    caps.maxEquations = 10'000'000;
    for (const auto& p : {Polynomial({{"z", 0}}), Polynomial({{"u", 1}}), fixtures::hf2().poly,
                          Polynomial({{"z", 0}, {"u", 1}, {"b", 2}}), fixtures::hf3().poly, Polynomial({{"t", 3}})}) {
        auto eqs = expand_family(p, Family{FamilyKind::AllImagePreserving, 0}, caps);
        const std::size_t s = all_image_preserving_var_count(p);
        std::map<std::set<VarIndex>, std::size_t> byImage;  // maps per image, summed over constructors
        for (CtorIndex a = 0; a < p.size(); ++a)
            for (const auto& m : maps(p.arity(a), s)) ++byImage[image(m)];
        std::size_t brute = 0;
        for (const auto& [img, k] : byImage) brute += k * k;
        if (eqs.size() != brute) o.fail("all-image-preserving count " + std::to_string(eqs.size()) + " vs " + std::to_string(brute));
        validate_all(p, eqs);
    }
    if (o.pass) o.detail = "rejection ok; " + std::to_string(expansions) + " expanded equations validate, counts match";
    return o;
}

// 10. Ordinal tools round trips.
Outcome ac10() {
    Outcome o;
    for (std::uint64_t m = 0; m < 256; ++m)
        for (std::uint64_t n = 0; n < 256; ++n)
            if (cantor_unpair(cantor_pair(m, n)) != std::make_pair(m, n)) o.fail("pair round trip");
    std::size_t tuples = 0;
    for (std::size_t len = 1; len <= 3; ++len) {
        std::vector<std::uint64_t> t(len, 0);
        for (;;) {
            ++tuples;
            if (omega_tuple_decode(omega_tuple_code(t)) != t) o.fail("tuple round trip");
            std::size_t i = len;
            while (i > 0 && ++t[i - 1] == 8) t[--i] = 0;
            if (i == 0) break;
        }
    }
    gen::Rng rng(20240611);
    for (int i = 0; i < 1000; ++i) {
        auto raw = gen::subset(rng, 64, 16);
        auto ot = order_type(FiniteOrdinalSet(raw));
        const std::set<std::size_t> s(raw.begin(), raw.end());
        bool ok = ot.beta == s.size() && std::set<std::size_t>(ot.theta.begin(), ot.theta.end()) == s;
        for (std::size_t k = 1; k < ot.theta.size(); ++k) ok = ok && ot.theta[k - 1] < ot.theta[k];
        if (!ok) o.fail("order type of a random set");
    }
    if (o.pass) o.detail = "65536 pairs, " + std::to_string(tuples) + " tuples, 1000 random sets";
    return o;
}

struct Criterion {
    const char* id;
    const char* name;
    double limitSeconds;  // 0 when the criterion states no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "partition oracle", 5, ac1},
        {"AC2", "ranks in transitive closure", 1, ac2},
        {"AC3", "rank is the union of R_n", 0, ac3},
        {"AC4", "F_{x,n} surjects onto R_n u {0}", 0, ac4},
        {"AC5", "equation respect", 0, ac5},
        {"AC6", "universal property", 30, ac6},
        {"AC7", "hereditarily small sets", 0, ac7},
        {"AC8", "ordered to unordered preserves rank", 0, ac8},
        {"AC9", "validator soundness", 0, ac9},
        {"AC10", "ordinal tools", 0, ac10},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limitSeconds > 0 && secs >= c.limitSeconds) o.fail("runtime over " + std::to_string(c.limitSeconds) + " s");
        if (!o.pass) ++failures;
        std::printf("[%s] %s %s: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
