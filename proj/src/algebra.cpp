#include "qw/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "qw/counting.hpp"
#include "qw/error.hpp"

namespace qw {

FiniteAlgebra::FiniteAlgebra(const Polynomial& poly, std::size_t carrier, std::vector<std::vector<Element>> tables)
    : carrier_(carrier), tables_(std::move(tables)) {
    if (tables_.size() != poly.size())
        raise(Errc::ArityMismatch, "algebra has " + std::to_string(tables_.size()) + " tables for " +
                                       std::to_string(poly.size()) + " constructors");
    if (carrier_ == 0 && poly.first_nullary())
        raise(Errc::InvalidInput, "a nullary constructor needs a nonempty carrier");
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        arities_.push_back(poly.arity(a));
        auto expected = bounded_pow(carrier_, poly.arity(a), UINT32_MAX);
        if (!expected || tables_[a].size() != *expected)
            raise(Errc::InvalidInput, "table for '" + poly.name(a) + "' has " + std::to_string(tables_[a].size()) +
                                          " entries");
        for (Element v : tables_[a])
            if (v >= carrier_)
                raise(Errc::InvalidInput, "table for '" + poly.name(a) + "' has out-of-range entry " +
                                              std::to_string(v));
    }
}

Element FiniteAlgebra::apply(CtorIndex a, std::span<const Element> args) const {
    return tables_.at(a)[encode_digits<Element>(args, carrier_)];
}

Element FiniteAlgebra::eval(const TermPool& pool, TermId t) const {
    std::vector<Element> args;
    for (TermId c : pool.children(t)) args.push_back(eval(pool, c));
    return apply(pool.ctor(t), args);
}

FiniteAlgebra terminal_algebra(const Polynomial& poly) {
    std::vector<std::vector<Element>> tables;
    for (std::size_t a = 0; a < poly.size(); ++a) tables.emplace_back(1, Element{0});
    return FiniteAlgebra(poly, 1, std::move(tables));
}

std::string describe(const Polynomial& poly, const RuleWitness& w) {
    auto app = [&](CtorIndex c, const std::vector<Element>& args, Element value) {
        std::ostringstream out;
        out << poly.name(c) << '(';
        for (std::size_t i = 0; i < args.size(); ++i) out << (i ? "," : "") << args[i];
        out << ")=" << value;
        return out.str();
    };
    return app(w.leftCtor, w.leftArgs, w.leftValue) + " but " + app(w.rightCtor, w.rightArgs, w.rightValue) +
           " [" + w.source + "]";
}

namespace {

std::uint64_t tuple_count(std::size_t carrier, std::size_t arity, std::uint64_t cap) {
    auto n = bounded_pow(carrier, arity, cap);
    if (!n) raise(Errc::CapExceeded, "argument tuples exceed cap " + std::to_string(cap));
    return *n;
}

}  // namespace

SatisfactionReport check_satisfies(const FiniteAlgebra& alg, std::span<const Equation> eqs, std::uint64_t cap) {
    for (std::size_t e = 0; e < eqs.size(); ++e) {
        const Equation& eq = eqs[e];
        const std::uint64_t n = tuple_count(alg.carrier(), eq.varCount, cap);
        std::vector<Element> h(eq.varCount), lhs(eq.leftMap.size()), rhs(eq.rightMap.size());
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            decode_digits<Element>(idx, alg.carrier(), h);
            for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = h[eq.leftMap[i]];
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = h[eq.rightMap[i]];
            const Element lv = alg.apply(eq.leftCtor, lhs);
            const Element rv = alg.apply(eq.rightCtor, rhs);
            if (lv != rv) {
                RuleWitness w{"equation #" + std::to_string(e), eq.leftCtor, lhs, eq.rightCtor, rhs, lv, rv, e, h};
                return {false, std::move(w)};
            }
        }
    }
    return {};
}

SatisfactionReport check_equal_image(const FiniteAlgebra& alg, std::uint64_t cap) {
    struct Seen {
        CtorIndex ctor;
        std::vector<Element> args;
        Element value;
    };
    std::map<std::vector<Element>, Seen> byImage;
    for (CtorIndex a = 0; a < alg.ctor_count(); ++a) {
        const std::uint64_t n = tuple_count(alg.carrier(), alg.arity(a), cap);
        std::vector<Element> args(alg.arity(a));
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            decode_digits<Element>(idx, alg.carrier(), args);
            std::vector<Element> image = args;
            std::sort(image.begin(), image.end());
            image.erase(std::unique(image.begin(), image.end()), image.end());
            const Element v = alg.apply(a, args);
            auto [it, fresh] = byImage.emplace(std::move(image), Seen{a, args, v});
            if (!fresh && it->second.value != v) {
                RuleWitness w{"all-image-preserving", it->second.ctor, it->second.args, a, args, it->second.value, v, std::nullopt, {}};
                return {false, std::move(w)};
            }
        }
    }
    return {};
}

SatisfactionReport check_symmetric(const FiniteAlgebra& alg, std::span<const CtorIndex> ctors, std::uint64_t cap) {
    for (CtorIndex a : ctors) {
        const std::uint64_t n = tuple_count(alg.carrier(), alg.arity(a), cap);
        std::vector<Element> args(alg.arity(a));
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            decode_digits<Element>(idx, alg.carrier(), args);
            std::vector<Element> sorted = args;
            std::sort(sorted.begin(), sorted.end());
            const Element v = alg.apply(a, args);
            const Element sv = alg.apply(a, sorted);
            if (v != sv) {
                RuleWitness w{"symmetric", a, sorted, a, args, sv, v, std::nullopt, {}};
                return {false, std::move(w)};
            }
        }
    }
    return {};
}

SatisfactionReport check_rules(const Polynomial& poly, const RuleSet& rules, const FiniteAlgebra& alg,
                               std::uint64_t cap) {
    if (auto r = check_satisfies(alg, rules.explicitEquations, cap); !r) return r;
    std::vector<CtorIndex> sym;
    for (const auto& f : rules.families)
        if (f.kind == FamilyKind::Symmetric) sym.push_back(f.ctor);
    if (auto r = check_symmetric(alg, sym, cap); !r) return r;
    if (rules.has_all_image_preserving())
        if (auto r = check_equal_image(alg, cap); !r) return r;
    (void)poly;
    return {};
}

namespace {

std::vector<Element> apply_children(std::span<const Element> h, std::span<const ClassId> children) {
    std::vector<Element> args;
    args.reserve(children.size());
    for (ClassId c : children) args.push_back(h[c]);
    return args;
}

}  // namespace

std::vector<Element> fold(const StageFamily& sf, const FiniteAlgebra& alg) {
    std::vector<Element> h(sf.size());
    for (ClassId x = 0; x < sf.size(); ++x) {
        const Node& rep = sf.representative(x);
        h[x] = alg.apply(rep.ctor, apply_children(h, rep.children));
    }

    auto rules = check_rules(sf.poly(), sf.rules(), alg);
    if (rules) {
        // The closed-form rule checks cover every identification the stages make;
        // a disagreement among members here would be an engine fault.
        for (std::size_t i = 0; i < sf.member_count(); ++i) {
            const Node& n = sf.member(i);
            if (alg.apply(n.ctor, apply_children(h, n.children)) != h[sf.member_class(i)])
                raise(Errc::Internal, "fold is not well defined although the algebra satisfies the rules");
        }
        return h;
    }

    for (std::size_t i = 0; i < sf.member_count(); ++i) {
        const Node& n = sf.member(i);
        const ClassId x = sf.member_class(i);
        auto args = apply_children(h, n.children);
        const Element v = alg.apply(n.ctor, args);
        if (v != h[x]) {
            const Node& rep = sf.representative(x);
            RuleWitness w{"merged in class " + std::to_string(x), rep.ctor, apply_children(h, rep.children),
                          n.ctor, args, h[x], v, std::nullopt, {}};
            raise(Errc::NotSatisfying, describe(sf.poly(), w));
        }
    }
    raise(Errc::NotSatisfying, describe(sf.poly(), *rules.witness));
}

bool is_homomorphism(std::span<const Element> h, const StageFamily& sf, const FiniteAlgebra& alg) {
    if (h.size() < sf.size()) raise(Errc::InvalidInput, "h must assign a value to every class");
    for (std::size_t i = 0; i < sf.member_count(); ++i) {
        const Node& n = sf.member(i);
        if (h[sf.member_class(i)] != alg.apply(n.ctor, apply_children(h, n.children))) return false;
    }
    return true;
}

std::uint64_t count_homomorphisms(const StageFamily& sf, const FiniteAlgebra& alg, std::size_t rankBound,
                                  std::uint64_t cap) {
    if (rankBound + 1 > sf.depth())
        raise(Errc::InvalidInput, "rank bound " + std::to_string(rankBound) + " needs depth " +
                                      std::to_string(rankBound + 1));
    const std::size_t classes = sf.stage_sizes()[rankBound + 1];
    auto functions = bounded_pow(alg.carrier(), classes, cap);
    if (!functions)
        raise(Errc::CapExceeded, std::to_string(alg.carrier()) + "^" + std::to_string(classes) +
                                     " candidate functions exceed cap " + std::to_string(cap));

    // Parent-side constraints: members whose class has rank <= rankBound.
    std::vector<std::size_t> constraints;
    for (std::size_t i = 0; i < sf.member_count(); ++i)
        if (sf.member_class(i) < classes) constraints.push_back(i);

    const auto total = static_cast<std::int64_t>(*functions);
    const std::size_t m = alg.carrier();
    std::uint64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::vector<Element> h(classes);
        decode_digits<Element>(static_cast<std::uint64_t>(idx), m, h);
        bool ok = true;
        for (std::size_t i : constraints) {
            const Node& n = sf.member(i);
            if (h[sf.member_class(i)] != alg.apply(n.ctor, apply_children(h, n.children))) {
                ok = false;
                break;
            }
        }
        if (ok) ++count;
    }
    return count;
}

FiniteAlgebra stage_algebra(const StageFamily& sf) {
    const Polynomial& poly = sf.poly();
    const std::size_t carrier = sf.size() + 1;
    const auto overflow = static_cast<Element>(sf.size());
    const std::size_t limitRank = sf.depth() >= 1 ? sf.depth() - 1 : 0;

    std::vector<std::vector<Element>> tables;
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        const std::uint64_t n = tuple_count(carrier, poly.arity(a), 10'000'000);
        std::vector<Element> table(n, overflow);
        std::vector<Element> args(poly.arity(a));
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            decode_digits<Element>(idx, carrier, args);
            bool inside = sf.depth() >= 1;
            for (Element e : args)
                if (e == overflow || sf.rank(e) >= limitRank) inside = false;
            if (!inside) continue;
            std::vector<ClassId> kids(args.begin(), args.end());
            auto cls = sf.lookup(a, kids);
            if (!cls) raise(Errc::Internal, "truncated node missing from the member table");
            table[idx] = *cls;
        }
        tables.push_back(std::move(table));
    }
    return FiniteAlgebra(poly, carrier, std::move(tables));
}

RankReport ordered_to_unordered(StageFamily& unordered, const TermPool& pool, TermId t) {
    RankReport r;
    r.cls = canonicalize(unordered, pool, t);
    r.termRank = pool.rank(t);
    r.classRank = unordered.rank(r.cls);
    return r;
}

FiniteAlgebra random_algebra(const Polynomial& poly, std::size_t carrier, std::mt19937_64& rng) {
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(carrier - 1));
    std::vector<std::vector<Element>> tables;
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        std::vector<Element> table(tuple_count(carrier, poly.arity(a), 10'000'000));
        for (auto& v : table) v = pick(rng);
        tables.push_back(std::move(table));
    }
    return FiniteAlgebra(poly, carrier, std::move(tables));
}

std::vector<FiniteAlgebra> random_satisfying_algebras(const Polynomial& poly, const RuleSet& rules,
                                                      std::size_t count, std::size_t maxCarrier, std::uint64_t seed,
                                                      std::size_t maxTries) {
    if (maxCarrier == 0) raise(Errc::InvalidInput, "carrier bound must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(1, maxCarrier);
    // Draws per carrier size before a new size is drawn; without it small
    // carriers, which satisfy most rules, would dominate the sample.
    constexpr std::size_t patience = 1000;
    std::vector<FiniteAlgebra> out;
    std::size_t tries = 0;
    while (out.size() < count) {
        const std::size_t m = size(rng);
        for (std::size_t k = 0; k < patience; ++k, ++tries) {
            if (tries >= maxTries)
                raise(Errc::CapExceeded, "found only " + std::to_string(out.size()) + " satisfying algebras in " +
                                             std::to_string(maxTries) + " draws");
            FiniteAlgebra alg = random_algebra(poly, m, rng);
            if (check_rules(poly, rules, alg)) {
                out.push_back(std::move(alg));
                break;
            }
        }
    }
    return out;
}

}  // namespace qw
