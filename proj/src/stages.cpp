#include "qw/stages.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "qw/counting.hpp"
#include "qw/error.hpp"
#include "union_find.hpp"

namespace qw {

std::size_t StageFamily::KeyHash::operator()(const std::vector<std::uint32_t>& key) const noexcept {
    std::size_t h = 0x84222325cbf29ce4ULL;
    for (auto v : key) h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

namespace {

constexpr std::int64_t kChunk = std::int64_t{1} << 16;

std::vector<std::uint32_t> node_key(CtorIndex ctor, std::span<const ClassId> children) {
    std::vector<std::uint32_t> key;
    key.reserve(children.size() + 1);
    key.push_back(ctor);
    key.insert(key.end(), children.begin(), children.end());
    return key;
}

ClassSet image_set(std::span<const ClassId> children) {
    ClassSet s(children.begin(), children.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Dense indexing of X_k = sum_a Q(k-1)^{B_a}: constructor-major, then the
// child tuple read as a base-N numeral, first child most significant.
class NodeSpace {
public:
    NodeSpace(const Polynomial& poly, std::size_t classes, std::uint64_t cap) : poly_(poly), base_(classes) {
        offsets_.push_back(0);
        for (CtorIndex a = 0; a < poly.size(); ++a) {
            auto count = bounded_pow(base_, poly.arity(a), cap);
            if (!count || offsets_.back() + *count > cap)
                raise(Errc::CapExceeded, "stage node space exceeds max-assignments cap " + std::to_string(cap));
            offsets_.push_back(offsets_.back() + *count);
        }
    }

    std::uint64_t size() const { return offsets_.back(); }
    std::uint64_t base() const { return base_; }

    CtorIndex ctor_of(std::uint64_t idx) const {
        auto it = std::upper_bound(offsets_.begin(), offsets_.end(), idx);
        return static_cast<CtorIndex>(it - offsets_.begin() - 1);
    }

    // Fills `children` (resized to the arity) and returns the constructor.
    CtorIndex decode(std::uint64_t idx, std::vector<ClassId>& children) const {
        CtorIndex a = ctor_of(idx);
        children.resize(poly_.arity(a));
        decode_digits<ClassId>(idx - offsets_[a], base_, children);
        return a;
    }

    std::uint64_t encode(CtorIndex a, std::span<const ClassId> children) const {
        return offsets_[a] + encode_digits<ClassId>(children, base_);
    }

private:
    const Polynomial& poly_;
    std::uint64_t base_;
    std::vector<std::uint64_t> offsets_;
};

}  // namespace

/// Computes one stage from the previous ones.
class StageBuilder {
public:
    explicit StageBuilder(StageFamily& sf) : sf_(sf) {}

    void build_next() {
        const std::size_t k = sf_.depth() + 1;
        const std::size_t n = sf_.stageSizes_.back();
        const std::size_t p = k >= 2 ? sf_.stageSizes_[k - 2] : 0;
        const bool serial = sf_.options_.kernel == Kernel::Serial;
        const Polynomial& poly = sf_.poly_;

        NodeSpace space(poly, n, sf_.options_.caps.maxAssignments);
        const std::uint64_t total = space.size();

        // New nodes have a child first added at stage k-1; everything else
        // already lives in X_{k-1} and keeps its class.
        auto is_new = [&](const std::vector<ClassId>& kids) {
            if (k == 1) return true;
            return std::any_of(kids.begin(), kids.end(), [&](ClassId c) { return c >= p; });
        };

        StageStats stats;
        stats.stage = k;
        stats.nodes = total;

        detail::UnionFind uf(total);
        for (;;) {
            std::uint64_t merged = 0;
            merged += apply_closed_form(space, uf, serial, is_new);
            merged += apply_explicit(space, uf, serial, n, p, k, stats.assignments);
            stats.unions += merged;
            ++stats.passes;
            if (sf_.options_.saturation == Saturation::SinglePass || merged == 0) break;
        }

        // Old-node bookkeeping for the monotonicity audit (serial kernel only).
        std::unordered_map<std::uint64_t, ClassId> oldClassOfRoot;
        std::unordered_map<ClassId, std::uint64_t> rootOfOldClass;

        const std::size_t firstNewId = sf_.classes_.size();
        std::unordered_map<std::uint64_t, ClassId> classOfRoot;
        std::vector<std::pair<std::uint64_t, ClassId>> newMembers;
        std::vector<ClassId> kids;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const CtorIndex a = space.decode(idx, kids);
            if (!is_new(kids)) {
                if (!serial) continue;
                auto old = sf_.lookup(a, kids);
                if (!old) raise(Errc::Internal, "old node missing from member table");
                const std::uint64_t root = uf.find(idx);
                auto [it1, fresh1] = oldClassOfRoot.emplace(root, *old);
                auto [it2, fresh2] = rootOfOldClass.emplace(*old, root);
                if (it1->second != *old || it2->second != root)
                    raise(Errc::Internal, "stage " + std::to_string(k) + " changed the partition of Q(" +
                                              std::to_string(k - 1) + ")");
                continue;
            }
            const std::uint64_t root = uf.find(idx);
            auto [it, fresh] = classOfRoot.emplace(root, static_cast<ClassId>(sf_.classes_.size()));
            if (fresh) {
                if (sf_.classes_.size() >= sf_.options_.caps.maxClasses)
                    raise(Errc::CapExceeded, "class count exceeds max-classes cap " +
                                                 std::to_string(sf_.options_.caps.maxClasses));
                StageFamily::ClassInfo info;
                info.firstStage = k;
                info.representative = Node{a, kids};
                info.image = image_set(kids);
                info.rank = 0;
                for (ClassId c : info.image) info.rank = std::max(info.rank, sf_.classes_[c].rank + 1);
                if (info.rank + 1 != k) raise(Errc::Internal, "class first added off its rank stage");
                sf_.classes_.push_back(std::move(info));
            }
            newMembers.emplace_back(idx, it->second);
        }
        if (serial)
            for (const auto& [root, cls] : classOfRoot)
                if (oldClassOfRoot.count(root))
                    raise(Errc::Internal, "a new node merged into a class of Q(" + std::to_string(k - 1) + ")");

        check_images(space, newMembers, serial);

        for (const auto& [idx, cls] : newMembers) {
            const CtorIndex a = space.decode(idx, kids);
            sf_.memberIndex_.emplace(node_key(a, kids), static_cast<std::uint32_t>(sf_.members_.size()));
            sf_.members_.push_back(StageFamily::Member{Node{a, kids}, cls});
        }

        stats.newClasses = sf_.classes_.size() - firstNewId;
        sf_.stageSizes_.push_back(sf_.classes_.size());
        sf_.stats_.push_back(stats);
    }

private:
    // Symmetric families and the all-image-preserving family, through their
    // closed forms: equal child multisets resp. equal images.
    template <typename IsNew>
    std::uint64_t apply_closed_form(const NodeSpace& space, detail::UnionFind& uf, bool serial, IsNew is_new) {
        const bool allImage = sf_.rules_.has_all_image_preserving();
        const auto symmetric = sf_.rules_.symmetric_mask(sf_.poly_);
        if (!allImage && std::none_of(symmetric.begin(), symmetric.end(), [](bool b) { return b; })) return 0;

        const auto total = static_cast<std::int64_t>(space.size());
        std::unordered_map<std::vector<std::uint32_t>, std::uint64_t, StageFamily::KeyHash> firstWithKey;
        std::uint64_t merged = 0;
        std::vector<std::vector<std::uint32_t>> keys;
        for (std::int64_t start = 0; start < total; start += kChunk) {
            const std::int64_t end = std::min(total, start + kChunk);
            keys.assign(static_cast<std::size_t>(end - start), {});
#pragma omp parallel for schedule(static) if (!serial)
            for (std::int64_t idx = start; idx < end; ++idx) {
                std::vector<ClassId> kids;
                const CtorIndex a = space.decode(static_cast<std::uint64_t>(idx), kids);
                if (!serial && !is_new(kids)) continue;
                auto& key = keys[static_cast<std::size_t>(idx - start)];
                if (allImage) {
                    key = image_set(kids);
                    key.insert(key.begin(), 0u);  // tag: image key, constructor-agnostic
                } else if (symmetric[a]) {
                    std::sort(kids.begin(), kids.end());
                    key = node_key(a, kids);
                    key.insert(key.begin(), 1u);
                }
            }
            for (std::int64_t idx = start; idx < end; ++idx) {
                auto& key = keys[static_cast<std::size_t>(idx - start)];
                if (key.empty()) continue;
                auto [it, fresh] = firstWithKey.emplace(std::move(key), static_cast<std::uint64_t>(idx));
                if (!fresh && uf.unite(it->second, static_cast<std::uint64_t>(idx))) ++merged;
            }
        }
        return merged;
    }

    // Every explicit equation e and assignment t : V_e -> Q(k-1) identifies
    // (a_e, t . l_e) with (b_e, t . r_e). The parallel kernel enumerates only
    // the variables the maps use and skips assignments landing in X_{k-1}.
    std::uint64_t apply_explicit(const NodeSpace& space, detail::UnionFind& uf, bool serial, std::size_t n,
                                 std::size_t p, std::size_t k, std::uint64_t& assignments) {
        std::uint64_t merged = 0;
        const std::uint64_t cap = sf_.options_.caps.maxAssignments;
        for (const Equation& eq : sf_.rules_.explicitEquations) {
            // Variables enumerated and, per map entry, its slot in the assignment.
            std::vector<VarIndex> vars;
            if (serial) {
                vars.resize(eq.varCount);
                for (VarIndex v = 0; v < eq.varCount; ++v) vars[v] = v;
            } else {
                vars = eq.used_variables();
            }
            std::vector<std::size_t> slot(eq.varCount, 0);
            for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;

            auto count = bounded_pow(n, vars.size(), cap);
            if (!count)
                raise(Errc::CapExceeded, "assignments for " + describe(sf_.poly_, eq) + " exceed max-assignments cap " +
                                             std::to_string(cap));
            assignments += *count;

            const auto totalAssign = static_cast<std::int64_t>(*count);
            constexpr std::uint64_t kSkip = ~std::uint64_t{0};
            std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
            for (std::int64_t start = 0; start < totalAssign; start += kChunk) {
                const std::int64_t end = std::min(totalAssign, start + kChunk);
                pairs.assign(static_cast<std::size_t>(end - start), {kSkip, kSkip});
#pragma omp parallel for schedule(static) if (!serial)
                for (std::int64_t ai = start; ai < end; ++ai) {
                    std::vector<ClassId> values(vars.size());
                    decode_digits<ClassId>(static_cast<std::uint64_t>(ai), n, values);
                    if (!serial && k >= 2 &&
                        std::none_of(values.begin(), values.end(), [&](ClassId c) { return c >= p; }))
                        continue;
                    std::vector<ClassId> lhs(eq.leftMap.size()), rhs(eq.rightMap.size());
                    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = values[slot[eq.leftMap[i]]];
                    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = values[slot[eq.rightMap[i]]];
                    pairs[static_cast<std::size_t>(ai - start)] = {space.encode(eq.leftCtor, lhs),
                                                                   space.encode(eq.rightCtor, rhs)};
                }
                for (const auto& [l, r] : pairs)
                    if (l != kSkip && uf.unite(l, r)) ++merged;
            }
        }
        return merged;
    }

    // Every member of a class carries the class's image set.
    void check_images(const NodeSpace& space, const std::vector<std::pair<std::uint64_t, ClassId>>& members,
                      bool serial) {
        const auto count = static_cast<std::int64_t>(members.size());
        bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok) if (!serial)
        for (std::int64_t i = 0; i < count; ++i) {
            std::vector<ClassId> kids;
            const auto& [idx, cls] = members[static_cast<std::size_t>(i)];
            space.decode(idx, kids);
            ok = ok && image_set(kids) == sf_.classes_[cls].image;
        }
        if (!ok) raise(Errc::Internal, "members of one class disagree on their image");
    }

    StageFamily& sf_;
};

StageFamily::StageFamily(Polynomial poly, RuleSet rules, BuildOptions options)
    : poly_(std::move(poly)), rules_(std::move(rules)), options_(options) {
    validate_rules(poly_, rules_);
}

std::optional<ClassId> StageFamily::lookup(CtorIndex ctor, std::span<const ClassId> children) const {
    auto it = memberIndex_.find(node_key(ctor, children));
    if (it == memberIndex_.end()) return std::nullopt;
    return members_[it->second].cls;
}

void StageFamily::extend(std::size_t newDepth) {
    StageBuilder builder(*this);
    while (depth() < newDepth) builder.build_next();
}

StageFamily build_stages(const Polynomial& poly, const RuleSet& rules, std::size_t n, const BuildOptions& options) {
    StageFamily sf(poly, rules, options);
    sf.extend(n);
    return sf;
}

namespace {

ClassId canonicalize_rec(const StageFamily& sf, const TermPool& pool, TermId t,
                         std::unordered_map<TermId, ClassId>& memo) {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    std::vector<ClassId> kids;
    for (TermId c : pool.children(t)) kids.push_back(canonicalize_rec(sf, pool, c, memo));
    auto cls = sf.lookup(pool.ctor(t), kids);
    if (!cls) raise(Errc::Internal, "node of X_k missing from the member table");
    memo.emplace(t, *cls);
    return *cls;
}

void check_same_signature(const StageFamily& sf, const TermPool& pool) {
    if (!(sf.poly() == pool.poly())) raise(Errc::InvalidInput, "term pool and stage family use different signatures");
}

}  // namespace

std::optional<ClassId> find_class(const StageFamily& sf, const TermPool& pool, TermId t) {
    check_same_signature(sf, pool);
    if (pool.rank(t) + 1 > sf.depth()) return std::nullopt;
    std::unordered_map<TermId, ClassId> memo;
    return canonicalize_rec(sf, pool, t, memo);
}

ClassId canonicalize(StageFamily& sf, const TermPool& pool, TermId t) {
    check_same_signature(sf, pool);
    if (pool.rank(t) + 1 > sf.depth()) sf.extend(pool.rank(t) + 1);
    std::unordered_map<TermId, ClassId> memo;
    return canonicalize_rec(sf, pool, t, memo);
}

bool decide_eq(StageFamily& sf, const TermPool& pool, TermId t1, TermId t2) {
    if (pool.rank(t1) != pool.rank(t2)) return false;
    return canonicalize(sf, pool, t1) == canonicalize(sf, pool, t2);
}

ClassSet union_of(const StageFamily& sf, std::span<const ClassId> xs) {
    ClassSet out;
    for (ClassId x : xs) {
        auto im = sf.image(x);
        out.insert(out.end(), im.begin(), im.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ClassSet transitive_closure(const StageFamily& sf, ClassId x) {
    ClassSet closure;
    ClassSet level{x};
    for (;;) {
        level = union_of(sf, level);
        if (level.empty()) break;
        ClassSet merged;
        std::set_union(closure.begin(), closure.end(), level.begin(), level.end(), std::back_inserter(merged));
        closure = std::move(merged);
    }
    return closure;
}

RankSet r_n(const StageFamily& sf, ClassId x, std::size_t n) {
    if (n == 0) raise(Errc::InvalidInput, "R_n is defined for n >= 1");
    ClassSet level{x};
    for (std::size_t i = 0; i < n && !level.empty(); ++i) level = union_of(sf, level);
    RankSet ranks;
    for (ClassId z : level) ranks.push_back(sf.rank(z));
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    return ranks;
}

TermId materialize(const StageFamily& sf, TermPool& pool, ClassId x) {
    std::unordered_map<ClassId, TermId> memo;
    auto go = [&](auto&& self, ClassId c) -> TermId {
        if (auto it = memo.find(c); it != memo.end()) return it->second;
        const Node& rep = sf.representative(c);
        std::vector<TermId> kids;
        for (ClassId child : rep.children) kids.push_back(self(self, child));
        TermId t = pool.make(rep.ctor, kids);
        memo.emplace(c, t);
        return t;
    };
    return go(go, x);
}

void export_dot(const StageFamily& sf, std::ostream& out) {
    out << "digraph stages {\n";
    for (ClassId x = 0; x < sf.size(); ++x) out << "  c" << x << " [label=\"" << x << ':' << sf.rank(x) << "\"];\n";
    for (ClassId x = 0; x < sf.size(); ++x)
        for (ClassId y : sf.image(x)) out << "  c" << x << " -> c" << y << ";\n";
    out << "}\n";
}

}  // namespace qw
