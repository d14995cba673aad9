#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "qw/signature.hpp"
#include "qw/terms.hpp"

namespace qw {

using ClassId = std::uint32_t;

/// Sorted, duplicate-free.
using ClassSet = std::vector<ClassId>;
using RankSet = std::vector<std::size_t>;

/// A constructor applied to classes of the previous stage: the pair (a, f).
struct Node {
    CtorIndex ctor = 0;
    std::vector<ClassId> children;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Caps {
    std::size_t maxClasses = 100'000;
    /// Per stage: nodes of X_k, and assignments per explicit equation.
    std::size_t maxAssignments = 10'000'000;
};

enum class Kernel {
    Parallel,  // new nodes only, OpenMP over node keys and assignments
    Serial,    // literal replay of every node and every full assignment
};

enum class Saturation {
    SinglePass,
    Fixpoint,  // replay the pair set until no union changes the partition
};

struct BuildOptions {
    Caps caps;
    Kernel kernel = Kernel::Parallel;
    Saturation saturation = Saturation::SinglePass;
};

struct StageStats {
    std::size_t stage = 0;
    std::uint64_t nodes = 0;        // |X_k|
    std::uint64_t assignments = 0;  // explicit-equation assignments replayed
    std::uint64_t unions = 0;       // merges of distinct roots
    std::size_t passes = 0;
    std::size_t newClasses = 0;
};

/// The quotient stages Q(0..depth). Class ids are dense and stable: a class
/// keeps its id in every later stage, so Q(k) is exactly the ids below
/// stage_size(k). Immutable apart from extend(); concurrent const queries are safe.
class StageFamily {
public:
    StageFamily(Polynomial poly, RuleSet rules, BuildOptions options = {});

    const Polynomial& poly() const noexcept { return poly_; }
    const RuleSet& rules() const noexcept { return rules_; }
    const BuildOptions& options() const noexcept { return options_; }

    std::size_t depth() const noexcept { return stageSizes_.size() - 1; }
    std::size_t size() const noexcept { return classes_.size(); }
    /// |Q(0)|, ..., |Q(depth)|.
    const std::vector<std::size_t>& stage_sizes() const noexcept { return stageSizes_; }
    const std::vector<StageStats>& stats() const noexcept { return stats_; }

    std::size_t first_stage(ClassId x) const { return info(x).firstStage; }
    std::size_t rank(ClassId x) const { return info(x).rank; }
    std::span<const ClassId> image(ClassId x) const { return info(x).image; }
    const Node& representative(ClassId x) const { return info(x).representative; }

    /// Class of (ctor, children) if that node lies in some X_k, k <= depth.
    std::optional<ClassId> lookup(CtorIndex ctor, std::span<const ClassId> children) const;

    /// Every node of X_1..X_depth with its class, in stage then index order.
    std::size_t member_count() const noexcept { return members_.size(); }
    const Node& member(std::size_t i) const { return members_.at(i).node; }
    ClassId member_class(std::size_t i) const { return members_.at(i).cls; }

    /// Builds further stages up to `newDepth`. Throws CapExceeded.
    void extend(std::size_t newDepth);

private:
    struct ClassInfo {
        std::size_t firstStage;
        std::size_t rank;
        Node representative;
        ClassSet image;
    };
    struct Member {
        Node node;
        ClassId cls;
    };
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept;
    };
    friend class StageBuilder;

    const ClassInfo& info(ClassId x) const { return classes_.at(x); }

    Polynomial poly_;
    RuleSet rules_;
    BuildOptions options_;
    std::vector<ClassInfo> classes_;
    std::vector<std::size_t> stageSizes_{0};
    std::vector<StageStats> stats_;
    std::vector<Member> members_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> memberIndex_;
};

/// Q(0..n) for the given signature and rules. Throws CapExceeded, or the
/// validation errors of validate_rules.
StageFamily build_stages(const Polynomial& poly, const RuleSet& rules, std::size_t n,
                         const BuildOptions& options = {});

/// Class of [t]; extends `sf` to term_rank(t)+1 when needed.
ClassId canonicalize(StageFamily& sf, const TermPool& pool, TermId t);

/// Class of [t] without extending; nullopt when t lies beyond the depth.
std::optional<ClassId> find_class(const StageFamily& sf, const TermPool& pool, TermId t);

bool decide_eq(StageFamily& sf, const TermPool& pool, TermId t1, TermId t2);

/// The union of images of the given classes.
ClassSet union_of(const StageFamily& sf, std::span<const ClassId> xs);

/// Everything reachable by one or more image steps.
ClassSet transitive_closure(const StageFamily& sf, ClassId x);

/// Ranks of the classes exactly n image steps below x (n >= 1).
RankSet r_n(const StageFamily& sf, ClassId x, std::size_t n);

/// A raw term in the class, built from representatives.
TermId materialize(const StageFamily& sf, TermPool& pool, ClassId x);

/// One node per class labelled "id:rank", one edge per image membership.
void export_dot(const StageFamily& sf, std::ostream& out);

}  // namespace qw
