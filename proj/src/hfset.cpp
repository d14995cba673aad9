#include "qw/hfset.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "qw/error.hpp"

namespace qw {

struct HfSet::Node {
    std::vector<HfSet> elements;
    std::size_t rank = 0;
    std::size_t hash = 0;
};

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

// Weak entries let unreferenced sets die; dead entries are swept lazily
// when their bucket is next visited.
class HfInterner {
public:
    template <typename Make>
    std::shared_ptr<const HfSet::Node> get(std::size_t hash, const std::vector<HfSet>& elements, Make make) {
        std::lock_guard lock(mutex_);
        auto [lo, hi] = table_.equal_range(hash);
        for (auto it = lo; it != hi;) {
            auto live = it->second.lock();
            if (!live) {
                it = table_.erase(it);
                continue;
            }
            if (live->elements == elements) return live;
            ++it;
        }
        auto fresh = make();
        table_.emplace(hash, fresh);
        return fresh;
    }

private:
    std::mutex mutex_;
    std::unordered_multimap<std::size_t, std::weak_ptr<const HfSet::Node>> table_;
};

namespace {

HfInterner& interner() {
    static auto* instance = new HfInterner;  // never destroyed: outlives static HfSets
    return *instance;
}

}  // namespace

HfSet HfSet::intern(std::vector<HfSet> sortedUnique) {
    std::size_t hash = combine(0x51ed270b27aa3c15ULL, sortedUnique.size());
    std::size_t rank = 0;
    for (const auto& e : sortedUnique) {
        hash = combine(hash, e.hash());
        rank = std::max(rank, e.rank() + 1);
    }
    auto node = interner().get(hash, sortedUnique, [&] {
        auto n = std::make_shared<Node>();
        n->elements = std::move(sortedUnique);
        n->rank = rank;
        n->hash = hash;
        return std::shared_ptr<const Node>(std::move(n));
    });
    return HfSet(std::move(node));
}

HfSet::HfSet() {
    static const std::shared_ptr<const Node> emptyNode = intern({}).node_;
    node_ = emptyNode;
}

HfSet HfSet::of(std::vector<HfSet> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return intern(std::move(elements));
}

std::span<const HfSet> HfSet::elements() const noexcept { return node_->elements; }
std::size_t HfSet::rank() const noexcept { return node_->rank; }
std::size_t HfSet::hash() const noexcept { return node_->hash; }

bool HfSet::contains(const HfSet& x) const {
    auto els = elements();
    return std::binary_search(els.begin(), els.end(), x);
}

std::strong_ordering operator<=>(const HfSet& a, const HfSet& b) noexcept {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.rank() <=> b.rank(); c != 0) return c;
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    auto ea = a.elements();
    auto eb = b.elements();
    for (std::size_t i = 0; i < ea.size(); ++i)
        if (auto c = ea[i] <=> eb[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

std::string render_braces(const HfSet& x) {
    if (x.empty()) return "∅";
    std::string out = "{";
    bool first = true;
    for (const auto& e : x.elements()) {
        if (!first) out += ',';
        first = false;
        out += render_braces(e);
    }
    out += '}';
    return out;
}

namespace {

class BraceParser {
public:
    explicit BraceParser(std::string_view text) : text_(text) {}

    HfSet parse() {
        HfSet x = value();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return x;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        raise(Errc::ParseError, what + " at offset " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n')) ++pos_;
    }

    bool eat(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    HfSet value() {
        if (eat("∅") || eat("0")) return HfSet();
        if (!eat("{")) fail("expected '{', '∅' or '0'");
        std::vector<HfSet> elements;
        if (eat("}")) return HfSet();
        for (;;) {
            elements.push_back(value());
            if (eat("}")) break;
            if (!eat(",")) fail("expected ',' or '}'");
        }
        return HfSet::of(std::move(elements));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

HfSet parse_braces(std::string_view text) { return BraceParser(text).parse(); }

HfSet von_neumann(std::size_t n) {
    std::vector<HfSet> elements;
    HfSet current;
    for (std::size_t i = 0; i < n; ++i) {
        elements.push_back(current);
        current = HfSet::of(elements);
    }
    return current;
}

}  // namespace qw
