#include "qw/terms.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qw/counting.hpp"
#include "qw/error.hpp"

namespace qw {

std::size_t TermPool::KeyHash::operator()(const std::vector<std::uint32_t>& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : key) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

TermPool::TermPool(Polynomial poly) : poly_(std::move(poly)) {}

TermId TermPool::make(CtorIndex ctor, std::span<const TermId> children) {
    if (ctor >= poly_.size()) raise(Errc::UnknownConstructor, "constructor index " + std::to_string(ctor));
    if (children.size() != poly_.arity(ctor))
        raise(Errc::ArityMismatch, "'" + poly_.name(ctor) + "' expects " + std::to_string(poly_.arity(ctor)) +
                                       " children, got " + std::to_string(children.size()));

    std::vector<std::uint32_t> key;
    key.reserve(children.size() + 1);
    key.push_back(ctor);
    std::uint32_t rank = 0;
    for (TermId c : children) {
        if (c >= nodes_.size()) raise(Errc::InvalidInput, "child term id out of range");
        key.push_back(c);
        rank = std::max(rank, nodes_[c].rank + 1);
    }
    if (auto it = index_.find(key); it != index_.end()) return it->second;

    const auto id = static_cast<TermId>(nodes_.size());
    nodes_.push_back(Node{ctor, static_cast<std::uint32_t>(childStore_.size()), rank});
    childStore_.insert(childStore_.end(), children.begin(), children.end());
    index_.emplace(std::move(key), id);
    return id;
}

std::span<const TermId> TermPool::children(TermId t) const {
    const Node& n = nodes_.at(t);
    return {childStore_.data() + n.firstChild, poly_.arity(n.ctor)};
}

namespace {

class Parser {
public:
    Parser(std::string_view text, TermPool& pool) : text_(text), pool_(pool) {}

    TermId parse() {
        TermId t = term();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        raise(Errc::ParseError, what + " at offset " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view name() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_) fail("expected a constructor name");
        return text_.substr(start, pos_ - start);
    }

    CtorIndex lookup(std::string_view n) const {
        auto c = pool_.poly().find(n);
        if (!c) raise(Errc::UnknownConstructor, "'" + std::string(n) + "'");
        return *c;
    }

    TermId term() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == ')') fail("unexpected ')'");
        if (text_[pos_] != '(') {
            CtorIndex c = lookup(name());
            return pool_.make(c, std::span<const TermId>{});
        }
        ++pos_;
        CtorIndex c = lookup(name());
        std::vector<TermId> kids;
        for (;;) {
            skip_ws();
            if (pos_ >= text_.size()) fail("unclosed '('");
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            kids.push_back(term());
        }
        return pool_.make(c, kids);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    TermPool& pool_;
};

void render_into(const TermPool& pool, TermId t, std::ostringstream& out) {
    out << '(' << pool.poly().name(pool.ctor(t));
    for (TermId c : pool.children(t)) {
        out << ' ';
        render_into(pool, c, out);
    }
    out << ')';
}

}  // namespace

TermId parse_term(std::string_view text, TermPool& pool) {
    return Parser(text, pool).parse();
}

std::string render_term(const TermPool& pool, TermId t) {
    std::ostringstream out;
    render_into(pool, t, out);
    return out.str();
}

std::vector<std::string> free_names(std::string_view text, const Polynomial& poly) {
    std::vector<std::string> out;
    bool head = false;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '(' || c == ')') {
            head = c == '(';
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < text.size() && text[i] != '(' && text[i] != ')' && !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        std::string name(text.substr(start, i - start));
        if (!head && !poly.find(name) && std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(std::move(name));
        head = false;
    }
    return out;
}

std::vector<TermId> enumerate_terms(TermPool& pool, std::size_t maxRank, std::size_t cap) {
    const Polynomial& poly = pool.poly();
    std::vector<TermId> out;
    auto push = [&](TermId t) {
        if (out.size() >= cap) raise(Errc::CapExceeded, "term enumeration exceeds cap " + std::to_string(cap));
        out.push_back(t);
    };

    for (CtorIndex a = 0; a < poly.size(); ++a)
        if (poly.arity(a) == 0) push(pool.make(a, std::span<const TermId>{}));

    std::size_t below = 0;  // terms of rank <= r-2
    for (std::size_t r = 1; r <= maxRank; ++r) {
        const std::size_t upTo = out.size();  // terms of rank <= r-1
        if (upTo == below) break;              // no terms of rank r-1, so none above
        for (CtorIndex a = 0; a < poly.size(); ++a) {
            const std::size_t m = poly.arity(a);
            if (m == 0) continue;
            auto total = bounded_pow(upTo, m, cap);
            if (!total) raise(Errc::CapExceeded, "term enumeration exceeds cap " + std::to_string(cap));
            std::vector<std::size_t> digits(m);
            std::vector<TermId> kids(m);
            for (std::uint64_t idx = 0; idx < *total; ++idx) {
                decode_digits<std::size_t>(idx, upTo, digits);
                if (*std::max_element(digits.begin(), digits.end()) < below) continue;
                for (std::size_t i = 0; i < m; ++i) kids[i] = out[digits[i]];
                push(pool.make(a, kids));
            }
        }
        below = upTo;
    }
    return out;
}

TermId tower(TermPool& pool, CtorIndex nodeCtor, std::size_t beta) {
    const Polynomial& poly = pool.poly();
    auto leaf = poly.first_nullary();
    if (!leaf) raise(Errc::NoNullaryConstructor, "tower needs a nullary constructor for t_0");
    if (nodeCtor >= poly.size()) raise(Errc::UnknownConstructor, "constructor index " + std::to_string(nodeCtor));
    if (poly.arity(nodeCtor) == 0) raise(Errc::InvalidInput, "tower constructor must have positive arity");

    TermId t = pool.make(*leaf, std::span<const TermId>{});
    std::vector<TermId> kids(poly.arity(nodeCtor));
    for (std::size_t b = 0; b < beta; ++b) {
        std::fill(kids.begin(), kids.end(), t);
        t = pool.make(nodeCtor, kids);
    }
    return t;
}

}  // namespace qw
