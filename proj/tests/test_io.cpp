#include <string>

#include "doctest.h"
#include "qw/error.hpp"
#include "qw/io.hpp"
#include "support/fixtures.hpp"

using namespace qw;

namespace {

const std::string DATA = QW_DATA_DIR;

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

}  // namespace

TEST_CASE("parse_signature") {
    auto sig = parse_signature(R"({"constructors": [{"name": "leaf", "arity": 0}, {"name": "node", "arity": 2}],
                                   "equations": {"families": [{"kind": "symmetric", "constructor": "node"}]}})");
    CHECK(sig.poly.size() == 2);
    CHECK(sig.poly.arity(1) == 2);
    REQUIRE(sig.rules.families.size() == 1);
    CHECK(sig.rules.families[0].kind == FamilyKind::Symmetric);
    CHECK(sig.rules.families[0].ctor == 1);

    auto bare = parse_signature(R"({"constructors": [{"name": "z", "arity": 0}]})");
    CHECK(bare.rules.empty());
}

TEST_CASE("parse_signature errors") {
    CHECK(code_of([] { parse_signature("{"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_signature(R"({"constructors": [], "extra": 1})"); }) == Errc::InvalidInput);
    CHECK(code_of([] { parse_signature(R"({"constructors": []})"); }) == Errc::EmptySignature);
    CHECK(code_of([] { parse_signature(R"({"constructors": [{"name": "a", "arity": 0}, {"name": "a", "arity": 1}]})"); }) ==
          Errc::DuplicateName);
    CHECK(code_of([] {
              parse_signature(R"({"constructors": [{"name": "leaf", "arity": 0}],
                                  "equations": {"families": [{"kind": "symmetric", "constructor": "node"}]}})");
          }) == Errc::UnknownConstructor);
    CHECK(code_of([] {
              parse_signature(R"({"constructors": [{"name": "leaf", "arity": 0}],
                                  "equations": {"families": [{"kind": "sorted"}]}})");
          }) == Errc::InvalidInput);
}

TEST_CASE("load_signature reads the bundled data files") {
    auto ut2 = load_signature(DATA + "/ut2.json");
    CHECK(ut2.poly == fixtures::ut2().poly);
    CHECK(load_signature(DATA + "/hf2.json").rules.has_all_image_preserving());
    CHECK(load_signature(DATA + "/mix.json").rules.explicitEquations.size() == 2);
    CHECK(load_signature(DATA + "/ordered.json").rules.empty());
    CHECK(load_signature(DATA + "/ut2_explicit.json").rules.explicitEquations.size() == 1);

    try {
        load_signature(DATA + "/bad.json");
        FAIL("expected NotImagePreserving");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotImagePreserving);
        CHECK(std::string(e.what()).find("equation #0") != std::string::npos);
    }
    CHECK(code_of([] { load_signature(DATA + "/missing.json"); }) == Errc::InvalidInput);
}

TEST_CASE("signatures round trip through JSON") {
    for (const char* name : {"ut2", "hf2", "mix", "ordered", "ut2_explicit"}) {
        CAPTURE(name);
        auto sig = load_signature(DATA + "/" + name + ".json");
        auto again = parse_signature(signature_to_json(sig));
        CHECK(again.poly == sig.poly);
        CHECK(signature_to_json(again) == signature_to_json(sig));
        CHECK(again.rules.explicitEquations.size() == sig.rules.explicitEquations.size());
        CHECK(again.rules.families.size() == sig.rules.families.size());
    }
}

TEST_CASE("parse_algebra") {
    const Polynomial p = fixtures::leaf_node();
    auto alg = parse_algebra(p, R"({"carrier": 2, "ops": {"leaf": 0, "node": [[0, 1], [1, 1]]}})");
    CHECK(alg.carrier() == 2);
    CHECK(alg.table(0) == std::vector<Element>{0});
    CHECK(alg.table(1) == std::vector<Element>{0, 1, 1, 1});
    CHECK(parse_algebra(p, algebra_to_json(p, alg)) == alg);
    CHECK(load_algebra(p, DATA + "/or.json") == alg);
    CHECK(load_algebra(p, DATA + "/implies.json").table(1) == std::vector<Element>{1, 0, 1, 1});

    const Polynomial t = fixtures::hf3().poly;
    auto three = parse_algebra(t, R"({"carrier": 1, "ops": {"empty": 0, "pair": [[0]], "tri": [[[0]]]}})");
    CHECK(three.table(2).size() == 1);

    CHECK(code_of([&] { parse_algebra(p, R"({"carrier": 2, "ops": {"leaf": 0}})"); }) == Errc::InvalidInput);
    CHECK(code_of([&] { parse_algebra(p, R"({"carrier": 2, "ops": {"leaf": 0, "node": [[0, 1]]}})"); }) ==
          Errc::InvalidInput);
    CHECK(code_of([&] { parse_algebra(p, R"({"carrier": 2, "ops": {"leaf": 5, "node": [[0, 1], [1, 1]]}})"); }) ==
          Errc::InvalidInput);
    CHECK(code_of([&] { parse_algebra(p, R"({"carrier": 2, "ops": {"leaf": 0, "tree": 0, "node": [[0, 1], [1, 1]]}})"); }) ==
          Errc::UnknownConstructor);
    CHECK(code_of([&] { parse_algebra(p, "[1, 2"); }) == Errc::ParseError);
}
