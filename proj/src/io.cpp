#include "qw/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qw/counting.hpp"
#include "qw/error.hpp"

namespace qw {

using nlohmann::json;

namespace {

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) raise(Errc::InvalidInput, where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key)) raise(Errc::InvalidInput, "unknown key '" + key + "' in " + where);
}

const json& required(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) raise(Errc::InvalidInput, where + " is missing '" + key + "'");
    return *it;
}

std::size_t natural(const json& v, const std::string& what) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        raise(Errc::InvalidInput, what + " must be a natural number");
    return v.get<std::size_t>();
}

std::string text(const json& v, const std::string& what) {
    if (!v.is_string()) raise(Errc::InvalidInput, what + " must be a string");
    return v.get<std::string>();
}

json parse_json(std::string_view jsonText) {
    try {
        return json::parse(jsonText);
    } catch (const json::parse_error& e) {
        raise(Errc::ParseError, e.what());
    }
}

CtorIndex resolve(const Polynomial& poly, const std::string& name) {
    auto c = poly.find(name);
    if (!c) raise(Errc::UnknownConstructor, "'" + name + "'");
    return *c;
}

}  // namespace

SignatureFile parse_signature(std::string_view jsonText) {
    const json doc = parse_json(jsonText);
    only_keys(doc, {"constructors", "equations"}, "signature");

    const json& ctors = required(doc, "constructors", "signature");
    if (!ctors.is_array()) raise(Errc::InvalidInput, "'constructors' must be an array");
    std::vector<Constructor> list;
    for (std::size_t i = 0; i < ctors.size(); ++i) {
        const std::string where = "constructor #" + std::to_string(i);
        only_keys(ctors[i], {"name", "arity"}, where);
        list.push_back(Constructor{text(required(ctors[i], "name", where), where + " name"),
                                   natural(required(ctors[i], "arity", where), where + " arity")});
    }
    Polynomial poly = validate_polynomial(std::move(list));

    RuleSet rules;
    if (auto eqs = doc.find("equations"); eqs != doc.end()) {
        only_keys(*eqs, {"explicit", "families"}, "equations");
        if (auto ex = eqs->find("explicit"); ex != eqs->end()) {
            if (!ex->is_array()) raise(Errc::InvalidInput, "'explicit' must be an array");
            for (std::size_t i = 0; i < ex->size(); ++i) {
                const json& e = (*ex)[i];
                const std::string where = "equation #" + std::to_string(i);
                only_keys(e, {"vars", "left", "right"}, where);
                RawEquation raw;
                raw.varCount = natural(required(e, "vars", where), where + " vars");
                auto side = [&](const char* key, CtorIndex& ctor, std::vector<VarIndex>& map) {
                    const json& s = required(e, key, where);
                    const std::string sw = where + " " + key;
                    only_keys(s, {"constructor", "map"}, sw);
                    ctor = resolve(poly, text(required(s, "constructor", sw), sw + " constructor"));
                    const json& m = required(s, "map", sw);
                    if (!m.is_array()) raise(Errc::InvalidInput, sw + " map must be an array");
                    for (const auto& v : m) map.push_back(static_cast<VarIndex>(natural(v, sw + " map entry")));
                };
                side("left", raw.leftCtor, raw.leftMap);
                side("right", raw.rightCtor, raw.rightMap);
                try {
                    rules.explicitEquations.push_back(validate_equation(poly, raw));
                } catch (const Error& err) {
                    auto side_text = [&](CtorIndex c, const std::vector<VarIndex>& m) {
                        std::string t = c < poly.size() ? poly.name(c) : "?";
                        t += "(";
                        for (std::size_t j = 0; j < m.size(); ++j) t += (j ? ",v" : "v") + std::to_string(m[j]);
                        return t + ")";
                    };
                    const std::string shape =
                        side_text(raw.leftCtor, raw.leftMap) + " = " + side_text(raw.rightCtor, raw.rightMap);
                    raise(err.code(), where + " " + shape + ": " + err.detail());
                }
            }
        }
        if (auto fams = eqs->find("families"); fams != eqs->end()) {
            if (!fams->is_array()) raise(Errc::InvalidInput, "'families' must be an array");
            for (std::size_t i = 0; i < fams->size(); ++i) {
                const json& f = (*fams)[i];
                const std::string where = "family #" + std::to_string(i);
                const std::string kind = text(required(f, "kind", where), where + " kind");
                if (kind == "symmetric") {
                    only_keys(f, {"kind", "constructor"}, where);
                    rules.families.push_back(
                        Family{FamilyKind::Symmetric,
                               resolve(poly, text(required(f, "constructor", where), where + " constructor"))});
                } else if (kind == "all-image-preserving") {
                    only_keys(f, {"kind"}, where);
                    rules.families.push_back(Family{FamilyKind::AllImagePreserving, 0});
                } else {
                    raise(Errc::InvalidInput, where + " has unknown kind '" + kind + "'");
                }
            }
        }
    }
    return SignatureFile{std::move(poly), std::move(rules)};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::InvalidInput, "cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SignatureFile load_signature(const std::filesystem::path& path) { return parse_signature(read_file(path)); }

std::string signature_to_json(const SignatureFile& sig) {
    json doc;
    doc["constructors"] = json::array();
    for (const auto& c : sig.poly.constructors()) doc["constructors"].push_back({{"name", c.name}, {"arity", c.arity}});
    if (!sig.rules.empty()) {
        json ex = json::array();
        for (const auto& e : sig.rules.explicitEquations)
            ex.push_back({{"vars", e.varCount},
                          {"left", {{"constructor", sig.poly.name(e.leftCtor)}, {"map", e.leftMap}}},
                          {"right", {{"constructor", sig.poly.name(e.rightCtor)}, {"map", e.rightMap}}}});
        json fams = json::array();
        for (const auto& f : sig.rules.families) {
            if (f.kind == FamilyKind::Symmetric)
                fams.push_back({{"kind", "symmetric"}, {"constructor", sig.poly.name(f.ctor)}});
            else
                fams.push_back({{"kind", "all-image-preserving"}});
        }
        doc["equations"] = {{"explicit", ex}, {"families", fams}};
    }
    return doc.dump(2);
}

namespace {

void flatten(const json& v, std::size_t depth, std::size_t carrier, std::vector<Element>& out, const std::string& where) {
    if (depth == 0) {
        out.push_back(static_cast<Element>(natural(v, where + " entry")));
        return;
    }
    if (!v.is_array() || v.size() != carrier)
        raise(Errc::InvalidInput, where + " must nest arrays of length " + std::to_string(carrier));
    for (const auto& x : v) flatten(x, depth - 1, carrier, out, where);
}

json nest(const std::vector<Element>& table, std::size_t depth, std::size_t carrier, std::size_t& pos) {
    if (depth == 0) return table[pos++];
    json arr = json::array();
    for (std::size_t i = 0; i < carrier; ++i) arr.push_back(nest(table, depth - 1, carrier, pos));
    return arr;
}

}  // namespace

FiniteAlgebra parse_algebra(const Polynomial& poly, std::string_view jsonText) {
    const json doc = parse_json(jsonText);
    only_keys(doc, {"carrier", "ops"}, "algebra");
    const std::size_t carrier = natural(required(doc, "carrier", "algebra"), "carrier");
    const json& ops = required(doc, "ops", "algebra");
    if (!ops.is_object()) raise(Errc::InvalidInput, "'ops' must be an object");
    for (const auto& [name, value] : ops.items()) resolve(poly, name);

    std::vector<std::vector<Element>> tables;
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        const std::string& name = poly.name(a);
        auto it = ops.find(name);
        if (it == ops.end()) raise(Errc::InvalidInput, "algebra has no table for '" + name + "'");
        std::vector<Element> table;
        flatten(*it, poly.arity(a), carrier, table, "table '" + name + "'");
        tables.push_back(std::move(table));
    }
    return FiniteAlgebra(poly, carrier, std::move(tables));
}

FiniteAlgebra load_algebra(const Polynomial& poly, const std::filesystem::path& path) {
    return parse_algebra(poly, read_file(path));
}

std::string algebra_to_json(const Polynomial& poly, const FiniteAlgebra& alg) {
    json doc;
    doc["carrier"] = alg.carrier();
    doc["ops"] = json::object();
    for (CtorIndex a = 0; a < poly.size(); ++a) {
        std::size_t pos = 0;
        doc["ops"][poly.name(a)] = nest(alg.table(a), poly.arity(a), alg.carrier(), pos);
    }
    return doc.dump();
}

}  // namespace qw
