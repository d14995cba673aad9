#include "qw/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qw/algebra.hpp"
#include "qw/canonical.hpp"
#include "qw/counting.hpp"
#include "qw/error.hpp"
#include "qw/hered.hpp"
#include "qw/io.hpp"
#include "qw/ordinal.hpp"
#include "qw/stages.hpp"

namespace qw::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240611;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Range>
std::string braces(const Range& xs) {
    std::string s = "{";
    bool first = true;
    for (const auto& x : xs) {
        if (!first) s += ",";
        s += std::to_string(x);
        first = false;
    }
    return s + "}";
}

template <class Range>
std::string spaced(const Range& xs) {
    std::string s;
    for (const auto& x : xs) {
        if (!s.empty()) s += " ";
        s += std::to_string(x);
    }
    return s;
}

std::string term_text(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    const std::filesystem::path path = arg.substr(1);
    if (!std::filesystem::is_regular_file(path)) throw UsageError("cannot read term file '" + path.string() + "'");
    return read_file(path);
}

json stats_json(const StageFamily& sf) {
    json per = json::array();
    for (const auto& s : sf.stats())
        per.push_back({{"stage", s.stage},
                       {"nodes", s.nodes},
                       {"assignments", s.assignments},
                       {"unions", s.unions},
                       {"passes", s.passes},
                       {"new_classes", s.newClasses}});
    return {{"depth", sf.depth()}, {"classes", sf.size()}, {"stage_sizes", sf.stage_sizes()}, {"stages", per}};
}

std::string node_text(const Polynomial& poly, const Node& n) {
    std::string s = poly.name(n.ctor);
    if (n.children.empty()) return s;
    s += "(";
    for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? ",c" : "c") + std::to_string(n.children[i]);
    return s + ")";
}

class Session {
public:
    Session(const CliConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

    SignatureFile& sig() {
        if (!sig_) {
            if (!std::filesystem::is_regular_file(cfg_.signaturePath))
                throw UsageError("cannot read signature '" + cfg_.signaturePath + "'");
            sig_ = load_signature(cfg_.signaturePath);
        }
        return *sig_;
    }

    BuildOptions options() const {
        BuildOptions o;
        o.caps.maxClasses = cfg_.maxClasses;
        o.caps.maxAssignments = cfg_.maxAssignments;
        return o;
    }

    StageFamily& stages() {
        if (!sf_) sf_.emplace(build_stages(sig().poly, sig().rules, cfg_.depth, options()));
        return *sf_;
    }

    TermPool& pool() {
        if (!pool_) pool_.emplace(sig().poly);
        return *pool_;
    }

    /// Names in argument position that are not constructors become fresh
    /// nullary generators, so open terms are compared as identities.
    void bind_terms(const std::vector<std::string>& args) {
        std::vector<std::string> vars;
        for (const auto& a : args)
            for (auto& v : free_names(term_text(a), sig().poly))
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(std::move(v));
        if (vars.empty()) return;
        if (sig().rules.has_all_image_preserving())
            raise(Errc::UnsupportedRuleSet, "free variables are not supported with the all-image-preserving family");
        std::vector<Constructor> ctors = sig().poly.constructors();
        for (auto& v : vars) ctors.push_back(Constructor{std::move(v), 0});
        sig_->poly = Polynomial(std::move(ctors));
    }

    TermId term(const std::string& arg) { return parse_term(term_text(arg), pool()); }

    ClassId class_of(const std::string& arg) {
        const TermId t = term(arg);
        return canonicalize(stages(), pool(), t);
    }

    FiniteAlgebra algebra() {
        if (!cfg_.algebraPath) throw UsageError("--algebra is required");
        if (!std::filesystem::is_regular_file(*cfg_.algebraPath))
            throw UsageError("cannot read algebra '" + *cfg_.algebraPath + "'");
        return load_algebra(sig().poly, *cfg_.algebraPath);
    }

    bool json_mode() const { return cfg_.outputFormat == "json"; }

    void emit(const std::string& command, const json& result, const json& stats = json::object()) {
        out_ << json{{"command", command}, {"result", result}, {"stats", stats}}.dump() << "\n";
    }

    std::ostream& out() { return out_; }
    const CliConfig& cfg() const { return cfg_; }

private:
    const CliConfig& cfg_;
    std::ostream& out_;
    std::optional<SignatureFile> sig_;
    std::optional<StageFamily> sf_;
    std::optional<TermPool> pool_;
};

void require_format(const CliConfig& cfg, std::initializer_list<const char*> allowed, const std::string& command) {
    for (const char* f : allowed)
        if (cfg.outputFormat == f) return;
    throw UsageError("--format " + cfg.outputFormat + " is not available for " + command);
}

int cmd_validate(Session& s) {
    require_format(s.cfg(), {"text", "json"}, "validate");
    const auto& sig = s.sig();
    if (s.json_mode()) {
        s.emit("validate", {{"valid", true},
                            {"constructors", sig.poly.size()},
                            {"explicit", sig.rules.explicitEquations.size()},
                            {"families", sig.rules.families.size()}});
    } else {
        auto count = [](std::size_t n, const char* one, const char* many) {
            return std::to_string(n) + " " + (n == 1 ? one : many);
        };
        s.out() << "valid: " << count(sig.poly.size(), "constructor", "constructors") << ", "
                << count(sig.rules.explicitEquations.size(), "explicit equation", "explicit equations") << ", "
                << count(sig.rules.families.size(), "family", "families") << "\n";
    }
    return Success;
}

int cmd_stages(Session& s, bool countsOnly) {
    require_format(s.cfg(), {"text", "json", "dot"}, "stages");
    auto& sf = s.stages();
    if (s.cfg().outputFormat == "dot") {
        export_dot(sf, s.out());
        return Success;
    }
    if (s.json_mode()) {
        json classes = json::array();
        if (!countsOnly)
            for (ClassId x = 0; x < sf.size(); ++x)
                classes.push_back({{"id", x},
                                   {"rank", sf.rank(x)},
                                   {"first_stage", sf.first_stage(x)},
                                   {"image", std::vector<ClassId>(sf.image(x).begin(), sf.image(x).end())},
                                   {"representative", node_text(sf.poly(), sf.representative(x))}});
        json result = {{"stage_sizes", sf.stage_sizes()}};
        if (!countsOnly) result["classes"] = classes;
        s.emit("stages", result, stats_json(sf));
        return Success;
    }
    s.out() << spaced(sf.stage_sizes()) << "\n";
    if (!countsOnly)
        for (ClassId x = 0; x < sf.size(); ++x)
            s.out() << "c" << x << " rank " << sf.rank(x) << " stage " << sf.first_stage(x) << " image "
                    << braces(sf.image(x)) << " rep " << node_text(sf.poly(), sf.representative(x)) << "\n";
    return Success;
}

int cmd_eq(Session& s, const std::string& a, const std::string& b) {
    require_format(s.cfg(), {"text", "json"}, "eq");
    const ClassId x = s.class_of(a);
    const ClassId y = s.class_of(b);
    if (s.json_mode())
        s.emit("eq", {{"equal", x == y}, {"classes", {x, y}}}, stats_json(s.stages()));
    else
        s.out() << (x == y ? "equal" : "distinct") << "\n";
    return Success;
}

int cmd_canon(Session& s, const std::string& arg) {
    require_format(s.cfg(), {"text", "json"}, "canon");
    const TermId t = s.term(arg);
    const ClassId x = canonicalize(s.stages(), s.pool(), t);
    const auto& rules = s.sig().rules;
    std::string form;
    if (!rules.explicitEquations.empty())
        form = render_term(s.pool(), materialize(s.stages(), s.pool(), x));
    else if (select_engine(rules) == CanonicalEngine::Extensional)
        form = render_braces(canon_extensional(s.pool(), t));
    else
        form = render(s.sig().poly, canon_multiset(s.pool(), t, rules.symmetric_mask(s.sig().poly)));
    if (s.json_mode())
        s.emit("canon", {{"class", x}, {"rank", s.stages().rank(x)}, {"canonical", form}}, stats_json(s.stages()));
    else
        s.out() << "c" << x << " " << form << "\n";
    return Success;
}

int cmd_rank(Session& s, const std::string& arg) {
    require_format(s.cfg(), {"text", "json"}, "rank");
    const ClassId x = s.class_of(arg);
    if (s.json_mode())
        s.emit("rank", {{"class", x}, {"rank", s.stages().rank(x)}}, stats_json(s.stages()));
    else
        s.out() << s.stages().rank(x) << "\n";
    return Success;
}

int cmd_tc(Session& s, const std::string& arg) {
    require_format(s.cfg(), {"text", "json"}, "tc");
    const ClassId x = s.class_of(arg);
    const ClassSet tc = transitive_closure(s.stages(), x);
    std::vector<std::size_t> ranks;
    for (ClassId y : tc) ranks.push_back(s.stages().rank(y));
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    if (s.json_mode()) {
        s.emit("tc", {{"class", x}, {"closure", tc}, {"ranks", ranks}}, stats_json(s.stages()));
    } else {
        s.out() << "classes " << braces(tc) << "\n";
        s.out() << "ranks " << braces(ranks) << "\n";
    }
    return Success;
}

int cmd_rn(Session& s, const std::string& arg, std::size_t n) {
    require_format(s.cfg(), {"text", "json"}, "rn");
    const ClassId x = s.class_of(arg);
    const RankSet r = r_n(s.stages(), x, n);
    if (s.json_mode())
        s.emit("rn", {{"class", x}, {"n", n}, {"ranks", r}}, stats_json(s.stages()));
    else
        s.out() << braces(r) << "\n";
    return Success;
}

int cmd_fsurj(Session& s, const std::string& arg, std::size_t n) {
    require_format(s.cfg(), {"text", "json", "csv"}, "fsurj");
    const ClassId x = s.class_of(arg);
    const SurjectionTable t = f_surjection(s.stages(), x, n, s.cfg().maxEnumeration);
    if (s.json_mode()) {
        s.emit("fsurj", {{"class", x}, {"kappa", t.kappa}, {"n", t.n}, {"values", t.values}, {"image", t.image()}},
               stats_json(s.stages()));
        return Success;
    }
    for (std::size_t i = 1; i <= n; ++i) s.out() << "beta" << i << ",";
    s.out() << "value\n";
    std::vector<std::size_t> digits(n);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        decode_digits<std::size_t>(i, t.kappa, digits);
        for (std::size_t d : digits) s.out() << d << ",";
        s.out() << t.values[i] << "\n";
    }
    return Success;
}

int cmd_fold(Session& s) {
    require_format(s.cfg(), {"text", "json"}, "fold");
    const FiniteAlgebra alg = s.algebra();
    const std::vector<Element> h = fold(s.stages(), alg);
    if (s.json_mode()) {
        s.emit("fold", {{"values", h}, {"homomorphism", is_homomorphism(h, s.stages(), alg)}}, stats_json(s.stages()));
    } else {
        for (ClassId x = 0; x < h.size(); ++x) s.out() << "c" << x << " " << h[x] << "\n";
    }
    return Success;
}

int cmd_check_algebra(Session& s, std::optional<std::size_t> randomCount, std::size_t maxCarrier,
                      std::optional<std::uint64_t> seedFlag) {
    require_format(s.cfg(), {"text", "json"}, "check-algebra");
    const auto& sig = s.sig();
    if (randomCount) {
        const std::uint64_t seed = resolve_seed(seedFlag);
        auto algs = random_satisfying_algebras(sig.poly, sig.rules, *randomCount, maxCarrier, seed);
        if (s.json_mode()) {
            json list = json::array();
            for (const auto& a : algs) list.push_back(json::parse(algebra_to_json(sig.poly, a)));
            s.emit("check-algebra", {{"seed", seed}, {"algebras", list}});
        } else {
            for (const auto& a : algs) s.out() << algebra_to_json(sig.poly, a) << "\n";
        }
        return Success;
    }
    const FiniteAlgebra alg = s.algebra();
    const SatisfactionReport rep = check_rules(sig.poly, sig.rules, alg, s.cfg().maxAssignments);
    if (s.json_mode()) {
        json result = {{"satisfied", rep.satisfied}};
        if (rep.witness) result["witness"] = describe(sig.poly, *rep.witness);
        s.emit("check-algebra", result);
    } else if (rep) {
        s.out() << "satisfied\n";
    } else {
        s.out() << "not satisfied: " << describe(sig.poly, *rep.witness) << "\n";
    }
    return rep ? Success : Validation;
}

int cmd_hf_enum(Session& s, std::size_t maxRank) {
    require_format(s.cfg(), {"text", "json"}, "hf-enum");
    const auto sets = hf_enumerate(s.sig().poly, maxRank, s.cfg().maxEnumeration);
    if (s.json_mode()) {
        json list = json::array();
        for (const auto& x : sets) list.push_back({{"set", render_braces(x)}, {"rank", x.rank()}});
        s.emit("hf-enum", {{"count", sets.size()}, {"sets", list}});
    } else {
        for (const auto& x : sets) s.out() << render_braces(x) << "\n";
    }
    return Success;
}

int cmd_crosscheck(Session& s) {
    require_format(s.cfg(), {"text", "json"}, "crosscheck");
    const auto& sig = s.sig();
    const CrosscheckReport r = crosscheck(sig.poly, sig.rules, s.cfg().depth, s.options(), s.cfg().maxEnumeration);
    const char* engine = r.engine == CanonicalEngine::Multiset ? "multiset" : "extensional";
    if (s.json_mode()) {
        s.emit("crosscheck", {{"engine", engine},
                              {"terms", r.termCount},
                              {"saturation", r.saturationCounts},
                              {"canonical", r.canonicalCounts},
                              {"mismatches", r.mismatches},
                              {"agree", r.partitionsEqual()}});
    } else {
        s.out() << "engine " << engine << "\n";
        s.out() << "terms " << r.termCount << "\n";
        s.out() << "saturation " << spaced(r.saturationCounts) << "\n";
        s.out() << "canonical " << spaced(r.canonicalCounts) << "\n";
        s.out() << "mismatches " << r.mismatches << "\n";
        s.out() << (r.partitionsEqual() ? "agree" : "disagree") << "\n";
    }
    return r.partitionsEqual() ? Success : Validation;
}

int cmd_export_dot(Session& s) {
    require_format(s.cfg(), {"text", "dot"}, "export-dot");
    export_dot(s.stages(), s.out());
    return Success;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("QW_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const std::uint64_t v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("QW_SEED is not an unsigned integer: '") + env + "'");
    }
    return kDefaultSeed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-stage quotient W-types with image-preserving equations", "qw"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::vector<std::string> terms;
    std::size_t n = 1;
    bool counts = false;
    std::optional<std::size_t> randomCount;
    std::size_t maxCarrier = 3;
    std::optional<std::uint64_t> seed;
    std::size_t maxRank = 3;

    auto common = [&](CLI::App* sub) {
        sub->add_option("signature", cfg.signaturePath, "Signature JSON file")->required();
        sub->add_option("--depth", cfg.depth, "Number of stages to build")->capture_default_str();
        sub->add_option("--max-classes", cfg.maxClasses, "Cap on classes")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--max-assignments", cfg.maxAssignments, "Cap on nodes and assignments per stage")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--max-enumeration", cfg.maxEnumeration, "Cap on enumerated terms, sets and table cells")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--format", cfg.outputFormat, "Output format")
            ->check(CLI::IsMember({"text", "json", "dot", "csv"}))
            ->capture_default_str();
    };
    auto withTerms = [&](CLI::App* sub, int count) {
        common(sub);
        sub->add_option("terms", terms, "Terms as s-expressions or @file")->required()->expected(count);
    };

    auto* validate = app.add_subcommand("validate", "Validate a signature file");
    common(validate);
    auto* stages = app.add_subcommand("stages", "Build the stages Q(0..depth)");
    common(stages);
    stages->add_flag("--counts", counts, "Print only the stage sizes");
    withTerms(app.add_subcommand("eq", "Decide equality of two terms"), 2);
    withTerms(app.add_subcommand("canon", "Class and canonical form of a term"), 1);
    withTerms(app.add_subcommand("rank", "Rank of a term"), 1);
    withTerms(app.add_subcommand("tc", "Transitive closure of a term's class"), 1);
    auto* rn = app.add_subcommand("rn", "Ranks exactly n image steps below a term");
    withTerms(rn, 1);
    rn->add_option("--n", n, "Number of steps")->check(CLI::PositiveNumber)->capture_default_str();
    auto* fsurj = app.add_subcommand("fsurj", "Tabulate the canonical surjection onto R_n as CSV");
    withTerms(fsurj, 1);
    fsurj->add_option("--n", n, "Tuple length")->check(CLI::PositiveNumber)->capture_default_str();
    auto* foldCmd = app.add_subcommand("fold", "Fold the stages into a finite algebra");
    common(foldCmd);
    foldCmd->add_option("--algebra", cfg.algebraPath, "Algebra JSON file")->required();
    auto* check = app.add_subcommand("check-algebra", "Check an algebra against the rules, or sample satisfying ones");
    common(check);
    auto* algOpt = check->add_option("--algebra", cfg.algebraPath, "Algebra JSON file");
    auto* randOpt = check->add_option("--random", randomCount, "Sample this many satisfying algebras");
    algOpt->excludes(randOpt);
    check->add_option("--max-carrier", maxCarrier, "Largest carrier when sampling")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    check->add_option("--seed", seed, "Sampling seed (overrides QW_SEED)");
    auto* hfEnum = app.add_subcommand("hf-enum", "Enumerate hereditarily small sets");
    common(hfEnum);
    hfEnum->add_option("--max-rank", maxRank, "Largest rank")->capture_default_str();
    common(app.add_subcommand("crosscheck", "Compare the saturation and canonical-form partitions"));
    common(app.add_subcommand("export-dot", "Write the stage graph in DOT"));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : Usage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Session s(cfg, out);
    try {
        if (!terms.empty()) s.bind_terms(terms);
        if (command == "check-algebra" && !cfg.algebraPath && !randomCount)
            throw UsageError("check-algebra needs --algebra or --random");
        if (command == "validate") return cmd_validate(s);
        if (command == "stages") return cmd_stages(s, counts);
        if (command == "eq") return cmd_eq(s, terms[0], terms[1]);
        if (command == "canon") return cmd_canon(s, terms[0]);
        if (command == "rank") return cmd_rank(s, terms[0]);
        if (command == "tc") return cmd_tc(s, terms[0]);
        if (command == "rn") return cmd_rn(s, terms[0], n);
        if (command == "fsurj") return cmd_fsurj(s, terms[0], n);
        if (command == "fold") return cmd_fold(s);
        if (command == "check-algebra") return cmd_check_algebra(s, randomCount, maxCarrier, seed);
        if (command == "hf-enum") return cmd_hf_enum(s, maxRank);
        if (command == "crosscheck") return cmd_crosscheck(s);
        if (command == "export-dot") return cmd_export_dot(s);
        throw UsageError("unknown subcommand " + command);
    } catch (const UsageError& e) {
        err << "qw " << command << ": " << e.what() << "\n";
        return Usage;
    } catch (const Error& e) {
        err << "qw " << command << ": " << e.what() << "\n";
        return e.code() == Errc::CapExceeded ? CapHit : Validation;
    }
}

}  // namespace qw::cli
