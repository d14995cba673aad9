#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qw/algebra.hpp"
#include "qw/signature.hpp"

namespace qw {

struct SignatureFile {
    Polynomial poly;
    RuleSet rules;
};

/// {"constructors": [{"name", "arity"}...], "equations": {"explicit": [...],
/// "families": [...]}}. Unknown keys are rejected (InvalidInput); malformed
/// JSON is a ParseError; equation failures name the offending equation.
SignatureFile parse_signature(std::string_view jsonText);
SignatureFile load_signature(const std::filesystem::path& path);
std::string signature_to_json(const SignatureFile& sig);

/// {"carrier": m, "ops": {"name": element-or-nested-arrays}}.
FiniteAlgebra parse_algebra(const Polynomial& poly, std::string_view jsonText);
FiniteAlgebra load_algebra(const Polynomial& poly, const std::filesystem::path& path);
std::string algebra_to_json(const Polynomial& poly, const FiniteAlgebra& alg);

/// Whole file as a string; throws InvalidInput when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace qw
