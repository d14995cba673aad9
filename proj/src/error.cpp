#include "qw/error.hpp"

namespace qw {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::EmptySignature: return "EmptySignature";
    case Errc::NotImagePreserving: return "NotImagePreserving";
    case Errc::BadVariableIndex: return "BadVariableIndex";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownConstructor: return "UnknownConstructor";
    case Errc::NoNullaryConstructor: return "NoNullaryConstructor";
    case Errc::NotSatisfying: return "NotSatisfying";
    case Errc::NoConstructorFits: return "NoConstructorFits";
    case Errc::UnsupportedRuleSet: return "UnsupportedRuleSet";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), detail_(message) {}

void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace qw
