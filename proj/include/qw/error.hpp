#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qw {

enum class Errc {
    DuplicateName,
    EmptySignature,
    NotImagePreserving,
    BadVariableIndex,
    ArityMismatch,
    CapExceeded,
    ParseError,
    UnknownConstructor,
    NoNullaryConstructor,
    NotSatisfying,
    NoConstructorFits,
    UnsupportedRuleSet,
    InvalidInput,
    Internal,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library. The code is stable and is what the
/// CLI maps onto exit statuses; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace qw
