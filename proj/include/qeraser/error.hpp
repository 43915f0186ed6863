#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qeraser {

enum class ErrorKind {
    ConfigurationMismatch,
    LabelCollision,
    InvalidLabel,
    InvalidAmplitude,
    CapacityExceeded,
    MultiPhotonUnsupported,
    UndefinedState,
    AncillaNotFresh,
    EmptyPostselection,
    CausalityViolation,
    ConditioningOnNull,
    AuditPrecondition,
    SyntaxError,
    SemanticError,
    UnknownScenario,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can branch on the category rather than the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qeraser
