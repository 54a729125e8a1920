#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace l2relax {

enum class ErrorKind {
    ContractViolation,
    Domain,
    SingularMatrix,
    NotPsd,
    InsufficientData,
    MissingTarget,
    DegenerateVariance,
    DegenerateSharpe,
    InvalidSpec,
    Unsupported,
    Io,
    Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Usage/config errors map to CLI exit code 2, numerical failures to 1.
bool is_usage_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace l2relax
