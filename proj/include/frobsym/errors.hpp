#pragma once

#include <stdexcept>
#include <string>

namespace frobsym {

/// Base of every error raised by the library. Residual checks never throw;
/// these signal violated preconditions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FROBSYM_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}  \
    }

FROBSYM_DEFINE_ERROR(ZeroDivisor);
FROBSYM_DEFINE_ERROR(DimensionMismatch);
FROBSYM_DEFINE_ERROR(DegenerateMetric);
FROBSYM_DEFINE_ERROR(NonPositivePotential);
FROBSYM_DEFINE_ERROR(DomainViolation);
FROBSYM_DEFINE_ERROR(DegeneratePencil);
FROBSYM_DEFINE_ERROR(DegenerateForm);
FROBSYM_DEFINE_ERROR(NonConvergence);
FROBSYM_DEFINE_ERROR(InvariantViolation);
FROBSYM_DEFINE_ERROR(SchemaError);

#undef FROBSYM_DEFINE_ERROR

/// Malformed configuration text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("ParseError at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + " (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

} // namespace frobsym
