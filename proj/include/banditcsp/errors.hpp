#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace banditcsp {

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// Malformed model data: bad arity, unknown variables, unbound expression terms.
class StructuralError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error
{
public:
    ParseError(std::size_t line, std::size_t column, const std::string & message) :
        std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        _line(line),
        _column(column)
    {
    }

    auto line() const noexcept -> std::size_t { return _line; }
    auto column() const noexcept -> std::size_t { return _column; }

private:
    std::size_t _line;
    std::size_t _column;
};

} // namespace banditcsp
