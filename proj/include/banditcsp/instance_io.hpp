#pragma once

#include <banditcsp/model.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace banditcsp {

// Line-oriented instance format:
//
//   # comment
//   name <text>
//   vars <n>
//   dom <i> <v1> ... <vk>
//   ext +|- <arity> <scope...> ; <tuple> | <tuple> | ...
//   int <scope...> ; <expression>
//   ne <a> <b>
//
// Constraints are numbered in file order. Expressions are infix over x<i>
// terms and integer literals with + - * abs() = != < <= > >= && ||.

auto format_expr(const Expr & e) -> std::string;
/// Parses an infix expression; columns in errors are 1-based within text.
auto parse_expr(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0) -> Expr;

auto write_instance(std::ostream & out, const Instance & inst) -> void;
auto write_instance(const Instance & inst, const std::filesystem::path & path) -> void;

/// Throws ParseError with the offending line and column.
auto read_instance(std::istream & in) -> Instance;
auto parse_instance(const std::filesystem::path & path) -> Instance;

} // namespace banditcsp
