#pragma once

#include <banditcsp/errors.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace banditcsp {

struct VariableId
{
    std::uint32_t index = 0;

    auto operator<=>(const VariableId &) const = default;
};

enum class ExprOp
{
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Abs,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or
};

/// Expression tree over integer variables. Comparisons and connectives
/// evaluate to 0 or 1; a nonzero root value means the constraint holds.
struct Expr
{
    ExprOp op = ExprOp::Const;
    std::int64_t value = 0; // constant, or variable index for Var
    int slot = -1;          // scope position of a Var, filled in by Instance::add_intensional
    std::vector<Expr> args;

    auto operator==(const Expr &) const -> bool = default;
};

namespace expr {
    auto constant(std::int64_t v) -> Expr;
    auto var(VariableId x) -> Expr;
    auto var(std::uint32_t index) -> Expr;
    auto abs(Expr e) -> Expr;
    auto binary(ExprOp op, Expr lhs, Expr rhs) -> Expr;

    inline auto add(Expr a, Expr b) { return binary(ExprOp::Add, std::move(a), std::move(b)); }
    inline auto sub(Expr a, Expr b) { return binary(ExprOp::Sub, std::move(a), std::move(b)); }
    inline auto mul(Expr a, Expr b) { return binary(ExprOp::Mul, std::move(a), std::move(b)); }
    inline auto eq(Expr a, Expr b) { return binary(ExprOp::Eq, std::move(a), std::move(b)); }
    inline auto ne(Expr a, Expr b) { return binary(ExprOp::Ne, std::move(a), std::move(b)); }
    inline auto lt(Expr a, Expr b) { return binary(ExprOp::Lt, std::move(a), std::move(b)); }
    inline auto le(Expr a, Expr b) { return binary(ExprOp::Le, std::move(a), std::move(b)); }
    inline auto gt(Expr a, Expr b) { return binary(ExprOp::Gt, std::move(a), std::move(b)); }
    inline auto ge(Expr a, Expr b) { return binary(ExprOp::Ge, std::move(a), std::move(b)); }
    inline auto land(Expr a, Expr b) { return binary(ExprOp::And, std::move(a), std::move(b)); }
    inline auto lor(Expr a, Expr b) { return binary(ExprOp::Or, std::move(a), std::move(b)); }

    /// Variables referenced by e, in first-occurrence order.
    auto variables_of(const Expr & e) -> std::vector<VariableId>;
} // namespace expr

struct ExtensionalTable
{
    std::vector<std::vector<int>> tuples;
    bool positive = true;

    auto operator==(const ExtensionalTable &) const -> bool = default;
};

struct IntensionalExpr
{
    Expr expr;

    auto operator==(const IntensionalExpr &) const -> bool = default;
};

struct BinaryDisequality
{
    auto operator==(const BinaryDisequality &) const -> bool = default;
};

using ConstraintBody = std::variant<ExtensionalTable, IntensionalExpr, BinaryDisequality>;

struct Constraint
{
    int id = 0;
    std::vector<VariableId> scope;
    ConstraintBody body;

    auto arity() const -> std::size_t { return scope.size(); }
    auto operator==(const Constraint &) const -> bool = default;
};

struct Variable
{
    std::vector<int> domain; // ascending, no duplicates

    auto operator==(const Variable &) const -> bool = default;
};

/// Intensional constraints are limited to this arity so that support search
/// over the Cartesian product of the scope stays bounded.
inline constexpr std::size_t max_intensional_arity = 4;

struct Instance
{
    std::string name;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;

    auto add_variable(std::vector<int> domain) -> VariableId;
    auto add_variable(int lo, int hi) -> VariableId;
    auto add_table(std::vector<VariableId> scope, std::vector<std::vector<int>> tuples, bool positive = true) -> int;
    auto add_intensional(std::vector<VariableId> scope, Expr e) -> int;
    auto add_intensional(Expr e) -> int; // scope = variables of e
    auto add_not_equal(VariableId a, VariableId b) -> int;

    auto num_variables() const -> std::size_t { return variables.size(); }
    auto operator==(const Instance &) const -> bool = default;
};

/// Scope slots for every Var node; -1 where the variable is not in scope.
auto resolve_slots(Expr & e, std::span<const VariableId> scope) -> void;

class Assignment
{
public:
    Assignment() = default;
    explicit Assignment(std::size_t num_variables);
    static auto total(std::vector<int> values) -> Assignment;

    auto set(VariableId x, int v) -> void;
    auto unset(VariableId x) -> void;
    auto get(VariableId x) const -> std::optional<int>;
    auto is_total() const -> bool;
    auto size() const -> std::size_t { return _values.size(); }
    /// Throws ContractViolation unless total.
    auto values() const -> std::vector<int>;

    auto operator==(const Assignment &) const -> bool = default;

private:
    std::vector<std::optional<int>> _values;
};

/// Truth of e with variables looked up in asg. Throws StructuralError on an unbound variable.
auto evaluate_expr(const Expr & e, const Assignment & asg) -> bool;

/// Evaluates using scope slots, with tuple[i] the value of scope[i].
auto evaluate_slots(const Expr & e, std::span<const int> tuple) -> std::int64_t;

auto constraint_allows(const Constraint & c, std::span<const int> tuple) -> bool;

auto check_solution(const Instance & inst, const Assignment & asg) -> bool;

auto validate_instance(const Instance & inst) -> std::vector<std::string>;

auto to_string(ExprOp op) -> const char *;

} // namespace banditcsp
