#include <banditcsp/model.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>

namespace banditcsp {

namespace expr {
    auto constant(std::int64_t v) -> Expr
    {
        Expr e;
        e.op = ExprOp::Const;
        e.value = v;
        return e;
    }

    auto var(VariableId x) -> Expr
    {
        Expr e;
        e.op = ExprOp::Var;
        e.value = x.index;
        return e;
    }

    auto var(std::uint32_t index) -> Expr
    {
        return var(VariableId{index});
    }

    auto abs(Expr inner) -> Expr
    {
        Expr e;
        e.op = ExprOp::Abs;
        e.args.push_back(std::move(inner));
        return e;
    }

    auto binary(ExprOp op, Expr lhs, Expr rhs) -> Expr
    {
        if (op == ExprOp::Const || op == ExprOp::Var || op == ExprOp::Abs)
            throw ContractViolation("binary() needs a binary operator");
        Expr e;
        e.op = op;
        e.args.reserve(2);
        e.args.push_back(std::move(lhs));
        e.args.push_back(std::move(rhs));
        return e;
    }

    namespace {
        auto collect(const Expr & e, std::vector<VariableId> & out) -> void
        {
            if (e.op == ExprOp::Var) {
                VariableId x{static_cast<std::uint32_t>(e.value)};
                if (std::find(out.begin(), out.end(), x) == out.end())
                    out.push_back(x);
            }
            for (const auto & a : e.args)
                collect(a, out);
        }
    } // namespace

    auto variables_of(const Expr & e) -> std::vector<VariableId>
    {
        std::vector<VariableId> out;
        collect(e, out);
        return out;
    }
} // namespace expr

auto resolve_slots(Expr & e, std::span<const VariableId> scope) -> void
{
    if (e.op == ExprOp::Var) {
        auto it = std::find(scope.begin(), scope.end(), VariableId{static_cast<std::uint32_t>(e.value)});
        e.slot = it == scope.end() ? -1 : static_cast<int>(it - scope.begin());
    }
    for (auto & a : e.args)
        resolve_slots(a, scope);
}

auto Instance::add_variable(std::vector<int> domain) -> VariableId
{
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    variables.push_back(Variable{std::move(domain)});
    return VariableId{static_cast<std::uint32_t>(variables.size() - 1)};
}

auto Instance::add_variable(int lo, int hi) -> VariableId
{
    std::vector<int> d;
    for (int v = lo; v <= hi; ++v)
        d.push_back(v);
    return add_variable(std::move(d));
}

auto Instance::add_table(std::vector<VariableId> scope, std::vector<std::vector<int>> tuples, bool positive) -> int
{
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    int id = static_cast<int>(constraints.size());
    constraints.push_back(Constraint{id, std::move(scope), ExtensionalTable{std::move(tuples), positive}});
    return id;
}

auto Instance::add_intensional(std::vector<VariableId> scope, Expr e) -> int
{
    resolve_slots(e, scope);
    int id = static_cast<int>(constraints.size());
    constraints.push_back(Constraint{id, std::move(scope), IntensionalExpr{std::move(e)}});
    return id;
}

auto Instance::add_intensional(Expr e) -> int
{
    auto scope = expr::variables_of(e);
    return add_intensional(std::move(scope), std::move(e));
}

auto Instance::add_not_equal(VariableId a, VariableId b) -> int
{
    int id = static_cast<int>(constraints.size());
    constraints.push_back(Constraint{id, {a, b}, BinaryDisequality{}});
    return id;
}

Assignment::Assignment(std::size_t num_variables) :
    _values(num_variables)
{
}

auto Assignment::total(std::vector<int> values) -> Assignment
{
    Assignment a(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        a._values[i] = values[i];
    return a;
}

auto Assignment::set(VariableId x, int v) -> void
{
    if (x.index >= _values.size())
        _values.resize(x.index + 1);
    _values[x.index] = v;
}

auto Assignment::unset(VariableId x) -> void
{
    if (x.index < _values.size())
        _values[x.index].reset();
}

auto Assignment::get(VariableId x) const -> std::optional<int>
{
    if (x.index >= _values.size())
        return std::nullopt;
    return _values[x.index];
}

auto Assignment::is_total() const -> bool
{
    return std::all_of(_values.begin(), _values.end(), [](const auto & v) { return v.has_value(); });
}

auto Assignment::values() const -> std::vector<int>
{
    if (! is_total())
        throw ContractViolation("assignment is partial");
    std::vector<int> out;
    out.reserve(_values.size());
    for (const auto & v : _values)
        out.push_back(*v);
    return out;
}

namespace {
    template <typename Lookup>
    auto eval(const Expr & e, const Lookup & lookup) -> std::int64_t
    {
        switch (e.op) {
        case ExprOp::Const: return e.value;
        case ExprOp::Var: return lookup(e);
        case ExprOp::Abs: return std::llabs(eval(e.args[0], lookup));
        default: break;
        }

        std::int64_t a = eval(e.args[0], lookup);
        // short-circuit
        if (e.op == ExprOp::And && a == 0)
            return 0;
        if (e.op == ExprOp::Or && a != 0)
            return 1;
        std::int64_t b = eval(e.args[1], lookup);

        switch (e.op) {
        case ExprOp::Add: return a + b;
        case ExprOp::Sub: return a - b;
        case ExprOp::Mul: return a * b;
        case ExprOp::Eq: return a == b;
        case ExprOp::Ne: return a != b;
        case ExprOp::Lt: return a < b;
        case ExprOp::Le: return a <= b;
        case ExprOp::Gt: return a > b;
        case ExprOp::Ge: return a >= b;
        case ExprOp::And: return b != 0;
        case ExprOp::Or: return b != 0;
        default: break;
        }
        throw StructuralError("malformed expression node");
    }
} // namespace

auto evaluate_expr(const Expr & e, const Assignment & asg) -> bool
{
    return eval(e, [&](const Expr & node) -> std::int64_t {
        auto v = asg.get(VariableId{static_cast<std::uint32_t>(node.value)});
        if (! v)
            throw StructuralError("unbound variable x" + std::to_string(node.value) + " in expression");
        return *v;
    }) != 0;
}

auto evaluate_slots(const Expr & e, std::span<const int> tuple) -> std::int64_t
{
    return eval(e, [&](const Expr & node) -> std::int64_t {
        if (node.slot < 0 || static_cast<std::size_t>(node.slot) >= tuple.size())
            throw StructuralError("expression variable x" + std::to_string(node.value) + " is not in the constraint scope");
        return tuple[static_cast<std::size_t>(node.slot)];
    });
}

auto constraint_allows(const Constraint & c, std::span<const int> tuple) -> bool
{
    if (tuple.size() != c.scope.size())
        throw StructuralError("tuple of length " + std::to_string(tuple.size()) + " for constraint c" +
            std::to_string(c.id) + " of arity " + std::to_string(c.scope.size()));

    if (const auto * table = std::get_if<ExtensionalTable>(&c.body)) {
        bool listed = std::any_of(table->tuples.begin(), table->tuples.end(),
            [&](const std::vector<int> & t) { return std::equal(t.begin(), t.end(), tuple.begin(), tuple.end()); });
        return listed == table->positive;
    }
    if (const auto * intension = std::get_if<IntensionalExpr>(&c.body))
        return evaluate_slots(intension->expr, tuple) != 0;
    return tuple[0] != tuple[1];
}

auto check_solution(const Instance & inst, const Assignment & asg) -> bool
{
    if (asg.size() != inst.num_variables() || ! asg.is_total())
        throw ContractViolation("check_solution needs a total assignment");

    std::vector<int> tuple;
    for (const auto & c : inst.constraints) {
        tuple.clear();
        for (auto x : c.scope)
            tuple.push_back(*asg.get(x));
        if (! constraint_allows(c, tuple))
            return false;
    }
    return true;
}

namespace {
    auto check_expr(const Expr & e, std::size_t n, const std::string & where, std::vector<std::string> & errors) -> void
    {
        switch (e.op) {
        case ExprOp::Const:
        case ExprOp::Var:
            if (! e.args.empty())
                errors.push_back(where + ": leaf expression node with children");
            if (e.op == ExprOp::Var) {
                if (e.value < 0 || static_cast<std::size_t>(e.value) >= n)
                    errors.push_back(where + ": expression references undeclared variable x" + std::to_string(e.value));
                else if (e.slot < 0)
                    errors.push_back(where + ": expression variable x" + std::to_string(e.value) + " is not in the scope");
            }
            break;
        case ExprOp::Abs:
            if (e.args.size() != 1)
                errors.push_back(where + ": abs takes one operand");
            break;
        default:
            if (e.args.size() != 2)
                errors.push_back(where + ": binary operator with " + std::to_string(e.args.size()) + " operands");
            break;
        }
        for (const auto & a : e.args)
            check_expr(a, n, where, errors);
    }
} // namespace

auto validate_instance(const Instance & inst) -> std::vector<std::string>
{
    std::vector<std::string> errors;
    const auto n = inst.num_variables();

    for (std::size_t i = 0; i < n; ++i) {
        const auto & d = inst.variables[i].domain;
        if (d.empty())
            errors.push_back("variable x" + std::to_string(i) + " has an empty domain");
        else if (std::adjacent_find(d.begin(), d.end(), std::greater_equal<>{}) != d.end())
            errors.push_back("variable x" + std::to_string(i) + " has a domain that is not strictly ascending");
    }

    for (std::size_t ci = 0; ci < inst.constraints.size(); ++ci) {
        const auto & c = inst.constraints[ci];
        const std::string where = "constraint c" + std::to_string(ci);

        if (c.id != static_cast<int>(ci))
            errors.push_back(where + ": id " + std::to_string(c.id) + " does not match its position");

        bool scope_ok = true;
        for (auto x : c.scope)
            if (x.index >= n) {
                errors.push_back(where + ": scope references undeclared variable x" + std::to_string(x.index));
                scope_ok = false;
            }
        if (scope_ok && std::set<VariableId>(c.scope.begin(), c.scope.end()).size() != c.scope.size())
            errors.push_back(where + ": scope repeats a variable");
        if (c.scope.empty())
            errors.push_back(where + ": empty scope");

        if (const auto * table = std::get_if<ExtensionalTable>(&c.body)) {
            for (const auto & t : table->tuples)
                if (t.size() != c.scope.size()) {
                    errors.push_back(where + ": tuple of length " + std::to_string(t.size()) + " in a table of arity " +
                        std::to_string(c.scope.size()));
                    break;
                }
        }
        else if (const auto * intension = std::get_if<IntensionalExpr>(&c.body)) {
            if (c.scope.size() > max_intensional_arity)
                errors.push_back(where + ": intensional arity " + std::to_string(c.scope.size()) + " exceeds " +
                    std::to_string(max_intensional_arity));
            check_expr(intension->expr, n, where, errors);
        }
        else if (c.scope.size() != 2)
            errors.push_back(where + ": disequality must be binary");
    }

    return errors;
}

auto to_string(ExprOp op) -> const char *
{
    switch (op) {
    case ExprOp::Const: return "const";
    case ExprOp::Var: return "var";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Abs: return "abs";
    case ExprOp::Eq: return "=";
    case ExprOp::Ne: return "!=";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::And: return "&&";
    case ExprOp::Or: return "||";
    }
    return "?";
}

} // namespace banditcsp
