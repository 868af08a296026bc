#include <banditcsp/instance_io.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace banditcsp {

namespace {
    auto format_into(const Expr & e, std::string & out) -> void
    {
        switch (e.op) {
        case ExprOp::Const: out += std::to_string(e.value); return;
        case ExprOp::Var: out += "x" + std::to_string(e.value); return;
        case ExprOp::Abs:
            out += "abs(";
            format_into(e.args[0], out);
            out += ")";
            return;
        default:
            out += "(";
            format_into(e.args[0], out);
            out += " ";
            out += to_string(e.op);
            out += " ";
            format_into(e.args[1], out);
            out += ")";
            return;
        }
    }

    class ExprParser
    {
    public:
        ExprParser(std::string_view text, std::size_t line, std::size_t offset) :
            _text(text),
            _line(line),
            _offset(offset)
        {
        }

        auto parse() -> Expr
        {
            auto e = parse_or();
            skip_space();
            if (_pos != _text.size())
                fail("unexpected '" + std::string(1, _text[_pos]) + "'");
            return e;
        }

    private:
        [[noreturn]] auto fail(const std::string & msg) const -> void
        {
            throw ParseError(_line, _offset + _pos + 1, msg);
        }

        auto skip_space() -> void
        {
            while (_pos < _text.size() && std::isspace(static_cast<unsigned char>(_text[_pos])))
                ++_pos;
        }

        auto accept(std::string_view tok) -> bool
        {
            skip_space();
            if (_text.substr(_pos, tok.size()) == tok) {
                _pos += tok.size();
                return true;
            }
            return false;
        }

        // ASCII hyphen or U+2212
        auto accept_minus() -> bool { return accept("-") || accept("\xe2\x88\x92"); }

        auto parse_or() -> Expr
        {
            auto lhs = parse_and();
            while (accept("||"))
                lhs = expr::lor(std::move(lhs), parse_and());
            return lhs;
        }

        auto parse_and() -> Expr
        {
            auto lhs = parse_cmp();
            while (accept("&&"))
                lhs = expr::land(std::move(lhs), parse_cmp());
            return lhs;
        }

        auto parse_cmp() -> Expr
        {
            auto lhs = parse_sum();
            // longest tokens first
            static constexpr std::pair<std::string_view, ExprOp> ops[] = {{"==", ExprOp::Eq}, {"!=", ExprOp::Ne},
                {"<=", ExprOp::Le}, {">=", ExprOp::Ge}, {"=", ExprOp::Eq}, {"<", ExprOp::Lt}, {">", ExprOp::Gt}};
            for (const auto & [tok, op] : ops)
                if (accept(tok))
                    return expr::binary(op, std::move(lhs), parse_sum());
            return lhs;
        }

        auto parse_sum() -> Expr
        {
            auto lhs = parse_prod();
            for (;;) {
                if (accept("+"))
                    lhs = expr::add(std::move(lhs), parse_prod());
                else if (accept_minus())
                    lhs = expr::sub(std::move(lhs), parse_prod());
                else
                    return lhs;
            }
        }

        auto parse_prod() -> Expr
        {
            auto lhs = parse_unary();
            while (accept("*"))
                lhs = expr::mul(std::move(lhs), parse_unary());
            return lhs;
        }

        auto parse_unary() -> Expr
        {
            if (accept_minus()) {
                skip_space();
                if (_pos < _text.size() && std::isdigit(static_cast<unsigned char>(_text[_pos])))
                    return expr::constant(-read_integer());
                return expr::sub(expr::constant(0), parse_unary());
            }
            return parse_primary();
        }

        auto read_integer() -> std::int64_t
        {
            skip_space();
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(_text.data() + _pos, _text.data() + _text.size(), v);
            if (ec != std::errc{})
                fail("expected an integer");
            _pos = static_cast<std::size_t>(ptr - _text.data());
            return v;
        }

        auto parse_primary() -> Expr
        {
            skip_space();
            if (_pos >= _text.size())
                fail("unexpected end of expression");
            char ch = _text[_pos];
            if (std::isdigit(static_cast<unsigned char>(ch)))
                return expr::constant(read_integer());
            if (accept("abs")) {
                if (! accept("("))
                    fail("expected '(' after abs");
                auto inner = parse_or();
                if (! accept(")"))
                    fail("expected ')'");
                return expr::abs(std::move(inner));
            }
            if (ch == 'x') {
                ++_pos;
                if (_pos >= _text.size() || ! std::isdigit(static_cast<unsigned char>(_text[_pos])))
                    fail("expected a variable index after 'x'");
                auto idx = read_integer();
                if (idx < 0 || idx > static_cast<std::int64_t>(UINT32_MAX))
                    fail("variable index out of range");
                return expr::var(static_cast<std::uint32_t>(idx));
            }
            if (accept("(")) {
                auto inner = parse_or();
                if (! accept(")"))
                    fail("expected ')'");
                return inner;
            }
            fail("unexpected '" + std::string(1, ch) + "'");
        }

        std::string_view _text;
        std::size_t _line;
        std::size_t _offset;
        std::size_t _pos = 0;
    };

    struct Token
    {
        std::string text;
        std::size_t column; // 1-based
    };

    auto tokenize(std::string_view line) -> std::vector<Token>
    {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            if (line[i] == ';' || line[i] == '|')
                ++i;
            else
                while (i < line.size() && ! std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ';' &&
                    line[i] != '|')
                    ++i;
            out.push_back(Token{std::string(line.substr(start, i - start)), start + 1});
        }
        return out;
    }

    class InstanceReader
    {
    public:
        auto read(std::istream & in) -> Instance
        {
            std::string raw;
            while (std::getline(in, raw)) {
                ++_line;
                if (! raw.empty() && raw.back() == '\r')
                    raw.pop_back();
                handle_line(raw);
            }
            if (! _declared)
                throw ParseError(_line, 1, "missing 'vars' header");
            for (std::size_t i = 0; i < _have_domain.size(); ++i)
                if (! _have_domain[i])
                    throw ParseError(_line, 1, "variable x" + std::to_string(i) + " has no 'dom' line");
            return std::move(_inst);
        }

    private:
        [[noreturn]] auto fail(std::size_t column, const std::string & msg) const -> void
        {
            throw ParseError(_line, column, msg);
        }

        auto integer(const Token & t) const -> long long
        {
            long long v = 0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
                fail(t.column, "expected an integer, got '" + t.text + "'");
            return v;
        }

        auto variable(const Token & t) const -> VariableId
        {
            auto v = integer(t);
            if (v < 0 || static_cast<std::size_t>(v) >= _inst.variables.size())
                fail(t.column, "undeclared variable " + t.text);
            return VariableId{static_cast<std::uint32_t>(v)};
        }

        auto require_vars(const Token & t) const -> void
        {
            if (! _declared)
                fail(t.column, "'" + t.text + "' before the 'vars' header");
        }

        auto check_scope(const std::vector<VariableId> & scope, std::size_t column) const -> void
        {
            if (scope.empty())
                fail(column, "empty scope");
            auto sorted = scope;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                fail(column, "scope repeats a variable");
        }

        auto handle_line(const std::string & raw) -> void
        {
            std::string_view line = raw;
            if (auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            auto toks = tokenize(line);
            if (toks.empty())
                return;
            const auto & kw = toks[0].text;

            if (kw == "name") {
                auto start = line.find_first_not_of(" \t", toks[0].column - 1 + kw.size());
                _inst.name = start == std::string_view::npos ? "" : std::string(line.substr(start));
                while (! _inst.name.empty() && std::isspace(static_cast<unsigned char>(_inst.name.back())))
                    _inst.name.pop_back();
            }
            else if (kw == "vars") {
                if (_declared)
                    fail(toks[0].column, "duplicate 'vars' header");
                if (toks.size() != 2)
                    fail(toks[0].column, "expected 'vars <n>'");
                auto n = integer(toks[1]);
                if (n < 0)
                    fail(toks[1].column, "negative variable count");
                _inst.variables.resize(static_cast<std::size_t>(n));
                _have_domain.assign(static_cast<std::size_t>(n), false);
                _declared = true;
            }
            else if (kw == "dom") {
                require_vars(toks[0]);
                if (toks.size() < 3)
                    fail(toks[0].column, "expected 'dom <i> <values...>'");
                auto x = variable(toks[1]);
                if (_have_domain[x.index])
                    fail(toks[1].column, "second domain for x" + std::to_string(x.index));
                std::vector<int> values;
                for (std::size_t i = 2; i < toks.size(); ++i)
                    values.push_back(static_cast<int>(integer(toks[i])));
                std::sort(values.begin(), values.end());
                values.erase(std::unique(values.begin(), values.end()), values.end());
                _inst.variables[x.index].domain = std::move(values);
                _have_domain[x.index] = true;
            }
            else if (kw == "ext")
                handle_ext(toks);
            else if (kw == "int")
                handle_int(line, toks);
            else if (kw == "ne") {
                require_vars(toks[0]);
                if (toks.size() != 3)
                    fail(toks[0].column, "expected 'ne <a> <b>'");
                auto a = variable(toks[1]), b = variable(toks[2]);
                if (a == b)
                    fail(toks[2].column, "disequality of a variable with itself");
                _inst.add_not_equal(a, b);
            }
            else
                fail(toks[0].column, "unknown keyword '" + kw + "'");
        }

        auto handle_ext(const std::vector<Token> & toks) -> void
        {
            require_vars(toks[0]);
            if (toks.size() < 3)
                fail(toks[0].column, "expected 'ext +|- <arity> <scope...> ; <tuples>'");
            bool positive;
            if (toks[1].text == "+")
                positive = true;
            else if (toks[1].text == "-" || toks[1].text == "\xe2\x88\x92")
                positive = false;
            else
                fail(toks[1].column, "expected '+' or '-'");
            auto arity = integer(toks[2]);
            if (arity < 1)
                fail(toks[2].column, "arity must be positive");

            std::size_t i = 3;
            std::vector<VariableId> scope;
            while (i < toks.size() && toks[i].text != ";")
                scope.push_back(variable(toks[i++]));
            if (i == toks.size())
                fail(toks.back().column, "missing ';' after the scope");
            if (scope.size() != static_cast<std::size_t>(arity))
                fail(toks[2].column, "arity " + std::to_string(arity) + " but scope has " + std::to_string(scope.size()) +
                        " variables");
            check_scope(scope, toks[3].column);
            ++i;

            std::vector<std::vector<int>> tuples;
            std::vector<int> current;
            std::size_t tuple_column = i < toks.size() ? toks[i].column : toks.back().column;
            auto flush = [&](std::size_t column) {
                if (current.size() != scope.size())
                    fail(column, "tuple of length " + std::to_string(current.size()) + " in a table of arity " +
                            std::to_string(scope.size()));
                tuples.push_back(std::move(current));
                current.clear();
            };
            for (; i < toks.size(); ++i) {
                if (toks[i].text == "|") {
                    flush(tuple_column);
                    tuple_column = i + 1 < toks.size() ? toks[i + 1].column : toks[i].column;
                }
                else
                    current.push_back(static_cast<int>(integer(toks[i])));
            }
            if (! current.empty() || ! tuples.empty())
                flush(tuple_column);
            _inst.add_table(std::move(scope), std::move(tuples), positive);
        }

        auto handle_int(std::string_view line, const std::vector<Token> & toks) -> void
        {
            require_vars(toks[0]);
            std::size_t i = 1;
            std::vector<VariableId> scope;
            while (i < toks.size() && toks[i].text != ";")
                scope.push_back(variable(toks[i++]));
            if (i == toks.size())
                fail(toks.back().column, "missing ';' after the scope");
            check_scope(scope, toks[0].column);
            if (scope.size() > max_intensional_arity)
                fail(toks[1].column, "intensional arity exceeds " + std::to_string(max_intensional_arity));

            std::size_t expr_start = toks[i].column; // just past ';'
            auto e = parse_expr(line.substr(expr_start), _line, expr_start);
            for (auto x : expr::variables_of(e)) {
                if (x.index >= _inst.variables.size())
                    fail(expr_start + 1, "expression references undeclared variable x" + std::to_string(x.index));
                if (std::find(scope.begin(), scope.end(), x) == scope.end())
                    fail(expr_start + 1, "expression variable x" + std::to_string(x.index) + " is not in the scope");
            }
            _inst.add_intensional(std::move(scope), std::move(e));
        }

        Instance _inst;
        std::vector<bool> _have_domain;
        bool _declared = false;
        std::size_t _line = 0;
    };
} // namespace

auto format_expr(const Expr & e) -> std::string
{
    std::string out;
    format_into(e, out);
    return out;
}

auto parse_expr(std::string_view text, std::size_t line, std::size_t column_offset) -> Expr
{
    return ExprParser(text, line, column_offset).parse();
}

auto write_instance(std::ostream & out, const Instance & inst) -> void
{
    if (! inst.name.empty())
        out << "name " << inst.name << "\n";
    out << "vars " << inst.num_variables() << "\n";
    for (std::size_t i = 0; i < inst.num_variables(); ++i) {
        out << "dom " << i;
        for (int v : inst.variables[i].domain)
            out << ' ' << v;
        out << "\n";
    }
    for (const auto & c : inst.constraints) {
        if (const auto * table = std::get_if<ExtensionalTable>(&c.body)) {
            out << "ext " << (table->positive ? '+' : '-') << ' ' << c.scope.size();
            for (auto x : c.scope)
                out << ' ' << x.index;
            out << " ;";
            for (std::size_t t = 0; t < table->tuples.size(); ++t) {
                if (t > 0)
                    out << " |";
                for (int v : table->tuples[t])
                    out << ' ' << v;
            }
            out << "\n";
        }
        else if (const auto * intension = std::get_if<IntensionalExpr>(&c.body)) {
            out << "int";
            for (auto x : c.scope)
                out << ' ' << x.index;
            out << " ; " << format_expr(intension->expr) << "\n";
        }
        else
            out << "ne " << c.scope[0].index << ' ' << c.scope[1].index << "\n";
    }
}

auto write_instance(const Instance & inst, const std::filesystem::path & path) -> void
{
    std::ofstream out(path);
    if (! out)
        throw std::runtime_error("cannot write " + path.string());
    write_instance(out, inst);
    if (! out)
        throw std::runtime_error("error writing " + path.string());
}

auto read_instance(std::istream & in) -> Instance
{
    return InstanceReader{}.read(in);
}

auto parse_instance(const std::filesystem::path & path) -> Instance
{
    std::ifstream in(path);
    if (! in)
        throw std::runtime_error("cannot open " + path.string());
    return read_instance(in);
}

} // namespace banditcsp
