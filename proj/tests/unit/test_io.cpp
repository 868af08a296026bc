#include <banditcsp/generators.hpp>
#include <banditcsp/instance_io.hpp>

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace banditcsp;

namespace {
    auto round_trip(const Instance & inst) -> Instance
    {
        std::stringstream ss;
        write_instance(ss, inst);
        return read_instance(ss);
    }

    auto read_text(const std::string & text) -> Instance
    {
        std::istringstream in(text);
        return read_instance(in);
    }

    auto parse_error_at(const std::string & text) -> std::pair<std::size_t, std::size_t>
    {
        try {
            read_text(text);
        }
        catch (const ParseError & e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    }

    auto random_expr(std::mt19937_64 & rng, int depth) -> Expr
    {
        using namespace expr;
        auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
        if (depth == 0 || pick(0, 3) == 0)
            return pick(0, 1) ? constant(pick(-5, 9)) : var(static_cast<std::uint32_t>(pick(0, 3)));
        int op = pick(static_cast<int>(ExprOp::Add), static_cast<int>(ExprOp::Or));
        if (static_cast<ExprOp>(op) == ExprOp::Abs)
            return abs(random_expr(rng, depth - 1));
        return binary(static_cast<ExprOp>(op), random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    }
} // namespace

TEST_CASE("generated instances survive a write/read round trip")
{
    for (const auto & inst : {gen_random_csp(RandomSpec{8, 4, 3, 10, 0.5, 2}), gen_all_interval(6),
             gen_golomb(5, 11), gen_langford(2, 5)})
        CHECK(round_trip(inst) == inst);
}

TEST_CASE("property: mixed instances survive a round trip")
{
    std::mt19937_64 rng(61);
    for (int round = 0; round < 300; ++round) {
        auto inst = oracle::random_mixed_instance(rng);
        inst.name = "mixed-" + std::to_string(round);
        REQUIRE(round_trip(inst) == inst);
    }
}

TEST_CASE("property: expression format and parse are inverse")
{
    std::mt19937_64 rng(67);
    for (int round = 0; round < 2000; ++round) {
        auto e = random_expr(rng, 4);
        REQUIRE(parse_expr(format_expr(e)) == e);
    }
}

TEST_CASE("expression precedence")
{
    using namespace expr;
    CHECK(parse_expr("x0 + x1 * 2 = 5") == eq(add(var(0u), mul(var(1u), constant(2))), constant(5)));
    CHECK(parse_expr("x0 < 1 || x1 > 2 && x0 != x1")
        == lor(lt(var(0u), constant(1)), land(gt(var(1u), constant(2)), ne(var(0u), var(1u)))));
    CHECK(parse_expr("abs(x0 - x1) >= -3") == ge(abs(sub(var(0u), var(1u))), constant(-3)));
    CHECK(parse_expr("-x2 == 0") == eq(sub(constant(0), var(2u)), constant(0)));
    CHECK(parse_expr("x1 \xe2\x88\x92 1 <= 0") == le(sub(var(1u), constant(1)), constant(0)));
}

TEST_CASE("expression errors")
{
    CHECK_THROWS_AS(parse_expr("x0 +"), ParseError);
    CHECK_THROWS_AS(parse_expr("(x0"), ParseError);
    CHECK_THROWS_AS(parse_expr("x0 ? 1"), ParseError);
    CHECK_THROWS_AS(parse_expr("abs x0"), ParseError);
    try {
        parse_expr("x0 + + ", 4, 10);
        FAIL("expected a parse error");
    }
    catch (const ParseError & e) {
        CHECK(e.line() == 4);
        CHECK(e.column() > 10);
    }
}

TEST_CASE("reader accepts comments and an empty constraint list")
{
    auto inst = read_text("# header\nname tiny\nvars 2\ndom 0 1 2 3\n\ndom 1 5\n");
    CHECK(inst.name == "tiny");
    CHECK(inst.num_variables() == 2);
    CHECK(inst.constraints.empty());
    CHECK(inst.variables[0].domain == std::vector<int>{1, 2, 3});
}

TEST_CASE("reader reports line and column")
{
    CHECK(parse_error_at("vars 2\ndom 0 1\ndom 1 1\nne 0 7\n") == std::pair<std::size_t, std::size_t>{4, 6});
    CHECK(parse_error_at("vars 2\ndom 0 1\n").first == 2);
    CHECK(parse_error_at("vars 1\nvars 1\ndom 0 1\n").first == 2);
    CHECK(parse_error_at("vars 2\ndom 0 1\ndom 1 1\next + 2 0 1 ; 1 1 | 1\n").first == 4);
    CHECK(parse_error_at("vars 2\ndom 0 1\ndom 1 1\next + 3 0 1 ; 1 1\n").first == 4);
    CHECK(parse_error_at("vars 2\ndom 0 1\ndom 1 1\nint 0 ; x1 = 1\n").first == 4);
    CHECK(parse_error_at("vars 5\ndom 0 1\ndom 1 1\ndom 2 1\ndom 3 1\ndom 4 1\nint 0 1 2 3 4 ; x0 = 1\n").first == 7);
    CHECK(parse_error_at("bogus\n").first == 1);
}
