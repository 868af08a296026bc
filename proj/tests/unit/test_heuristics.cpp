#include <banditcsp/heuristics.hpp>

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace banditcsp;
using namespace banditcsp::expr;

namespace {
    /// x0 in {0,1} shares three constraints with x1, x2, x3 (domains of size 3).
    auto star() -> Instance
    {
        Instance inst;
        auto x = inst.add_variable(0, 1);
        for (int i = 0; i < 3; ++i) {
            auto y = inst.add_variable(0, 2);
            inst.add_not_equal(x, y);
        }
        return inst;
    }
} // namespace

TEST_CASE("ddeg/dom and wdeg/dom scores")
{
    auto inst = star();
    SolverState s(inst);
    HeuristicScores hs(inst);
    CHECK(score(HeuristicKind::DdegDom, VariableId{0}, s, hs) == doctest::Approx(1.5));
    CHECK(score(HeuristicKind::DdegDom, VariableId{1}, s, hs) == doctest::Approx(1.0 / 3.0));
    CHECK(score(HeuristicKind::WdegDom, VariableId{0}, s, hs) == doctest::Approx(1.5));

    hs.on_wipeout(0);
    hs.on_wipeout(0);
    CHECK(hs.weight(0) == 3);
    CHECK(hs.weight(1) == 1);
    CHECK(score(HeuristicKind::WdegDom, VariableId{0}, s, hs) == doctest::Approx(5.0 / 2.0));

    SUBCASE("constraints with one free variable no longer count")
    {
        s.push_level();
        for (std::uint32_t i = 1; i <= 3; ++i)
            s.assign(VariableId{i}, 2);
        CHECK(score(HeuristicKind::DdegDom, VariableId{0}, s, hs) == 0.0);
        CHECK(score(HeuristicKind::WdegDom, VariableId{0}, s, hs) == 0.0);
    }
}

TEST_CASE("wdeg/dom with two active unit weights over four values")
{
    Instance inst;
    auto x = inst.add_variable(0, 3);
    auto y = inst.add_variable(0, 3), z = inst.add_variable(0, 3);
    inst.add_not_equal(x, y);
    inst.add_not_equal(x, z);
    SolverState s(inst);
    HeuristicScores hs(inst);
    CHECK(score(HeuristicKind::WdegDom, x, s, hs) == doctest::Approx(0.5));
}

TEST_CASE("impact averages")
{
    auto inst = star();
    HeuristicScores hs(inst);
    VariableId x{0};
    CHECK(hs.impact(x, 0) == 1.0);
    hs.record_impact(x, 0, 2.0, 2.0);
    CHECK(hs.impact(x, 0) == 0.0);
    hs.record_impact(x, 0, 2.0, -std::numeric_limits<double>::infinity());
    CHECK(hs.impact(x, 0) == doctest::Approx(0.5));
    CHECK(hs.impact_samples(x, 0) == 2);
    CHECK_THROWS_AS(hs.record_impact(x, 9, 1.0, 0.0), ContractViolation);

    SolverState s(inst);
    // value 0 averages 0.5, value 1 is unprobed and counts as 1
    CHECK(score(HeuristicKind::Impact, x, s, hs) == doctest::Approx(0.75));
}

TEST_CASE("activity bumps filtered variables and decays the rest")
{
    auto inst = star();
    SolverState s(inst);
    HeuristicScores hs(inst, 0.5);
    hs.set_activity(VariableId{2}, 1.0);
    std::vector<DomainChange> changed{{VariableId{1}, 1}};
    hs.on_propagation_event(s, changed);
    CHECK(hs.activity(VariableId{1}) == 1.0);
    CHECK(hs.activity(VariableId{2}) == 0.5);

    s.push_level();
    s.assign(VariableId{2}, 0);
    std::vector<DomainChange> changed2{{VariableId{2}, 2}};
    hs.on_propagation_event(s, changed2);
    CHECK(hs.activity(VariableId{2}) == 0.5); // instantiated: untouched
    CHECK(hs.activity(VariableId{1}) == 0.5);
    CHECK(score(HeuristicKind::Activity, VariableId{1}, s, hs) == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("default decay")
{
    auto inst = star();
    SolverState s(inst);
    HeuristicScores hs(inst);
    hs.set_activity(VariableId{1}, 1.0);
    hs.on_propagation_event(s, {});
    CHECK(hs.activity(VariableId{1}) == doctest::Approx(0.999));
}

TEST_CASE("select_variable: argmax, ties to the smaller index, contract on no free variable")
{
    auto inst = star();
    SolverState s(inst);
    HeuristicScores hs(inst);
    CHECK(select_variable(HeuristicKind::DdegDom, s, hs) == VariableId{0});
    CHECK(select_variable(HeuristicKind::Activity, s, hs) == VariableId{0});
    hs.set_activity(VariableId{3}, 10.0);
    CHECK(select_variable(HeuristicKind::Activity, s, hs) == VariableId{3});

    s.push_level();
    for (std::uint32_t i = 0; i < 4; ++i)
        s.assign(VariableId{i}, i == 0 ? 0 : 1);
    CHECK_THROWS_AS(select_variable(HeuristicKind::DdegDom, s, hs), ContractViolation);
    CHECK_THROWS_AS(score(HeuristicKind::DdegDom, VariableId{0}, s, hs), ContractViolation);
}

TEST_CASE("select_value returns the current minimum")
{
    Instance inst;
    auto x = inst.add_variable(std::vector<int>{3, 1, 7});
    SolverState s(inst);
    CHECK(select_value(s, x) == 1);
    s.remove_value(x, 1);
    CHECK(select_value(s, x) == 3);
}

TEST_CASE("property: scaling activity scores keeps the argmax")
{
    std::mt19937_64 rng(3);
    for (int round = 0; round < 200; ++round) {
        auto inst = oracle::random_mixed_instance(rng, 6, 4);
        SolverState s(inst);
        HeuristicScores a(inst), b(inst);
        const double k = std::uniform_real_distribution<double>(0.1, 50.0)(rng);
        for (std::uint32_t i = 0; i < inst.num_variables(); ++i) {
            // small integers keep both scaled and unscaled scores exact in binary
            double v = static_cast<double>(rng() % 4);
            a.set_activity(VariableId{i}, v);
            b.set_activity(VariableId{i}, v * (k > 1 ? 4.0 : 0.25));
        }
        bool any_free = false;
        for (std::uint32_t i = 0; i < inst.num_variables(); ++i)
            any_free = any_free || ! s.is_assigned(VariableId{i});
        if (! any_free)
            continue;
        CHECK(select_variable(HeuristicKind::Activity, s, a) == select_variable(HeuristicKind::Activity, s, b));
    }
}
