#include <banditcsp/bandit.hpp>

#include "../support/window_oracle.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <deque>
#include <random>

using namespace banditcsp;

TEST_CASE("reward functions")
{
    CHECK(ts_reward(1) == 1.0);
    CHECK(ts_reward(4) == 0.25);
    CHECK_THROWS_AS(ts_reward(0), ContractViolation);
    CHECK(ucb_reward(8, 8) == 0.0);
    CHECK(ucb_reward(2, 8) == 0.75);
    CHECK(ucb_reward(1, 1) == 0.0);
    CHECK_THROWS_AS(ucb_reward(9, 8), ContractViolation);
    CHECK_THROWS_AS(ucb_reward(0, 8), ContractViolation);
    CHECK(std::abs(ucb_index(0.0, 4, 1) - std::sqrt(2.0 * std::log(4.0))) < 1e-12);
    CHECK_THROWS_AS(ucb_index(0.5, 4, 0), ContractViolation);
}

TEST_CASE("UCB1 round robin before any update, then stable argmax")
{
    Selector sel(SelectorKind::Ucb1, 4, 0);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(sel.choose_arm() == i % 4);
    sel.update(1, 1);
    CHECK(sel.choose_arm() == 0);
    CHECK(sel.choose_arm() == 2);
    CHECK(sel.choose_arm() == 3);
    sel.update(0, 2);
    sel.update(2, 3);
    sel.update(3, 4);
    auto a = sel.choose_arm();
    for (int i = 0; i < 5; ++i)
        CHECK(sel.choose_arm() == a);
    CHECK(sel.c_max() == 4);
}

TEST_CASE("UCB1 updates: C_max first, then the running mean")
{
    Selector sel(SelectorKind::Ucb1, 2, 0);
    sel.update(0, 1);
    CHECK(sel.ucb_arm(0).count == 1);
    CHECK(sel.ucb_arm(0).mean() == 0.0);
    sel.update(0, 4);
    sel.update(1, 2);
    CHECK(sel.ucb_arm(0).mean() == 0.0);
    CHECK(sel.ucb_arm(1).mean() == 0.5);
    CHECK(sel.ucb_total() == 3);
    CHECK(sel.ucb_rho(1) == doctest::Approx(0.5 + std::sqrt(2.0 * std::log(3.0))));
}

TEST_CASE("Thompson update follows the best-reward rule")
{
    Selector sel(SelectorKind::Thompson, 4, 1);
    sel.update(0, 1);
    CHECK(sel.ts_arm(0).alpha == 2);
    CHECK(sel.ts_arm(0).beta == 1);
    CHECK(sel.ts_arm(0).best_reward == 1.0);
    sel.update(0, 2);
    CHECK(sel.ts_arm(0).alpha == 2);
    CHECK(sel.ts_arm(0).beta == 2);
    CHECK(sel.ts_arm(0).last_reward == 0.5);
    sel.update(1, 3);
    CHECK(sel.ts_arm(1).alpha == 2);
    CHECK(sel.ts_arm(1).best_reward == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("random arm is seeded")
{
    Selector a(SelectorKind::RandomArm, 4, 42), b(SelectorKind::RandomArm, 4, 42);
    std::array<int, 4> hits{};
    for (int i = 0; i < 400; ++i) {
        auto x = a.choose_arm();
        CHECK(x == b.choose_arm());
        ++hits[x];
    }
    for (int h : hits)
        CHECK(h > 50);
}

TEST_CASE("beta sampler means")
{
    Rng rng(123);
    double s11 = 0.0, s26 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        s11 += sample_beta(1, 1, rng);
        s26 += sample_beta(2, 6, rng);
    }
    CHECK(std::abs(s11 / n - 0.5) <= 0.01);
    CHECK(std::abs(s26 / n - 0.25) <= 0.01);
}

TEST_CASE("window of three evicts the oldest entry")
{
    Selector sel(SelectorKind::Ucb1, 2, 0, 3);
    sel.update(0, 1);
    sel.update(0, 2);
    sel.update(1, 4);
    sel.update(1, 4);
    auto w = sel.window_state();
    CHECK(w.total == 3);
    CHECK(w.counts == std::vector<std::uint64_t>{1, 2});
    CHECK(sel.updates(0) == 2);
    CHECK_THROWS_AS(Selector(SelectorKind::Ucb1, 2, 0).window_state(), ContractViolation);
}


TEST_CASE("property: windowed aggregates equal recomputation")
{
    std::mt19937_64 rng(99);
    for (int round = 0; round < 500; ++round) {
        auto kind = round % 2 ? SelectorKind::Ucb1 : SelectorKind::Thompson;
        const std::size_t arms = 1 + rng() % 4, k = 1 + rng() % 8;
        Selector sel(kind, arms, rng(), k);
        std::vector<oracle::Update> history;
        const int steps = 1 + static_cast<int>(rng() % 40);
        for (int t = 0; t < steps; ++t) {
            oracle::Update u{rng() % arms, 1 + rng() % 6};
            history.push_back(u);
            sel.update(u.arm, u.children);
            auto got = sel.window_state();
            auto want = oracle::recompute(kind, arms, k, history);
            REQUIRE(got.counts == want.counts);
            REQUIRE(got.total == want.total);
            if (kind == SelectorKind::Ucb1) {
                for (std::size_t a = 0; a < arms; ++a)
                    REQUIRE(std::abs(got.mean_rewards[a] - want.mean_rewards[a]) <= 1e-12);
            }
            else {
                for (std::size_t a = 0; a < arms; ++a) {
                    REQUIRE(got.ts_arms[a].alpha == want.ts_arms[a].alpha);
                    REQUIRE(got.ts_arms[a].beta == want.ts_arms[a].beta);
                    REQUIRE(got.ts_arms[a].best_reward == want.ts_arms[a].best_reward);
                }
            }
        }
    }
}

TEST_CASE("property: a window no smaller than the run matches the plain selector")
{
    std::mt19937_64 rng(17);
    for (int round = 0; round < 200; ++round) {
        auto kind = round % 2 ? SelectorKind::Ucb1 : SelectorKind::Thompson;
        auto seed = rng();
        const int steps = 1 + static_cast<int>(rng() % 30);
        Selector plain(kind, 4, seed), windowed(kind, 4, seed, static_cast<std::size_t>(steps));
        for (int t = 0; t < steps; ++t) {
            auto a = plain.choose_arm();
            REQUIRE(windowed.choose_arm() == a);
            auto c = 1 + rng() % 5;
            plain.update(a, c);
            windowed.update(a, c);
        }
        for (std::size_t a = 0; a < 4; ++a) {
            if (kind == SelectorKind::Ucb1) {
                REQUIRE(plain.ucb_arm(a).count == windowed.window_state().counts[a]);
                if (plain.ucb_arm(a).count > 0)
                    REQUIRE(plain.ucb_rho(a) == windowed.ucb_rho(a));
            }
            else
                REQUIRE(plain.ts_arm(a) == windowed.window_state().ts_arms[a]);
        }
    }
}

TEST_CASE("property: bookkeeping over random update sequences")
{
    std::mt19937_64 rng(23);
    for (int round = 0; round < 200; ++round) {
        auto kind = round % 2 ? SelectorKind::Ucb1 : SelectorKind::Thompson;
        Selector sel(kind, 4, rng());
        std::uint64_t prev_cmax = 0;
        const int steps = static_cast<int>(rng() % 50);
        for (int t = 0; t < steps; ++t) {
            auto a = sel.choose_arm();
            REQUIRE(a < 4);
            sel.update(a, 1 + rng() % 9);
            REQUIRE(sel.c_max() >= prev_cmax);
            prev_cmax = sel.c_max();
        }
        std::uint64_t total = 0;
        for (std::size_t a = 0; a < 4; ++a) {
            total += sel.updates(a);
            if (kind == SelectorKind::Thompson)
                REQUIRE(sel.ts_arm(a).alpha + sel.ts_arm(a).beta - 2 == sel.updates(a));
            else
                REQUIRE(sel.ucb_arm(a).count == sel.updates(a));
        }
        REQUIRE(total == sel.total_updates());
        if (kind == SelectorKind::Ucb1)
            REQUIRE(sel.ucb_total() == total);
    }
}
