// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <banditcsp/generators.hpp>
#include <banditcsp/report.hpp>
#include <banditcsp/search.hpp>
#include <banditcsp/suite.hpp>

#include "support/oracles.hpp"
#include "support/strategies.hpp"
#include "support/window_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace banditcsp;

namespace {

constexpr int correctness_instances = 200;
constexpr double correctness_budget_s = 60.0;
constexpr int gac_instances = 100;
constexpr std::size_t gac_min_fixpoints = 10'000;
constexpr double reward_tolerance = 1e-12;
constexpr int window_sequences = 10'000;
constexpr int beta_draws = 100'000;
constexpr double beta_tolerance = 0.01;
constexpr double robustness_budget_s = 600.0;
constexpr double report_tolerance = 1e-9;

using Clock = std::chrono::steady_clock;

auto seconds_since(Clock::time_point t) -> double
{
    return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict
{
    bool pass = true;
    std::string detail;

    auto require(bool ok, const std::string & why) -> void
    {
        if (! ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

auto count_all(const Instance & inst, const StrategySpec & st, std::function<void(const SolverState &)> hook = {})
    -> SolveResult
{
    SearchConfig cfg;
    cfg.mode = SearchMode::CountAll;
    cfg.strategy = st;
    cfg.on_fixpoint = std::move(hook);
    return solve(inst, cfg);
}

/// Random table instance with n <= 6, d <= 4, r <= 3.
auto small_random(std::mt19937_64 & rng) -> Instance
{
    auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };
    RandomSpec spec;
    spec.variables = pick(2, 6);
    spec.domain_size = pick(1, 4);
    spec.arity = pick(1, std::min<std::size_t>(3, spec.variables));
    std::size_t scopes = 1;
    for (std::size_t i = 0; i < spec.arity; ++i)
        scopes = scopes * (spec.variables - i) / (i + 1);
    spec.constraints = pick(0, std::min<std::size_t>(scopes, 8));
    spec.tightness = static_cast<double>(rng() % 101) / 100.0;
    spec.seed = rng();
    return gen_random_csp(spec);
}

auto correctness() -> Verdict
{
    Verdict v;
    auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::size_t runs = 0;
    for (int i = 0; i < correctness_instances; ++i) {
        auto inst = small_random(rng);
        auto want = oracle::count_solutions(inst);
        for (const auto & st : oracle::every_strategy(static_cast<std::uint64_t>(i))) {
            auto got = count_all(inst, st).stats.solutions;
            ++runs;
            v.require(got == want,
                inst.name + " under " + st.name() + ": " + std::to_string(got) + " != " + std::to_string(want));
        }
    }
    double t = seconds_since(start);
    v.require(t < correctness_budget_s, "took " + std::to_string(t) + " s");
    if (v.pass)
        v.detail = std::to_string(runs) + " runs, " + std::to_string(t) + " s";
    return v;
}

auto gac_property() -> Verdict
{
    Verdict v;
    std::mt19937_64 rng(77);
    std::size_t fixpoints = 0;
    for (int i = 0; i < gac_instances; ++i) {
        RandomSpec spec{7 + rng() % 3, 4, 2 + rng() % 2, 0, 0.3 + 0.2 * static_cast<double>(rng() % 3), rng()};
        spec.constraints = spec.arity == 2 ? 12 : 9;
        auto inst = gen_random_csp(spec);
        auto st = i % 2 ? StrategySpec::ucb1() : StrategySpec::fixed(HeuristicKind::WdegDom);
        count_all(inst, st, [&](const SolverState & s) {
            ++fixpoints;
            auto bad = oracle::gac_violations(inst, s);
            v.require(bad.empty(), inst.name + ": " + (bad.empty() ? "" : bad.front()));
        });
    }
    v.require(fixpoints >= gac_min_fixpoints, "only " + std::to_string(fixpoints) + " fixpoints");
    if (v.pass)
        v.detail = std::to_string(fixpoints) + " fixpoints checked";
    return v;
}

auto bookkeeping() -> Verdict
{
    Verdict v;
    std::mt19937_64 rng(5);
    std::size_t solves = 0;
    for (int i = 0; i < 30; ++i) {
        auto inst = gen_random_csp(RandomSpec{12, 5, 3, 24, 0.45, rng()});
        for (auto st : {StrategySpec::ucb1(), StrategySpec::thompson(), StrategySpec::ucb1(50),
                 StrategySpec::thompson(50)}) {
            st.seed = rng();
            SearchConfig cfg;
            cfg.strategy = st;
            auto r = solve(inst, cfg);
            ++solves;
            const auto & sel = *r.selector;
            std::uint64_t sum = 0;
            for (std::size_t a = 0; a < sel.num_arms(); ++a) {
                sum += sel.updates(a);
                if (sel.kind() == SelectorKind::Thompson && ! sel.is_windowed())
                    v.require(sel.ts_arm(a).alpha + sel.ts_arm(a).beta - 2 == sel.updates(a),
                        inst.name + ": alpha + beta - 2 != updates");
                if (sel.kind() == SelectorKind::Ucb1 && ! sel.is_windowed())
                    v.require(sel.ucb_arm(a).count == sel.updates(a), inst.name + ": m_i != updates");
            }
            v.require(sum == sel.total_updates() && sum == r.stats.failed_frames,
                inst.name + " " + st.name() + ": sum of m_i != total updates");
        }
    }
    if (v.pass)
        v.detail = std::to_string(solves) + " solves";
    return v;
}

auto reward_identities() -> Verdict
{
    Verdict v;
    v.require(ts_reward(1) == 1.0, "ts_reward(1)");
    v.require(ts_reward(4) == 0.25, "ts_reward(4)");
    v.require(ucb_reward(7, 7) == 0.0, "ucb_reward(C_max, C_max)");
    v.require(ucb_reward(2, 8) == 0.75, "ucb_reward(2, 8)");
    double rho = ucb_index(0.0, 4, 1);
    v.require(std::abs(rho - std::sqrt(2.0 * std::log(4.0))) <= reward_tolerance,
        "rho(0, 4, 1) = " + std::to_string(rho));
    return v;
}

auto round_robin() -> Verdict
{
    Verdict v;
    Selector sel(SelectorKind::Ucb1, 4, 0);
    std::string got;
    for (std::size_t i = 0; i < 4; ++i) {
        auto a = sel.choose_arm();
        got += std::to_string(a);
        v.require(a == i, "pull order " + got);
    }
    if (v.pass)
        v.detail = "pulls " + got;
    return v;
}

auto window_equivalence() -> Verdict
{
    Verdict v;
    std::mt19937_64 rng(13);
    std::size_t traces = 0;
    for (int i = 0; i < 40; ++i) {
        auto inst = gen_random_csp(RandomSpec{10, 4, 3, 14, 0.45, rng()});
        for (auto plain : {StrategySpec::ucb1(), StrategySpec::thompson()}) {
            plain.seed = rng();
            SearchConfig cfg;
            cfg.strategy = plain;
            cfg.record_trace = true;
            auto base = solve(inst, cfg);
            auto windowed = cfg;
            windowed.strategy.window = std::max<std::uint64_t>(base.stats.failed_frames, 1);
            auto w = solve(inst, windowed);
            ++traces;
            v.require(w.trace == base.trace && w.stats.same_search(base.stats),
                inst.name + " " + windowed.strategy.name() + ": trace differs");
        }
    }

    for (int seq = 0; seq < window_sequences; ++seq) {
        auto kind = seq % 2 ? SelectorKind::Ucb1 : SelectorKind::Thompson;
        const std::size_t arms = 1 + rng() % 4, k = 1 + rng() % 12;
        Selector sel(kind, arms, rng(), k);
        std::vector<oracle::Update> history;
        const int steps = 1 + static_cast<int>(rng() % 40);
        for (int t = 0; t < steps; ++t) {
            oracle::Update u{rng() % arms, 1 + rng() % 8};
            history.push_back(u);
            sel.update(u.arm, u.children);
        }
        auto got = sel.window_state();
        auto want = oracle::recompute(kind, arms, k, history);
        bool same = got.counts == want.counts && got.total == want.total;
        for (std::size_t a = 0; a < arms && same; ++a) {
            if (kind == SelectorKind::Ucb1)
                same = got.mean_rewards[a] == want.mean_rewards[a];
            else
                same = got.ts_arms[a].alpha == want.ts_arms[a].alpha && got.ts_arms[a].beta == want.ts_arms[a].beta
                    && got.ts_arms[a].best_reward == want.ts_arms[a].best_reward;
        }
        v.require(same, "window aggregates differ on sequence " + std::to_string(seq));
    }
    if (v.pass)
        v.detail = std::to_string(traces) + " traces, " + std::to_string(window_sequences) + " sequences";
    return v;
}

auto beta_sampler() -> Verdict
{
    Verdict v;
    Rng rng(8);
    std::ostringstream detail;
    for (auto [a, b, mean] : {std::tuple{1.0, 1.0, 0.5}, std::tuple{2.0, 6.0, 0.25}}) {
        double sum = 0.0;
        for (int i = 0; i < beta_draws; ++i)
            sum += sample_beta(a, b, rng);
        double got = sum / beta_draws;
        detail << "Beta(" << a << "," << b << ") mean " << got << " ";
        v.require(std::abs(got - mean) <= beta_tolerance, detail.str());
    }
    if (v.pass)
        v.detail = detail.str();
    return v;
}

auto determinism() -> Verdict
{
    Verdict v;
    std::vector<Instance> insts{gen_random_csp(RandomSpec{16, 5, 3, 40, 0.4, 1}), gen_all_interval(8),
        gen_golomb(5, 11), gen_langford(2, 7)};
    for (const auto & inst : insts)
        for (const auto & st : oracle::every_strategy(99)) {
            SearchConfig cfg;
            cfg.strategy = st;
            cfg.record_trace = true;
            auto a = solve(inst, cfg), b = solve(inst, cfg);
            v.require(a.stats.same_search(b.stats) && a.trace == b.trace, inst.name + " " + st.name());
        }
    return v;
}

auto robustness() -> Verdict
{
    Verdict v;
    auto start = Clock::now();
    std::vector<StrategySpec> strategies;
    for (auto h : all_heuristics)
        strategies.push_back(StrategySpec::fixed(h));
    strategies.push_back(StrategySpec::ucb1());
    auto records = run_suite(default_suite(), strategies, SuiteConfig{});
    auto rep = vbs_ratios(records, Metric::Nodes);
    double t = seconds_since(start);

    const StrategyAggregate * ucb = nullptr;
    double worst_max = 0.0;
    std::vector<double> fixed_std;
    for (const auto & a : rep.strategies) {
        if (a.strategy == "ucb1")
            ucb = &a;
        else {
            worst_max = std::max(worst_max, a.max);
            fixed_std.push_back(a.stddev);
        }
    }
    v.require(! rep.empty && ucb, "empty basis");
    if (! v.pass)
        return v;
    std::size_t beaten = 0;
    for (double s : fixed_std)
        beaten += ucb->stddev <= s;

    std::ostringstream detail;
    detail << "basis " << rep.basis.size() << ", ucb1 max " << ucb->max << " vs worst heuristic max " << worst_max
           << ", ucb1 stddev " << ucb->stddev << " <= " << beaten << "/4 heuristics, " << t << " s";
    v.detail = detail.str();
    v.pass = ucb->max <= worst_max && beaten >= 3 && t < robustness_budget_s;
    return v;
}

auto structured() -> Verdict
{
    Verdict v;
    auto outcome = [](const Instance & inst) { return solve(inst, SearchConfig{}).stats.outcome; };
    v.require(outcome(gen_golomb(4, 6)) == Outcome::Sat, "golomb(4, 6) not SAT");
    v.require(outcome(gen_golomb(4, 5)) == Outcome::Unsat, "golomb(4, 5) not UNSAT");
    v.require(outcome(gen_langford(2, 3)) == Outcome::Sat, "langford(2, 3) not SAT");
    v.require(outcome(gen_langford(2, 2)) == Outcome::Unsat, "langford(2, 2) not UNSAT");
    // brute-force oracle value, frozen
    constexpr std::uint64_t all_interval_4 = 4;
    v.require(oracle::all_interval_count(4) == all_interval_4, "oracle drifted");
    auto n = count_all(gen_all_interval(4), StrategySpec::ucb1()).stats.solutions;
    v.require(n == all_interval_4, "all-interval(4) count " + std::to_string(n));
    return v;
}

auto report_math() -> Verdict
{
    Verdict v;
    auto rec = [](std::string inst, std::string strat, std::uint64_t nodes) {
        RunRecord r;
        r.instance = std::move(inst);
        r.strategy = std::move(strat);
        r.outcome = Outcome::Sat;
        r.nodes = nodes;
        return r;
    };
    // p: 10, 30, 8; q: 20, 10, 8; ratios p = {1, 3, 1}, q = {2, 1, 1}
    auto rep = vbs_ratios({rec("i1", "p", 10), rec("i1", "q", 20), rec("i2", "p", 30), rec("i2", "q", 10),
                              rec("i3", "p", 8), rec("i3", "q", 8)},
        Metric::Nodes);
    struct Want
    {
        double mean, stddev, geomean, max;
    };
    const Want want[] = {{5.0 / 3.0, std::sqrt(8.0 / 9.0), std::cbrt(3.0), 3.0},
        {4.0 / 3.0, std::sqrt(2.0 / 9.0), std::cbrt(2.0), 2.0}};
    v.require(rep.strategies.size() == 2, "strategy count");
    for (std::size_t i = 0; i < 2 && v.pass; ++i) {
        const auto & a = rep.strategies[i];
        v.require(std::abs(a.mean - want[i].mean) <= report_tolerance, a.strategy + " mean");
        v.require(std::abs(a.stddev - want[i].stddev) <= report_tolerance, a.strategy + " stddev");
        v.require(std::abs(a.geomean - want[i].geomean) <= report_tolerance, a.strategy + " geomean");
        v.require(std::abs(a.max - want[i].max) <= report_tolerance, a.strategy + " max");
    }
    return v;
}

} // namespace

auto main() -> int
{
    struct Criterion
    {
        const char * name;
        Verdict (*run)();
    };
    const Criterion criteria[] = {
        {"correctness-oracle", correctness},
        {"gac-property", gac_property},
        {"bandit-bookkeeping", bookkeeping},
        {"reward-identities", reward_identities},
        {"round-robin-bootstrap", round_robin},
        {"window-equivalence", window_equivalence},
        {"beta-sampler", beta_sampler},
        {"determinism", determinism},
        {"robustness-trend", robustness},
        {"structured-sanity", structured},
        {"report-math", report_math},
    };

    int failed = 0;
    for (const auto & c : criteria) {
        Verdict v;
        try {
            v = c.run();
        }
        catch (const std::exception & e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failed += ! v.pass;
        std::printf("%s %s%s%s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.empty() ? "" : ": ",
            v.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
