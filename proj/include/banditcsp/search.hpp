#pragma once

#include <banditcsp/bandit.hpp>
#include <banditcsp/heuristics.hpp>
#include <banditcsp/model.hpp>
#include <banditcsp/propagation.hpp>
#include <banditcsp/state.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace banditcsp {

/// How variables are picked: one fixed heuristic, a bandit over the four
/// heuristics (arm i is all_heuristics[i]), or a uniformly random arm.
struct StrategySpec
{
    enum class Kind
    {
        Fixed,
        Bandit,
        RandomArm
    };

    Kind kind = Kind::Fixed;
    HeuristicKind heuristic = HeuristicKind::DdegDom;
    SelectorKind selector = SelectorKind::Ucb1;
    std::optional<std::size_t> window;
    std::uint64_t seed = 0;

    static auto fixed(HeuristicKind h) -> StrategySpec;
    static auto ucb1(std::optional<std::size_t> window = std::nullopt) -> StrategySpec;
    static auto thompson(std::optional<std::size_t> window = std::nullopt) -> StrategySpec;
    static auto random_arm() -> StrategySpec;

    /// "ddeg-dom", "wdeg-dom", "impact", "activity", "ucb1", "ucb1-K", "ts", "ts-K", "random-arm".
    static auto parse(const std::string & name) -> StrategySpec;
    auto name() const -> std::string;
    auto is_stochastic() const -> bool;

    auto operator==(const StrategySpec &) const -> bool = default;
};

enum class SearchMode
{
    FirstSolution,
    CountAll
};

enum class Outcome
{
    Sat,
    Unsat,
    Limit,
    Error
};

auto to_string(Outcome o) -> std::string;
auto parse_outcome(const std::string & s) -> Outcome;

struct SearchConfig
{
    SearchMode mode = SearchMode::FirstSolution;
    std::optional<std::uint64_t> node_limit;
    std::optional<double> time_limit_seconds;
    StrategySpec strategy;
    bool keep_all_solutions = false; // count-all: store every solution, not just the first
    bool record_trace = false;
    /// Called after every consistent propagation during search, with the fixpoint state.
    std::function<void(const SolverState &)> on_fixpoint;
};

/// One variable-selection point. The frame owns the chain of right branches
/// on its variable; C counts the left branches taken from it.
struct NodeFrame
{
    std::size_t arm = 0;
    VariableId var{};
    std::uint64_t children = 0;
    LevelToken base{};
    LevelToken child{};
    int value = 0;
    std::vector<int> tried_values;
    bool continuation = false; // the variable was fixed by a right branch; the frame ends with its child
    bool failed = false;
};

/// Effective number of children of a failed frame (at least 1).
auto effective_children(const NodeFrame & frame) -> std::uint64_t;

/// Feeds the reward of a failed frame to its bound arm; no-op when sel is null.
auto run_reward_cycle(Selector * sel, const NodeFrame & frame) -> void;

struct TraceEvent
{
    enum class Kind
    {
        Pull,
        Update
    };

    Kind kind;
    std::size_t arm;
    std::uint64_t children = 0;

    auto operator==(const TraceEvent &) const -> bool = default;
};

struct SearchStats
{
    Outcome outcome = Outcome::Unsat;
    std::uint64_t nodes = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t solutions = 0;
    std::uint64_t failed_frames = 0;
    std::uint64_t propagations = 0;
    std::array<std::uint64_t, num_heuristics> pulls{};
    std::array<std::uint64_t, num_heuristics> updates{};
    std::size_t root_pruned = 0;
    double wall_ms = 0.0;

    /// Equality on everything except wall time.
    auto same_search(const SearchStats & o) const -> bool;
};

struct SolveResult
{
    SearchStats stats;
    std::vector<Assignment> solutions;
    std::optional<Selector> selector;
    std::vector<TraceEvent> trace;
};

/// Root propagation and singleton probing, then depth-first 2-way branching.
/// Throws StructuralError when validate_instance reports errors.
auto solve(const Instance & inst, const SearchConfig & cfg) -> SolveResult;

} // namespace banditcsp
