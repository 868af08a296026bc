#pragma once

#include <banditcsp/model.hpp>
#include <banditcsp/propagation.hpp>
#include <banditcsp/state.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace banditcsp {

enum class HeuristicKind
{
    DdegDom,
    WdegDom,
    Impact,
    Activity
};

inline constexpr std::size_t num_heuristics = 4;
inline constexpr std::array<HeuristicKind, num_heuristics> all_heuristics{
    HeuristicKind::DdegDom, HeuristicKind::WdegDom, HeuristicKind::Impact, HeuristicKind::Activity};

auto to_string(HeuristicKind kind) -> std::string_view;

inline constexpr double default_activity_decay = 0.999;

/// Score tables for all four heuristics. Every table is updated on every
/// search path, whichever heuristic is currently picking variables.
class HeuristicScores
{
public:
    explicit HeuristicScores(const Instance & inst, double decay = default_activity_decay);

    auto weight(int constraint) const -> std::uint64_t { return _weights[static_cast<std::size_t>(constraint)]; }
    auto activity(VariableId x) const -> double { return _activity[x.index]; }
    auto decay() const -> double { return _decay; }
    /// Mean recorded impact of the i-th initial value of x; 1 when nothing was recorded.
    auto impact(VariableId x, std::size_t value_index) const -> double;
    auto impact_samples(VariableId x, std::size_t value_index) const -> std::uint64_t;

    auto on_wipeout(int constraint) -> void;

    /// Adds the sample 1 - P_after / P_before, given both as logs (log_after = -inf on wipeout).
    auto record_impact(VariableId x, int v, double log_before, double log_after) -> void;
    auto record_impact_sample(VariableId x, std::size_t value_index, double impact) -> void;

    /// Filtered variables gain one unit of activity; other unassigned
    /// variables with more than one value decay.
    auto on_propagation_event(const SolverState & s, std::span<const DomainChange> changed) -> void;

    /// Impact from the root probe ratios, activity from the probe activation counts.
    auto initialize_from_probe(const ProbeReport & report) -> void;

    /// Test hooks.
    auto set_weight(int constraint, std::uint64_t w) -> void { _weights[static_cast<std::size_t>(constraint)] = w; }
    auto set_activity(VariableId x, double a) -> void { _activity[x.index] = a; }

private:
    const Instance * _inst;
    double _decay;
    std::vector<std::uint64_t> _weights;
    std::vector<std::vector<double>> _impact_sum;
    std::vector<std::vector<std::uint64_t>> _impact_count;
    std::vector<double> _activity;
    std::vector<char> _changed_scratch;
};

/// Number of constraints on x with at least two unassigned variables.
auto dynamic_degree(VariableId x, const SolverState & s) -> std::size_t;
auto weighted_degree(VariableId x, const SolverState & s, const HeuristicScores & hs) -> double;

auto score(HeuristicKind kind, VariableId x, const SolverState & s, const HeuristicScores & hs) -> double;

/// Unassigned variable with the highest score; ties go to the smallest index.
auto select_variable(HeuristicKind kind, const SolverState & s, const HeuristicScores & hs) -> VariableId;

/// Lexicographic value choice: smallest live value.
auto select_value(const SolverState & s, VariableId x) -> int;

} // namespace banditcsp
