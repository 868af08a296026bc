#include <banditcsp/heuristics.hpp>

#include <algorithm>
#include <cmath>

namespace banditcsp {

auto to_string(HeuristicKind kind) -> std::string_view
{
    switch (kind) {
    case HeuristicKind::DdegDom: return "ddeg-dom";
    case HeuristicKind::WdegDom: return "wdeg-dom";
    case HeuristicKind::Impact: return "impact";
    case HeuristicKind::Activity: return "activity";
    }
    return "?";
}

HeuristicScores::HeuristicScores(const Instance & inst, double decay) :
    _inst(&inst),
    _decay(decay),
    _weights(inst.constraints.size(), 1),
    _activity(inst.num_variables(), 0.0),
    _changed_scratch(inst.num_variables(), 0)
{
    if (! (decay > 0.0 && decay < 1.0))
        throw ContractViolation("activity decay must lie in (0, 1)");
    _impact_sum.reserve(inst.num_variables());
    _impact_count.reserve(inst.num_variables());
    for (const auto & v : inst.variables) {
        _impact_sum.emplace_back(v.domain.size(), 0.0);
        _impact_count.emplace_back(v.domain.size(), 0);
    }
}

auto HeuristicScores::impact(VariableId x, std::size_t value_index) const -> double
{
    auto n = _impact_count[x.index][value_index];
    return n == 0 ? 1.0 : _impact_sum[x.index][value_index] / static_cast<double>(n);
}

auto HeuristicScores::impact_samples(VariableId x, std::size_t value_index) const -> std::uint64_t
{
    return _impact_count[x.index][value_index];
}

auto HeuristicScores::on_wipeout(int constraint) -> void
{
    ++_weights[static_cast<std::size_t>(constraint)];
}

auto HeuristicScores::record_impact_sample(VariableId x, std::size_t value_index, double impact) -> void
{
    _impact_sum[x.index][value_index] += std::clamp(impact, 0.0, 1.0);
    ++_impact_count[x.index][value_index];
}

auto HeuristicScores::record_impact(VariableId x, int v, double log_before, double log_after) -> void
{
    const auto & d = _inst->variables[x.index].domain;
    auto it = std::lower_bound(d.begin(), d.end(), v);
    if (it == d.end() || *it != v)
        throw ContractViolation("record_impact: value outside the initial domain");
    double sample = std::isinf(log_after) && log_after < 0 ? 1.0 : 1.0 - std::exp(log_after - log_before);
    record_impact_sample(x, static_cast<std::size_t>(it - d.begin()), sample);
}

auto HeuristicScores::on_propagation_event(const SolverState & s, std::span<const DomainChange> changed) -> void
{
    for (const auto & ch : changed) {
        _changed_scratch[ch.var.index] = 1;
        if (! s.is_instantiated(ch.var))
            _activity[ch.var.index] += 1.0;
    }
    for (std::uint32_t x = 0; x < s.num_variables(); ++x)
        if (! _changed_scratch[x] && ! s.is_assigned(VariableId{x}) && s.domain(VariableId{x}).size() > 1)
            _activity[x] *= _decay;
    for (const auto & ch : changed)
        _changed_scratch[ch.var.index] = 0;
}

auto HeuristicScores::initialize_from_probe(const ProbeReport & report) -> void
{
    for (std::uint32_t x = 0; x < report.reduction.size(); ++x)
        for (std::size_t i = 0; i < report.reduction[x].size(); ++i)
            if (report.reduction[x][i])
                record_impact_sample(VariableId{x}, i, *report.reduction[x][i]);
    for (std::size_t x = 0; x < report.activations.size(); ++x)
        _activity[x] = static_cast<double>(report.activations[x]);
}

namespace {
    template <typename F>
    auto for_each_active_constraint(VariableId x, const SolverState & s, F && f) -> void
    {
        const auto & inst = s.instance();
        for (int ci : s.constraints_of(x)) {
            const auto & c = inst.constraints[static_cast<std::size_t>(ci)];
            std::size_t free = 0;
            for (auto y : c.scope)
                if (! s.is_assigned(y) && ++free >= 2)
                    break;
            if (free >= 2)
                f(ci);
        }
    }
} // namespace

auto dynamic_degree(VariableId x, const SolverState & s) -> std::size_t
{
    std::size_t n = 0;
    for_each_active_constraint(x, s, [&](int) { ++n; });
    return n;
}

auto weighted_degree(VariableId x, const SolverState & s, const HeuristicScores & hs) -> double
{
    double w = 0.0;
    for_each_active_constraint(x, s, [&](int c) { w += static_cast<double>(hs.weight(c)); });
    return w;
}

auto score(HeuristicKind kind, VariableId x, const SolverState & s, const HeuristicScores & hs) -> double
{
    if (s.is_instantiated(x))
        throw ContractViolation("score of an instantiated variable");

    const auto & d = s.domain(x);
    const double size = static_cast<double>(d.size());
    switch (kind) {
    case HeuristicKind::DdegDom: return static_cast<double>(dynamic_degree(x, s)) / size;
    case HeuristicKind::WdegDom: return weighted_degree(x, s, hs) / size;
    case HeuristicKind::Impact: {
        double total = 0.0;
        d.for_each_live_index([&](std::size_t i) { total += hs.impact(x, i); });
        return total / size;
    }
    case HeuristicKind::Activity: return hs.activity(x) / size;
    }
    return 0.0;
}

auto select_variable(HeuristicKind kind, const SolverState & s, const HeuristicScores & hs) -> VariableId
{
    bool found = false;
    VariableId best{};
    double best_score = 0.0;
    for (std::uint32_t i = 0; i < s.num_variables(); ++i) {
        VariableId x{i};
        if (s.is_assigned(x))
            continue;
        double sc = score(kind, x, s, hs);
        if (! found || sc > best_score) {
            found = true;
            best = x;
            best_score = sc;
        }
    }
    if (! found)
        throw ContractViolation("select_variable: every variable is assigned");
    return best;
}

auto select_value(const SolverState & s, VariableId x) -> int
{
    if (s.domain(x).empty())
        throw ContractViolation("select_value: empty domain");
    return s.domain(x).min();
}

} // namespace banditcsp
