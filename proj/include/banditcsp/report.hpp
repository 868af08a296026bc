#pragma once

#include <banditcsp/suite.hpp>

#include <array>
#include <string>
#include <vector>

namespace banditcsp {

enum class Metric
{
    Nodes,
    Time
};

auto to_string(Metric m) -> std::string;
auto parse_metric(const std::string & s) -> Metric;

struct StrategyAggregate
{
    std::string strategy;
    std::size_t solved = 0;     // SAT or UNSAT, over all instances
    std::vector<double> ratios; // one per basis instance, in basis order
    double mean = 0.0;
    double stddev = 0.0; // population
    double geomean = 0.0;
    double max = 0.0;
};

/// Basis: instances solved by every strategy whose VBS value is positive.
struct AggregateReport
{
    Metric metric = Metric::Nodes;
    std::vector<std::string> basis;
    std::vector<StrategyAggregate> strategies; // order of first appearance
    bool empty = true;                         // no basis instance
};

auto metric_value(const RunRecord & r, Metric m) -> double;
auto is_solved(const RunRecord & r) -> bool;

auto vbs_ratios(const std::vector<RunRecord> & records, Metric metric) -> AggregateReport;

struct FrequencyRow
{
    std::string family;
    std::string strategy;
    std::size_t runs = 0;
    std::array<double, num_heuristics> mean_freq{};
};

/// Mean per-arm frequency per (family, strategy). Runs with no search nodes
/// and ERROR runs carry no frequencies and are skipped.
auto arm_frequency_report(const std::vector<RunRecord> & records) -> std::vector<FrequencyRow>;

auto format_vbs_report(const AggregateReport & report) -> std::string;
auto format_frequency_report(const std::vector<FrequencyRow> & rows) -> std::string;

} // namespace banditcsp
