#include <banditcsp/report.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace banditcsp {

auto to_string(Metric m) -> std::string
{
    return m == Metric::Nodes ? "nodes" : "time";
}

auto parse_metric(const std::string & s) -> Metric
{
    if (s == "nodes")
        return Metric::Nodes;
    if (s == "time")
        return Metric::Time;
    throw std::invalid_argument("unknown metric '" + s + "'");
}

auto metric_value(const RunRecord & r, Metric m) -> double
{
    return m == Metric::Nodes ? static_cast<double>(r.nodes) : r.time_ms;
}

auto is_solved(const RunRecord & r) -> bool
{
    return r.outcome == Outcome::Sat || r.outcome == Outcome::Unsat;
}

namespace {
    template <typename T>
    auto index_of(std::vector<T> & order, const T & key) -> std::size_t
    {
        auto it = std::find(order.begin(), order.end(), key);
        if (it != order.end())
            return static_cast<std::size_t>(it - order.begin());
        order.push_back(key);
        return order.size() - 1;
    }
} // namespace

auto vbs_ratios(const std::vector<RunRecord> & records, Metric metric) -> AggregateReport
{
    std::vector<std::string> instances, strategies;
    for (const auto & r : records) {
        index_of(instances, r.instance);
        index_of(strategies, r.strategy);
    }

    // table[i][s]: the record of strategy s on instance i; a repeated pair keeps the first
    std::vector<std::vector<const RunRecord *>> table(instances.size(), std::vector<const RunRecord *>(strategies.size()));
    for (const auto & r : records) {
        auto & slot = table[index_of(instances, r.instance)][index_of(strategies, r.strategy)];
        if (! slot)
            slot = &r;
    }

    AggregateReport rep;
    rep.metric = metric;
    rep.strategies.resize(strategies.size());
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        rep.strategies[s].strategy = strategies[s];
        for (std::size_t i = 0; i < instances.size(); ++i)
            if (table[i][s] && is_solved(*table[i][s]))
                ++rep.strategies[s].solved;
    }

    for (std::size_t i = 0; i < instances.size(); ++i) {
        bool all = ! strategies.empty();
        double vbs = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < strategies.size() && all; ++s) {
            if (! table[i][s] || ! is_solved(*table[i][s]))
                all = false;
            else
                vbs = std::min(vbs, metric_value(*table[i][s], metric));
        }
        if (! all || ! (vbs > 0.0))
            continue;
        rep.basis.push_back(instances[i]);
        for (std::size_t s = 0; s < strategies.size(); ++s)
            rep.strategies[s].ratios.push_back(metric_value(*table[i][s], metric) / vbs);
    }

    rep.empty = rep.basis.empty();
    if (rep.empty)
        return rep;

    for (auto & agg : rep.strategies) {
        const auto n = static_cast<double>(agg.ratios.size());
        double sum = 0.0, log_sum = 0.0;
        agg.max = 0.0;
        for (double r : agg.ratios) {
            sum += r;
            log_sum += std::log(r);
            agg.max = std::max(agg.max, r);
        }
        agg.mean = sum / n;
        double sq = 0.0;
        for (double r : agg.ratios)
            sq += (r - agg.mean) * (r - agg.mean);
        agg.stddev = std::sqrt(sq / n);
        agg.geomean = std::exp(log_sum / n);
    }
    return rep;
}

auto arm_frequency_report(const std::vector<RunRecord> & records) -> std::vector<FrequencyRow>
{
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<FrequencyRow> rows;
    for (const auto & r : records) {
        if (r.nodes == 0 || r.outcome == Outcome::Error)
            continue;
        auto k = index_of(keys, std::pair{family_of(r.instance), r.strategy});
        if (k == rows.size())
            rows.push_back(FrequencyRow{keys[k].first, keys[k].second, 0, {}});
        auto & row = rows[k];
        ++row.runs;
        for (std::size_t a = 0; a < num_heuristics; ++a)
            row.mean_freq[a] += r.freq[a];
    }
    for (auto & row : rows)
        for (auto & f : row.mean_freq)
            f /= static_cast<double>(row.runs);
    return rows;
}

auto format_vbs_report(const AggregateReport & report) -> std::string
{
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "VBS ratios (%s), basis %zu instances\n", to_string(report.metric).c_str(),
        report.basis.size());
    out += buf;
    if (report.empty) {
        out += "no instance solved by every strategy\n";
        return out;
    }
    std::snprintf(buf, sizeof buf, "%-16s %7s %12s %12s %12s %12s\n", "strategy", "solved", "mean", "stddev", "geomean",
        "max");
    out += buf;
    for (const auto & s : report.strategies) {
        std::snprintf(buf, sizeof buf, "%-16s %7zu %12.4f %12.4f %12.4f %12.4f\n", s.strategy.c_str(), s.solved, s.mean,
            s.stddev, s.geomean, s.max);
        out += buf;
    }
    return out;
}

auto format_frequency_report(const std::vector<FrequencyRow> & rows) -> std::string
{
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-14s %-16s %5s", "family", "strategy", "runs");
    out += buf;
    for (auto h : all_heuristics) {
        std::snprintf(buf, sizeof buf, " %9s", std::string(to_string(h)).c_str());
        out += buf;
    }
    out += "\n";
    for (const auto & row : rows) {
        std::snprintf(buf, sizeof buf, "%-14s %-16s %5zu", row.family.c_str(), row.strategy.c_str(), row.runs);
        out += buf;
        for (double f : row.mean_freq) {
            std::snprintf(buf, sizeof buf, " %9.4f", f);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace banditcsp
