#pragma once

#include <banditcsp/search.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace banditcsp {

struct RunRecord
{
    std::string instance;
    std::string strategy;
    Outcome outcome = Outcome::Error;
    std::uint64_t nodes = 0;
    std::uint64_t backtracks = 0;
    double time_ms = 0.0;
    std::uint64_t seed = 0;
    std::array<double, num_heuristics> freq{}; // pulls of arm i / nodes; all zero when nodes = 0

    auto operator==(const RunRecord &) const -> bool = default;
    /// Equality on everything except time_ms.
    auto same_run(const RunRecord & o) const -> bool;
};

struct SuiteConfig
{
    SearchMode mode = SearchMode::FirstSolution;
    std::optional<std::uint64_t> node_limit = 1'000'000;
    std::optional<double> time_limit_seconds;
    std::uint64_t suite_seed = 0;
};

/// Seed of the run on (instance i, strategy j): a fixed function of the three values.
auto run_seed(std::uint64_t suite_seed, std::size_t instance_index, std::size_t strategy_index) -> std::uint64_t;

/// One solve turned into a record. Exceptions become ERROR records.
auto run_one(const Instance & inst, const StrategySpec & strategy, const SuiteConfig & cfg, std::uint64_t seed)
    -> RunRecord;

/// Every (instance, strategy) pair, instance-major. Runs are spread over
/// OpenMP threads; records come back in input order.
auto run_suite(const std::vector<Instance> & instances, const std::vector<StrategySpec> & strategies,
    const SuiteConfig & cfg) -> std::vector<RunRecord>;

/// Single-threaded reference for run_suite; same records modulo time_ms.
auto run_suite_serial(const std::vector<Instance> & instances, const std::vector<StrategySpec> & strategies,
    const SuiteConfig & cfg) -> std::vector<RunRecord>;

inline constexpr const char * csv_header =
    "instance,strategy,outcome,nodes,backtracks,time_ms,seed,freq_ddeg,freq_wdeg,freq_impact,freq_activity";

auto write_csv(std::ostream & out, const std::vector<RunRecord> & records) -> void;
/// Throws ParseError on a malformed header or row.
auto read_csv(std::istream & in) -> std::vector<RunRecord>;

/// Manifest lines, one instance each:
///
///   random <n> <d> <r> <e> <t> <seed>
///   all-interval <n>
///   golomb <m> <L>
///   langford <k> <n>
///   file <path>
///   <path>
///
/// Relative paths resolve against base_dir. '#' starts a comment.
auto read_manifest(std::istream & in, const std::filesystem::path & base_dir = {}) -> std::vector<Instance>;
auto read_manifest(const std::filesystem::path & path) -> std::vector<Instance>;

/// Manifest text of the built-in desk-scale suite.
auto default_suite_manifest() -> std::string;
auto default_suite() -> std::vector<Instance>;

/// Instance name up to the first '-'.
auto family_of(const std::string & instance_name) -> std::string;

} // namespace banditcsp
