#include <banditcsp/generators.hpp>
#include <banditcsp/instance_io.hpp>
#include <banditcsp/report.hpp>
#include <banditcsp/search.hpp>
#include <banditcsp/suite.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace banditcsp;

namespace {
    auto split_list(const std::string & s) -> std::vector<std::string>
    {
        std::vector<std::string> out;
        std::stringstream ss(s);
        for (std::string item; std::getline(ss, item, ',');)
            if (! item.empty())
                out.push_back(item);
        return out;
    }

    struct SolveArgs
    {
        std::string file;
        std::string strategy = "ucb1";
        std::optional<std::size_t> window;
        std::uint64_t seed = 0;
        std::optional<std::uint64_t> node_limit;
        std::optional<double> time_limit;
        bool all_solutions = false;
        std::string emit = "text";
    };

    auto run_solve(const SolveArgs & a) -> int
    {
        auto inst = parse_instance(a.file);
        auto strategy = StrategySpec::parse(a.strategy);
        if (a.window) {
            if (strategy.kind != StrategySpec::Kind::Bandit)
                throw std::invalid_argument("--window applies to ucb1 and ts only");
            strategy.window = *a.window;
        }

        SuiteConfig cfg;
        cfg.mode = a.all_solutions ? SearchMode::CountAll : SearchMode::FirstSolution;
        cfg.node_limit = a.node_limit;
        cfg.time_limit_seconds = a.time_limit;

        if (a.emit == "csv") {
            write_csv(std::cout, {run_one(inst, strategy, cfg, a.seed)});
            return 0;
        }

        SearchConfig sc;
        sc.mode = cfg.mode;
        sc.node_limit = cfg.node_limit;
        sc.time_limit_seconds = cfg.time_limit_seconds;
        sc.strategy = strategy;
        sc.strategy.seed = a.seed;
        auto result = solve(inst, sc);
        const auto & st = result.stats;
        auto label = [](const char * name) -> std::ostream & { return std::cout << std::left << std::setw(12) << name; };
        label("instance") << inst.name << "\n";
        label("strategy") << strategy.name() << "\n";
        label("outcome") << to_string(st.outcome) << "\n";
        label("solutions") << st.solutions << "\n";
        label("nodes") << st.nodes << "\n";
        label("backtracks") << st.backtracks << "\n";
        label("root-pruned") << st.root_pruned << "\n";
        label("time-ms") << std::fixed << std::setprecision(3) << st.wall_ms << "\n";
        label("pulls");
        for (std::size_t i = 0; i < num_heuristics; ++i)
            std::cout << (i ? " " : "") << to_string(all_heuristics[i]) << '=' << st.pulls[i];
        std::cout << "\n";
        if (! result.solutions.empty()) {
            label("solution");
            const char * sep = "";
            for (int v : result.solutions.front().values()) {
                std::cout << sep << v;
                sep = " ";
            }
            std::cout << "\n";
        }
        return 0;
    }

    auto run_gen(const std::string & family, const std::vector<std::string> & params, const std::string & output)
        -> int
    {
        auto want = [&](std::size_t n, const char * usage) {
            if (params.size() != n)
                throw std::invalid_argument(std::string("usage: gen ") + usage);
        };
        auto num = [&](std::size_t i) { return static_cast<std::size_t>(std::stoull(params[i])); };

        Instance inst;
        if (family == "random") {
            want(6, "random <n> <d> <r> <e> <t> <seed>");
            RandomSpec spec;
            spec.variables = num(0);
            spec.domain_size = num(1);
            spec.arity = num(2);
            spec.constraints = num(3);
            spec.tightness = std::stod(params[4]);
            spec.seed = std::stoull(params[5]);
            inst = gen_random_csp(spec);
        }
        else if (family == "all-interval") {
            want(1, "all-interval <n>");
            inst = gen_all_interval(num(0));
        }
        else if (family == "golomb") {
            want(2, "golomb <marks> <length>");
            inst = gen_golomb(num(0), std::stoi(params[1]));
        }
        else if (family == "langford") {
            want(2, "langford <k> <n>");
            inst = gen_langford(num(0), num(1));
        }
        else
            throw std::invalid_argument("unknown family '" + family + "'");

        if (output.empty() || output == "-")
            write_instance(std::cout, inst);
        else
            write_instance(inst, output);
        return 0;
    }

    struct SuiteArgs
    {
        std::string manifest;
        std::string strategies = "ddeg-dom,wdeg-dom,impact,activity,ucb1";
        std::string metric = "nodes";
        std::string report = "vbs";
        std::string csv;
        std::uint64_t seed = 0;
        std::uint64_t node_limit = 1'000'000;
        std::optional<double> time_limit;
        bool serial = false;
    };

    auto run_suite_cmd(const SuiteArgs & a) -> int
    {
        auto instances = a.manifest == "default" ? default_suite() : read_manifest(a.manifest);
        std::vector<StrategySpec> strategies;
        for (const auto & name : split_list(a.strategies))
            strategies.push_back(StrategySpec::parse(name));
        if (strategies.empty())
            throw std::invalid_argument("no strategies given");
        auto metric = parse_metric(a.metric);

        SuiteConfig cfg;
        cfg.node_limit = a.node_limit;
        cfg.time_limit_seconds = a.time_limit;
        cfg.suite_seed = a.seed;
        auto records = a.serial ? run_suite_serial(instances, strategies, cfg) : run_suite(instances, strategies, cfg);

        if (! a.csv.empty()) {
            std::ofstream out(a.csv);
            if (! out)
                throw std::runtime_error("cannot write " + a.csv);
            write_csv(out, records);
        }
        if (a.report == "vbs")
            std::cout << format_vbs_report(vbs_ratios(records, metric));
        else
            std::cout << format_frequency_report(arm_frequency_report(records));
        return 0;
    }
} // namespace

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{"CSP solver with bandit-selected variable ordering"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto * solve_cmd = app.add_subcommand("solve", "solve one instance file");
    solve_cmd->add_option("file", solve_args.file, "instance file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--strategy", solve_args.strategy,
        "ddeg-dom, wdeg-dom, impact, activity, ucb1, ts, random-arm, ucb1-K or ts-K");
    solve_cmd->add_option("--window", solve_args.window, "sliding window size K for ucb1 and ts")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--seed", solve_args.seed, "random seed");
    solve_cmd->add_option("--node-limit", solve_args.node_limit, "maximum search nodes");
    solve_cmd->add_option("--time-limit", solve_args.time_limit, "time limit in seconds");
    solve_cmd->add_flag("--all-solutions", solve_args.all_solutions, "count every solution");
    solve_cmd->add_option("--emit", solve_args.emit, "output format")->check(CLI::IsMember({"csv", "text"}));

    std::string gen_family, gen_output;
    std::vector<std::string> gen_params;
    auto * gen_cmd = app.add_subcommand("gen", "generate an instance file");
    gen_cmd->add_option("family", gen_family, "random, all-interval, golomb or langford")
        ->required()
        ->check(CLI::IsMember({"random", "all-interval", "golomb", "langford"}));
    gen_cmd->add_option("params", gen_params, "family parameters");
    gen_cmd->add_option("-o,--output", gen_output, "output file, '-' for stdout");

    SuiteArgs suite_args;
    auto * suite_cmd = app.add_subcommand("suite", "run strategies over a manifest of instances");
    suite_cmd->add_option("manifest", suite_args.manifest, "manifest file, or 'default' for the built-in suite")
        ->required();
    suite_cmd->add_option("--strategies", suite_args.strategies, "comma-separated strategy names");
    suite_cmd->add_option("--metric", suite_args.metric, "ratio metric")->check(CLI::IsMember({"nodes", "time"}));
    suite_cmd->add_option("--report", suite_args.report, "report kind")->check(CLI::IsMember({"vbs", "freq"}));
    suite_cmd->add_option("--csv", suite_args.csv, "also write the run records as CSV");
    suite_cmd->add_option("--seed", suite_args.seed, "suite seed");
    suite_cmd->add_option("--node-limit", suite_args.node_limit, "maximum search nodes per run");
    suite_cmd->add_option("--time-limit", suite_args.time_limit, "time limit per run in seconds");
    suite_cmd->add_flag("--serial", suite_args.serial, "run on one thread");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed())
            return run_solve(solve_args);
        if (gen_cmd->parsed())
            return run_gen(gen_family, gen_params, gen_output);
        return run_suite_cmd(suite_args);
    }
    catch (const ParseError & e) {
        std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
