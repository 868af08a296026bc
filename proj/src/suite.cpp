#include <banditcsp/suite.hpp>

#include <banditcsp/generators.hpp>
#include <banditcsp/instance_io.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace banditcsp {

auto RunRecord::same_run(const RunRecord & o) const -> bool
{
    return instance == o.instance && strategy == o.strategy && outcome == o.outcome && nodes == o.nodes &&
        backtracks == o.backtracks && seed == o.seed && freq == o.freq;
}

auto run_seed(std::uint64_t suite_seed, std::size_t instance_index, std::size_t strategy_index) -> std::uint64_t
{
    auto h = mix64(suite_seed);
    h = mix64(h ^ static_cast<std::uint64_t>(instance_index));
    return mix64(h ^ (static_cast<std::uint64_t>(strategy_index) * 0xd6e8feb86659fd93ULL));
}

auto run_one(const Instance & inst, const StrategySpec & strategy, const SuiteConfig & cfg, std::uint64_t seed)
    -> RunRecord
{
    RunRecord rec;
    rec.instance = inst.name;
    rec.strategy = strategy.name();
    rec.seed = seed;
    try {
        SearchConfig sc;
        sc.mode = cfg.mode;
        sc.node_limit = cfg.node_limit;
        sc.time_limit_seconds = cfg.time_limit_seconds;
        sc.strategy = strategy;
        sc.strategy.seed = seed;
        auto result = solve(inst, sc);
        const auto & st = result.stats;
        rec.outcome = st.outcome;
        rec.nodes = st.nodes;
        rec.backtracks = st.backtracks;
        rec.time_ms = st.wall_ms;
        if (st.nodes > 0)
            for (std::size_t a = 0; a < num_heuristics; ++a)
                rec.freq[a] = static_cast<double>(st.pulls[a]) / static_cast<double>(st.nodes);
    }
    catch (const std::exception &) {
        rec.outcome = Outcome::Error;
    }
    return rec;
}

auto run_suite(const std::vector<Instance> & instances, const std::vector<StrategySpec> & strategies,
    const SuiteConfig & cfg) -> std::vector<RunRecord>
{
    const auto ns = strategies.size();
    const auto total = static_cast<std::int64_t>(instances.size() * ns);
    std::vector<RunRecord> out(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < total; ++k) {
        auto i = static_cast<std::size_t>(k) / ns, j = static_cast<std::size_t>(k) % ns;
        out[static_cast<std::size_t>(k)] = run_one(instances[i], strategies[j], cfg, run_seed(cfg.suite_seed, i, j));
    }
    return out;
}

auto run_suite_serial(const std::vector<Instance> & instances, const std::vector<StrategySpec> & strategies,
    const SuiteConfig & cfg) -> std::vector<RunRecord>
{
    std::vector<RunRecord> out;
    out.reserve(instances.size() * strategies.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t j = 0; j < strategies.size(); ++j)
            out.push_back(run_one(instances[i], strategies[j], cfg, run_seed(cfg.suite_seed, i, j)));
    return out;
}

namespace {
    auto csv_field(const std::string & s) -> std::string
    {
        if (s.find_first_of(",\"\n\r") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"')
                q += '"';
            q += c;
        }
        return q + "\"";
    }

    auto format_double(double v) -> std::string
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    auto split_csv(const std::string & line, std::size_t line_no) -> std::vector<std::string>
    {
        std::vector<std::string> fields(1);
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                }
                else if (c == '"')
                    quoted = false;
                else
                    fields.back() += c;
            }
            else if (c == '"')
                quoted = true;
            else if (c == ',')
                fields.emplace_back();
            else
                fields.back() += c;
        }
        if (quoted)
            throw ParseError(line_no, line.size(), "unterminated quoted field");
        return fields;
    }

    template <typename T>
    auto parse_number(const std::string & s, std::size_t line, std::size_t column) -> T
    {
        T v{};
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw ParseError(line, column, "bad number '" + s + "'");
        return v;
    }

    auto parse_double(const std::string & s, std::size_t line, std::size_t column) -> double
    {
        return parse_number<double>(s, line, column);
    }
} // namespace

auto write_csv(std::ostream & out, const std::vector<RunRecord> & records) -> void
{
    out << csv_header << "\n";
    for (const auto & r : records) {
        out << csv_field(r.instance) << ',' << csv_field(r.strategy) << ',' << to_string(r.outcome) << ',' << r.nodes
            << ',' << r.backtracks << ',' << format_double(r.time_ms) << ',' << r.seed;
        for (double f : r.freq)
            out << ',' << format_double(f);
        out << "\n";
    }
}

auto read_csv(std::istream & in) -> std::vector<RunRecord>
{
    std::string line;
    std::size_t line_no = 1;
    if (! std::getline(in, line))
        throw ParseError(1, 1, "missing CSV header");
    if (! line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != csv_header)
        throw ParseError(1, 1, "unexpected CSV header");

    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (! line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto f = split_csv(line, line_no);
        if (f.size() != 11)
            throw ParseError(line_no, 1, "expected 11 fields, got " + std::to_string(f.size()));
        RunRecord r;
        r.instance = f[0];
        r.strategy = f[1];
        try {
            r.outcome = parse_outcome(f[2]);
        }
        catch (const std::invalid_argument & e) {
            throw ParseError(line_no, 3, e.what());
        }
        r.nodes = parse_number<std::uint64_t>(f[3], line_no, 4);
        r.backtracks = parse_number<std::uint64_t>(f[4], line_no, 5);
        r.time_ms = parse_double(f[5], line_no, 6);
        r.seed = parse_number<std::uint64_t>(f[6], line_no, 7);
        for (std::size_t a = 0; a < num_heuristics; ++a)
            r.freq[a] = parse_double(f[7 + a], line_no, 8 + a);
        out.push_back(std::move(r));
    }
    return out;
}

auto read_manifest(std::istream & in, const std::filesystem::path & base_dir) -> std::vector<Instance>
{
    std::vector<Instance> out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;)
            toks.push_back(t);
        if (toks.empty())
            continue;

        auto arg = [&](std::size_t i) -> const std::string & {
            if (i >= toks.size())
                throw ParseError(line_no, 1, "too few arguments for '" + toks[0] + "'");
            return toks[i];
        };
        auto count = [&](std::size_t i) { return parse_number<std::size_t>(arg(i), line_no, i + 1); };
        auto expect_args = [&](std::size_t n) {
            if (toks.size() != n + 1)
                throw ParseError(line_no, 1, "'" + toks[0] + "' takes " + std::to_string(n) + " arguments");
        };
        auto resolve = [&](const std::string & p) {
            std::filesystem::path path(p);
            return path.is_relative() && ! base_dir.empty() ? base_dir / path : path;
        };

        try {
            const auto & kind = toks[0];
            if (kind == "random") {
                expect_args(6);
                RandomSpec spec;
                spec.variables = count(1);
                spec.domain_size = count(2);
                spec.arity = count(3);
                spec.constraints = count(4);
                spec.tightness = parse_double(arg(5), line_no, 6);
                spec.seed = parse_number<std::uint64_t>(arg(6), line_no, 7);
                out.push_back(gen_random_csp(spec));
            }
            else if (kind == "all-interval") {
                expect_args(1);
                out.push_back(gen_all_interval(count(1)));
            }
            else if (kind == "golomb") {
                expect_args(2);
                out.push_back(gen_golomb(count(1), parse_number<int>(arg(2), line_no, 3)));
            }
            else if (kind == "langford") {
                expect_args(2);
                out.push_back(gen_langford(count(1), count(2)));
            }
            else if (kind == "file") {
                expect_args(1);
                out.push_back(parse_instance(resolve(arg(1))));
            }
            else if (toks.size() == 1)
                out.push_back(parse_instance(resolve(kind)));
            else
                throw ParseError(line_no, 1, "unknown manifest entry '" + kind + "'");
        }
        catch (const StructuralError & e) {
            throw ParseError(line_no, 1, e.what());
        }
    }
    return out;
}

auto read_manifest(const std::filesystem::path & path) -> std::vector<Instance>
{
    std::ifstream in(path);
    if (! in)
        throw std::runtime_error("cannot open " + path.string());
    return read_manifest(in, path.parent_path());
}

auto default_suite_manifest() -> std::string
{
    return
#include "default_suite.inc"
        ;
}

auto default_suite() -> std::vector<Instance>
{
    std::istringstream in(default_suite_manifest());
    return read_manifest(in);
}

auto family_of(const std::string & instance_name) -> std::string
{
    return instance_name.substr(0, instance_name.find('-'));
}

} // namespace banditcsp
