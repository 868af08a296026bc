#include <banditcsp/search.hpp>

#include <chrono>
#include <cmath>
#include <limits>

namespace banditcsp {

auto StrategySpec::fixed(HeuristicKind h) -> StrategySpec
{
    StrategySpec s;
    s.kind = Kind::Fixed;
    s.heuristic = h;
    return s;
}

auto StrategySpec::ucb1(std::optional<std::size_t> window) -> StrategySpec
{
    StrategySpec s;
    s.kind = Kind::Bandit;
    s.selector = SelectorKind::Ucb1;
    s.window = window;
    return s;
}

auto StrategySpec::thompson(std::optional<std::size_t> window) -> StrategySpec
{
    StrategySpec s;
    s.kind = Kind::Bandit;
    s.selector = SelectorKind::Thompson;
    s.window = window;
    return s;
}

auto StrategySpec::random_arm() -> StrategySpec
{
    StrategySpec s;
    s.kind = Kind::RandomArm;
    return s;
}

auto StrategySpec::parse(const std::string & name) -> StrategySpec
{
    for (auto h : all_heuristics)
        if (name == to_string(h))
            return fixed(h);
    if (name == "random-arm")
        return random_arm();

    auto windowed = [&](const std::string & prefix) -> std::optional<std::size_t> {
        const std::string stem = prefix + "-";
        if (name.rfind(stem, 0) != 0 || name.size() == stem.size())
            throw std::invalid_argument("unknown strategy '" + name + "'");
        std::size_t used = 0;
        unsigned long long k = std::stoull(name.substr(stem.size()), &used);
        if (used != name.size() - stem.size() || k == 0)
            throw std::invalid_argument("bad window size in strategy '" + name + "'");
        return static_cast<std::size_t>(k);
    };

    if (name == "ucb1")
        return ucb1();
    if (name == "ts")
        return thompson();
    if (name.rfind("ucb1-", 0) == 0)
        return ucb1(windowed("ucb1"));
    if (name.rfind("ts-", 0) == 0)
        return thompson(windowed("ts"));
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

auto StrategySpec::name() const -> std::string
{
    switch (kind) {
    case Kind::Fixed: return std::string(to_string(heuristic));
    case Kind::RandomArm: return "random-arm";
    case Kind::Bandit: {
        std::string base = selector == SelectorKind::Ucb1 ? "ucb1" : "ts";
        if (window)
            base += "-" + std::to_string(*window);
        return base;
    }
    }
    return "?";
}

auto StrategySpec::is_stochastic() const -> bool
{
    return kind == Kind::RandomArm || (kind == Kind::Bandit && selector == SelectorKind::Thompson);
}

auto to_string(Outcome o) -> std::string
{
    switch (o) {
    case Outcome::Sat: return "SAT";
    case Outcome::Unsat: return "UNSAT";
    case Outcome::Limit: return "LIMIT";
    case Outcome::Error: return "ERROR";
    }
    return "?";
}

auto parse_outcome(const std::string & s) -> Outcome
{
    if (s == "SAT")
        return Outcome::Sat;
    if (s == "UNSAT")
        return Outcome::Unsat;
    if (s == "LIMIT")
        return Outcome::Limit;
    if (s == "ERROR")
        return Outcome::Error;
    throw std::invalid_argument("unknown outcome '" + s + "'");
}

auto SearchStats::same_search(const SearchStats & o) const -> bool
{
    return outcome == o.outcome && nodes == o.nodes && backtracks == o.backtracks && solutions == o.solutions &&
        failed_frames == o.failed_frames && propagations == o.propagations && pulls == o.pulls &&
        updates == o.updates && root_pruned == o.root_pruned;
}

auto effective_children(const NodeFrame & frame) -> std::uint64_t
{
    if (! frame.failed)
        throw ContractViolation("effective_children of a frame that has not failed");
    return std::max<std::uint64_t>(frame.children, 1);
}

auto run_reward_cycle(Selector * sel, const NodeFrame & frame) -> void
{
    if (sel)
        sel->update(frame.arm, effective_children(frame));
}

namespace {
    using Clock = std::chrono::steady_clock;

    class Search
    {
    public:
        Search(const Instance & inst, const SearchConfig & cfg) :
            _inst(inst),
            _cfg(cfg),
            _state(inst),
            _prop(inst),
            _scores(inst),
            _start(Clock::now())
        {
            const auto & st = cfg.strategy;
            if (st.kind == StrategySpec::Kind::Bandit)
                _selector.emplace(st.selector, num_heuristics, st.seed, st.window);
            else if (st.kind == StrategySpec::Kind::RandomArm)
                _selector.emplace(SelectorKind::RandomArm, num_heuristics, st.seed);
        }

        auto run() -> SolveResult
        {
            run_search();
            _result.stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - _start).count();
            _result.selector = _selector;
            return std::move(_result);
        }

    private:
        auto stats() -> SearchStats & { return _result.stats; }

        auto propagate_in_search() -> bool
        {
            auto out = _prop.propagate(_state);
            ++stats().propagations;
            _scores.on_propagation_event(_state, out.changed);
            if (! out.consistent()) {
                _scores.on_wipeout(out.culprit);
                return false;
            }
            _state.mark_singletons_assigned();
            if (_cfg.on_fixpoint)
                _cfg.on_fixpoint(_state);
            return true;
        }

        /// Returns true when search should stop.
        auto on_solution() -> bool
        {
            ++stats().solutions;
            if (_result.solutions.empty() || _cfg.keep_all_solutions) {
                Assignment a(_state.num_variables());
                for (std::uint32_t x = 0; x < _state.num_variables(); ++x)
                    a.set(VariableId{x}, _state.domain(VariableId{x}).min());
                _result.solutions.push_back(std::move(a));
            }
            return _cfg.mode == SearchMode::FirstSolution;
        }

        auto limit_reached() -> bool
        {
            if (_cfg.node_limit && stats().nodes >= *_cfg.node_limit)
                return true;
            if (_cfg.time_limit_seconds && stats().nodes % 256 == 0) {
                double elapsed = std::chrono::duration<double>(Clock::now() - _start).count();
                if (elapsed >= *_cfg.time_limit_seconds)
                    return true;
            }
            return false;
        }

        auto pick_arm() -> std::size_t
        {
            if (! _selector)
                return static_cast<std::size_t>(_cfg.strategy.heuristic);
            return _selector->choose_arm();
        }

        auto finish(Outcome o) -> void { stats().outcome = o; }

        auto run_search() -> void
        {
            if (! _prop.propagate(_state).consistent())
                return finish(Outcome::Unsat);

            auto probe = root_singleton_probe(_state, _prop);
            stats().root_pruned = probe.pruned.size();
            if (probe.unsat_at_root)
                return finish(Outcome::Unsat);
            _scores.initialize_from_probe(probe);
            _state.mark_singletons_assigned();
            if (_cfg.on_fixpoint)
                _cfg.on_fixpoint(_state);

            if (_state.all_assigned()) {
                on_solution();
                return finish(Outcome::Sat);
            }

            enum class Step
            {
                Open,
                Left,
                Right,
                Fail
            };

            std::vector<NodeFrame> frames;
            Step step = Step::Open;
            for (;;) {
                switch (step) {
                case Step::Open: {
                    if (limit_reached())
                        return finish(Outcome::Limit);
                    NodeFrame f;
                    f.arm = pick_arm();
                    ++stats().nodes;
                    ++stats().pulls[f.arm];
                    if (_cfg.record_trace)
                        _result.trace.push_back({TraceEvent::Kind::Pull, f.arm, 0});
                    f.var = select_variable(all_heuristics[f.arm], _state, _scores);
                    f.base = _state.push_level();
                    frames.push_back(std::move(f));
                    step = Step::Left;
                    break;
                }

                case Step::Left: {
                    auto & f = frames.back();
                    f.value = select_value(_state, f.var);
                    f.tried_values.push_back(f.value);
                    ++f.children;
                    f.child = _state.push_level();

                    double before = _state.log_search_space();
                    _state.assign(f.var, f.value);
                    bool ok = propagate_in_search();
                    _scores.record_impact(f.var, f.value, before,
                        ok ? _state.log_search_space() : -std::numeric_limits<double>::infinity());

                    if (! ok)
                        step = Step::Right;
                    else if (_state.all_assigned()) {
                        if (on_solution())
                            return finish(Outcome::Sat);
                        step = Step::Right;
                    }
                    else
                        step = Step::Open;
                    break;
                }

                case Step::Right: {
                    auto & f = frames.back();
                    _state.pop_level(f.child);
                    ++stats().backtracks;
                    if (! _state.remove_value(f.var, f.value) || ! propagate_in_search())
                        step = Step::Fail;
                    else if (_state.all_assigned()) {
                        if (on_solution())
                            return finish(Outcome::Sat);
                        step = Step::Fail;
                    }
                    else if (_state.is_assigned(f.var)) {
                        f.continuation = true;
                        step = Step::Open;
                    }
                    else
                        step = Step::Left;
                    break;
                }

                case Step::Fail: {
                    auto & f = frames.back();
                    f.failed = true;
                    ++stats().failed_frames;
                    if (_selector) {
                        run_reward_cycle(&*_selector, f);
                        ++stats().updates[f.arm];
                        if (_cfg.record_trace)
                            _result.trace.push_back({TraceEvent::Kind::Update, f.arm, effective_children(f)});
                    }
                    _state.pop_level(f.base);
                    frames.pop_back();
                    if (frames.empty())
                        return finish(stats().solutions > 0 ? Outcome::Sat : Outcome::Unsat);
                    step = frames.back().continuation ? Step::Fail : Step::Right;
                    break;
                }
                }
            }
        }

        const Instance & _inst;
        const SearchConfig & _cfg;
        SolverState _state;
        Propagator _prop;
        HeuristicScores _scores;
        std::optional<Selector> _selector;
        Clock::time_point _start;
        SolveResult _result;
    };
} // namespace

auto solve(const Instance & inst, const SearchConfig & cfg) -> SolveResult
{
    if (auto errors = validate_instance(inst); ! errors.empty())
        throw StructuralError("invalid instance: " + errors.front());
    return Search(inst, cfg).run();
}

} // namespace banditcsp
