#pragma once

#include <banditcsp/model.hpp>
#include <banditcsp/state.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace banditcsp {

struct DomainChange
{
    VariableId var;
    std::size_t removed = 0;

    auto operator==(const DomainChange &) const -> bool = default;
};

struct PropagationOutcome
{
    enum class Status
    {
        Consistent,
        Wipeout
    };

    Status status = Status::Consistent;
    int culprit = -1;       // constraint id, on wipeout
    VariableId wiped_out{}; // emptied variable, on wipeout
    std::vector<DomainChange> changed;

    auto consistent() const -> bool { return status == Status::Consistent; }
};

/// Generalized arc consistency over an instance's constraints. Holds the
/// compiled form of each constraint and scratch space; one per search.
///
/// Positive tables are filtered by simple tabular reduction over tuples
/// encoded as initial-domain indices; the live prefix of each table is a
/// reversible counter of the state, so a propagator binds to one state at
/// a time and rebinds (with full tables) when handed another. Negative tables and intensional
/// constraints are filtered by enumerating the Cartesian product of the
/// current scope domains. Disequalities use the usual singleton rule.
/// The queue is a FIFO of constraints seeded from the variables modified
/// since the previous call.
class Propagator
{
public:
    explicit Propagator(const Instance & inst);

    auto propagate(SolverState & s) -> PropagationOutcome;

    auto revisions() const -> std::uint64_t { return _revisions; }

private:
    struct Compiled
    {
        enum class Kind
        {
            Positive,
            Product,
            NotEqual
        } kind;
        std::vector<std::uint32_t> scope;
        std::vector<std::uint32_t> tuples;          // Positive: flat value-index tuples
        std::vector<std::uint32_t> order;           // Positive: tuple numbers, live ones first
        std::size_t limit_handle = 0;               // Positive: reversible count of live tuples
        std::vector<std::vector<int>> forbidden;    // negative tables, sorted
        const Constraint * source = nullptr;
    };

    auto revise(Compiled & c, SolverState & s) -> bool;
    auto revise_positive(Compiled & c, SolverState & s) -> bool;
    auto revise_product(const Compiled & c, SolverState & s) -> bool;
    auto revise_not_equal(const Compiled & c, SolverState & s) -> bool;
    auto remove_unsupported(const Compiled & c, SolverState & s) -> bool;
    auto record_removal(SolverState & s, std::uint32_t var, std::size_t idx) -> bool;
    auto enqueue_neighbours(const SolverState & s, std::uint32_t var, int except) -> void;

    auto bind(SolverState & s) -> void;

    std::vector<Compiled> _compiled;
    std::uint64_t _bound_uid = 0;
    std::vector<int> _queue;
    std::size_t _queue_head = 0;
    std::vector<char> _in_queue;
    std::vector<std::vector<char>> _supported; // per scope position, per initial value index
    std::vector<std::size_t> _removed_count;
    std::vector<std::uint32_t> _touched;
    std::uint32_t _wiped_out = 0;
    int _current = -1;
    std::uint64_t _revisions = 0;
};

/// Singleton probe results at the root.
struct ProbeReport
{
    /// reduction[x][i]: 1 - P_after / P_before when assigning the i-th initial value of x,
    /// from the last pass in which it was probed. Empty where never probed.
    std::vector<std::vector<std::optional<double>>> reduction;
    /// Number of probes (in the final pass) in which propagation filtered each variable.
    std::vector<std::uint64_t> activations;
    /// Values whose singleton assignment wiped out, in pruning order.
    std::vector<std::pair<VariableId, int>> pruned;
    bool unsat_at_root = false;
    std::size_t passes = 0;
};

/// Probes every (variable, value) at decision level 0, variables by index
/// and values ascending, removing values whose probe wipes out and
/// re-propagating after each removal. Passes repeat until no value is
/// pruned, so the resulting root is singleton arc consistent.
auto root_singleton_probe(SolverState & s, Propagator & prop) -> ProbeReport;

} // namespace banditcsp
