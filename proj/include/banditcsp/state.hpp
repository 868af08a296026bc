#pragma once

#include <banditcsp/model.hpp>

#include <cstdint>
#include <vector>

namespace banditcsp {

/// Sparse-set domain over the indices of a variable's initial values.
/// Live indices occupy dense[0, size); removed ones sit after, in reverse
/// removal order, so undoing removals in LIFO order is a swap and an increment.
class Domain
{
public:
    Domain() = default;
    explicit Domain(std::vector<int> initial_values);

    auto size() const -> std::size_t { return _size; }
    auto empty() const -> bool { return _size == 0; }
    auto initial_size() const -> std::size_t { return _values.size(); }
    auto initial_values() const -> const std::vector<int> & { return _values; }

    auto contains(int v) const -> bool;
    auto contains_index(std::size_t idx) const -> bool { return _pos[idx] < _size; }
    /// Index of v among the initial values, or -1.
    auto index_of(int v) const -> int;
    auto value_at(std::size_t idx) const -> int { return _values[idx]; }

    /// Live values, ascending.
    auto values() const -> std::vector<int>;
    auto min() const -> int;

    /// Removes the value with initial index idx; returns its dense position before removal.
    auto remove_index(std::size_t idx) -> std::uint32_t;
    /// Undo of remove_index, given the position it returned. Must be applied in LIFO order.
    auto restore_index(std::uint32_t dense_position) -> void;

    template <typename F>
    auto for_each_live_index(F && f) const -> void
    {
        for (std::size_t i = 0; i < _values.size(); ++i)
            if (_pos[i] < _size)
                f(i);
    }

    auto operator==(const Domain &) const -> bool = default;

private:
    std::vector<int> _values;
    std::vector<std::uint32_t> _dense;
    std::vector<std::uint32_t> _pos;
    std::size_t _size = 0;
};

struct LevelToken
{
    std::size_t depth = 0;
};

/// Domains, trail and assignment marks for one search.
class SolverState
{
public:
    explicit SolverState(const Instance & inst);

    auto instance() const -> const Instance & { return *_inst; }
    auto num_variables() const -> std::size_t { return _domains.size(); }
    auto domain(VariableId x) const -> const Domain & { return _domains[x.index]; }
    auto domains() const -> const std::vector<Domain> & { return _domains; }

    auto is_assigned(VariableId x) const -> bool { return _assigned[x.index] != 0; }
    auto is_instantiated(VariableId x) const -> bool { return is_assigned(x) && domain(x).size() == 1; }
    auto all_assigned() const -> bool { return _num_assigned == _domains.size(); }
    auto num_assigned() const -> std::size_t { return _num_assigned; }

    auto push_level() -> LevelToken;
    auto pop_level(LevelToken token) -> void;
    auto decision_level() const -> std::size_t { return _level_marks.size(); }

    /// Reduces D(x) to {v} and marks x assigned.
    auto assign(VariableId x, int v) -> void;
    /// Returns false iff D(x) became empty.
    auto remove_value(VariableId x, int v) -> bool;
    auto remove_index(VariableId x, std::size_t idx) -> bool;
    /// Marks every unassigned variable with a singleton domain as assigned.
    auto mark_singletons_assigned() -> void;

    /// log of the product of current domain sizes; -inf when some domain is empty.
    auto log_search_space() const -> double;

    /// Constraints whose scope contains x.
    auto constraints_of(VariableId x) const -> const std::vector<int> & { return _constraints_of[x.index]; }

    /// Variables modified since the last call, each reported once.
    auto take_modified() -> std::vector<std::uint32_t>;
    auto mark_all_modified() -> void;

    auto trail_size() const -> std::size_t { return _trail.size(); }

    /// Backtrackable counters: a value set at some level reverts when that level is popped.
    auto new_reversible(std::uint32_t initial) -> std::size_t;
    auto reversible(std::size_t handle) const -> std::uint32_t { return _rev_values[handle]; }
    auto set_reversible(std::size_t handle, std::uint32_t value) -> void;

    /// Distinct for every constructed or copied state.
    auto uid() const -> std::uint64_t { return _uid.value; }

private:
    struct TrailEntry
    {
        std::uint32_t var;
        std::uint32_t dense_position; // assignment mark when == mark_entry
    };
    static constexpr std::uint32_t mark_entry = 0xffffffffu;

    struct Uid
    {
        Uid();
        Uid(const Uid &);
        auto operator=(const Uid &) -> Uid &;
        std::uint64_t value;
    };

    struct RevEntry
    {
        std::uint32_t handle;
        std::uint32_t old_value;
    };

    auto note_modified(std::uint32_t x) -> void;

    const Instance * _inst;
    std::vector<Domain> _domains;
    std::vector<char> _assigned;
    std::size_t _num_assigned = 0;
    std::vector<TrailEntry> _trail;
    std::vector<std::size_t> _level_marks;
    std::vector<std::uint32_t> _rev_values;
    std::vector<std::uint64_t> _rev_stamp; // serial of the level that last saved the value
    std::vector<RevEntry> _rev_trail;
    std::vector<std::size_t> _rev_marks;
    std::vector<std::uint64_t> _level_serials;
    std::uint64_t _next_serial = 1;
    Uid _uid;
    std::vector<std::vector<int>> _constraints_of;
    std::vector<std::uint32_t> _modified;
    std::vector<char> _is_modified;
};

} // namespace banditcsp
