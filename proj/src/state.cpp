#include <banditcsp/state.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

namespace banditcsp {

Domain::Domain(std::vector<int> initial_values) :
    _values(std::move(initial_values)),
    _dense(_values.size()),
    _pos(_values.size()),
    _size(_values.size())
{
    std::iota(_dense.begin(), _dense.end(), 0u);
    std::iota(_pos.begin(), _pos.end(), 0u);
}

auto Domain::index_of(int v) const -> int
{
    auto it = std::lower_bound(_values.begin(), _values.end(), v);
    if (it == _values.end() || *it != v)
        return -1;
    return static_cast<int>(it - _values.begin());
}

auto Domain::contains(int v) const -> bool
{
    int idx = index_of(v);
    return idx >= 0 && contains_index(static_cast<std::size_t>(idx));
}

auto Domain::values() const -> std::vector<int>
{
    std::vector<int> out;
    out.reserve(_size);
    for_each_live_index([&](std::size_t i) { out.push_back(_values[i]); });
    return out;
}

auto Domain::min() const -> int
{
    for (std::size_t i = 0; i < _values.size(); ++i)
        if (_pos[i] < _size)
            return _values[i];
    throw ContractViolation("min() of an empty domain");
}

auto Domain::remove_index(std::size_t idx) -> std::uint32_t
{
    std::uint32_t p = _pos[idx];
    std::uint32_t last = static_cast<std::uint32_t>(_size - 1);
    std::uint32_t moved = _dense[last];
    _dense[last] = static_cast<std::uint32_t>(idx);
    _dense[p] = moved;
    _pos[moved] = p;
    _pos[idx] = last;
    --_size;
    return p;
}

auto Domain::restore_index(std::uint32_t dense_position) -> void
{
    std::uint32_t slot = static_cast<std::uint32_t>(_size);
    ++_size;
    if (dense_position != slot) {
        std::uint32_t a = _dense[slot], b = _dense[dense_position];
        _dense[slot] = b;
        _dense[dense_position] = a;
        _pos[b] = slot;
        _pos[a] = dense_position;
    }
}

namespace {
    std::atomic<std::uint64_t> next_state_uid{1};
}

SolverState::Uid::Uid() :
    value(next_state_uid++)
{
}

SolverState::Uid::Uid(const Uid &) :
    value(next_state_uid++)
{
}

auto SolverState::Uid::operator=(const Uid &) -> Uid &
{
    value = next_state_uid++;
    return *this;
}

SolverState::SolverState(const Instance & inst) :
    _inst(&inst),
    _assigned(inst.num_variables(), 0),
    _constraints_of(inst.num_variables()),
    _is_modified(inst.num_variables(), 0)
{
    _domains.reserve(inst.num_variables());
    for (const auto & v : inst.variables)
        _domains.emplace_back(v.domain);
    for (const auto & c : inst.constraints)
        for (auto x : c.scope)
            _constraints_of[x.index].push_back(c.id);
    mark_all_modified();
}

auto SolverState::push_level() -> LevelToken
{
    _level_marks.push_back(_trail.size());
    _rev_marks.push_back(_rev_trail.size());
    _level_serials.push_back(_next_serial++);
    return LevelToken{_level_marks.size()};
}

auto SolverState::pop_level(LevelToken token) -> void
{
    if (token.depth == 0 || token.depth != _level_marks.size())
        throw ContractViolation("pop_level out of LIFO order");

    std::size_t mark = _level_marks.back();
    _level_marks.pop_back();
    while (_trail.size() > mark) {
        auto e = _trail.back();
        _trail.pop_back();
        if (e.dense_position == mark_entry) {
            _assigned[e.var] = 0;
            --_num_assigned;
        }
        else
            _domains[e.var].restore_index(e.dense_position);
    }
    std::size_t rev_mark = _rev_marks.back();
    _rev_marks.pop_back();
    _level_serials.pop_back();
    while (_rev_trail.size() > rev_mark) {
        auto e = _rev_trail.back();
        _rev_trail.pop_back();
        _rev_values[e.handle] = e.old_value;
        _rev_stamp[e.handle] = 0;
    }

    // modification tracking describes forward progress only
    for (auto x : _modified)
        _is_modified[x] = 0;
    _modified.clear();
}

auto SolverState::new_reversible(std::uint32_t initial) -> std::size_t
{
    _rev_values.push_back(initial);
    _rev_stamp.push_back(0);
    return _rev_values.size() - 1;
}

auto SolverState::set_reversible(std::size_t handle, std::uint32_t value) -> void
{
    if (! _level_serials.empty() && _rev_stamp[handle] != _level_serials.back()) {
        _rev_trail.push_back({static_cast<std::uint32_t>(handle), _rev_values[handle]});
        _rev_stamp[handle] = _level_serials.back();
    }
    _rev_values[handle] = value;
}

auto SolverState::note_modified(std::uint32_t x) -> void
{
    if (! _is_modified[x]) {
        _is_modified[x] = 1;
        _modified.push_back(x);
    }
}

auto SolverState::assign(VariableId x, int v) -> void
{
    auto & d = _domains[x.index];
    int idx = d.index_of(v);
    if (idx < 0 || ! d.contains_index(static_cast<std::size_t>(idx)))
        throw ContractViolation("assign: value " + std::to_string(v) + " not in D(x" + std::to_string(x.index) + ")");

    bool changed = false;
    for (std::size_t i = 0; i < d.initial_size(); ++i)
        if (i != static_cast<std::size_t>(idx) && d.contains_index(i)) {
            _trail.push_back({x.index, d.remove_index(i)});
            changed = true;
        }
    if (changed)
        note_modified(x.index);
    if (! _assigned[x.index]) {
        _assigned[x.index] = 1;
        ++_num_assigned;
        _trail.push_back({x.index, mark_entry});
    }
}

auto SolverState::remove_index(VariableId x, std::size_t idx) -> bool
{
    auto & d = _domains[x.index];
    if (! d.contains_index(idx))
        return true;
    _trail.push_back({x.index, d.remove_index(idx)});
    note_modified(x.index);
    return ! d.empty();
}

auto SolverState::remove_value(VariableId x, int v) -> bool
{
    int idx = _domains[x.index].index_of(v);
    if (idx < 0)
        return ! _domains[x.index].empty();
    return remove_index(x, static_cast<std::size_t>(idx));
}

auto SolverState::mark_singletons_assigned() -> void
{
    for (std::uint32_t x = 0; x < _domains.size(); ++x)
        if (! _assigned[x] && _domains[x].size() == 1) {
            _assigned[x] = 1;
            ++_num_assigned;
            _trail.push_back({x, mark_entry});
        }
}

auto SolverState::log_search_space() const -> double
{
    double total = 0.0;
    for (const auto & d : _domains) {
        if (d.empty())
            return -std::numeric_limits<double>::infinity();
        total += std::log(static_cast<double>(d.size()));
    }
    return total;
}

auto SolverState::take_modified() -> std::vector<std::uint32_t>
{
    std::vector<std::uint32_t> out;
    out.swap(_modified);
    for (auto x : out)
        _is_modified[x] = 0;
    return out;
}

auto SolverState::mark_all_modified() -> void
{
    for (std::uint32_t x = 0; x < _domains.size(); ++x)
        note_modified(x);
}

} // namespace banditcsp
