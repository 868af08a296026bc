#include <banditcsp/propagation.hpp>

#include <algorithm>
#include <cmath>

namespace banditcsp {

Propagator::Propagator(const Instance & inst) :
    _in_queue(inst.constraints.size(), 0),
    _removed_count(inst.num_variables(), 0)
{
    std::size_t max_arity = 0;
    _compiled.reserve(inst.constraints.size());
    for (const auto & c : inst.constraints) {
        Compiled cc;
        cc.source = &c;
        for (auto x : c.scope)
            cc.scope.push_back(x.index);
        max_arity = std::max(max_arity, c.scope.size());

        if (const auto * table = std::get_if<ExtensionalTable>(&c.body); table && table->positive) {
            cc.kind = Compiled::Kind::Positive;
            std::vector<std::uint32_t> encoded(c.scope.size());
            for (const auto & t : table->tuples) {
                bool in_domains = true;
                for (std::size_t p = 0; p < t.size() && in_domains; ++p) {
                    const auto & d = inst.variables[c.scope[p].index].domain;
                    auto it = std::lower_bound(d.begin(), d.end(), t[p]);
                    if (it == d.end() || *it != t[p])
                        in_domains = false;
                    else
                        encoded[p] = static_cast<std::uint32_t>(it - d.begin());
                }
                if (in_domains)
                    cc.tuples.insert(cc.tuples.end(), encoded.begin(), encoded.end());
            }
        }
        else if (std::holds_alternative<BinaryDisequality>(c.body))
            cc.kind = Compiled::Kind::NotEqual;
        else {
            cc.kind = Compiled::Kind::Product;
            if (table) {
                cc.forbidden = table->tuples;
                std::sort(cc.forbidden.begin(), cc.forbidden.end());
            }
        }

        _compiled.push_back(std::move(cc));
    }

    std::size_t max_domain = 0;
    for (const auto & v : inst.variables)
        max_domain = std::max(max_domain, v.domain.size());
    _supported.assign(max_arity, std::vector<char>(max_domain, 0));
}

auto Propagator::enqueue_neighbours(const SolverState & s, std::uint32_t var, int except) -> void
{
    for (int c : s.constraints_of(VariableId{var}))
        if (c != except && ! _in_queue[static_cast<std::size_t>(c)]) {
            _in_queue[static_cast<std::size_t>(c)] = 1;
            _queue.push_back(c);
        }
}

auto Propagator::record_removal(SolverState & s, std::uint32_t var, std::size_t idx) -> bool
{
    bool alive = s.remove_index(VariableId{var}, idx);
    if (_removed_count[var]++ == 0)
        _touched.push_back(var);
    if (! alive) {
        _wiped_out = var;
        return false;
    }
    return true;
}

auto Propagator::remove_unsupported(const Compiled & c, SolverState & s) -> bool
{
    for (std::size_t p = 0; p < c.scope.size(); ++p) {
        auto x = c.scope[p];
        const auto & d = s.domain(VariableId{x});
        bool removed_any = false;
        for (std::size_t i = 0; i < d.initial_size(); ++i)
            if (d.contains_index(i) && ! _supported[p][i]) {
                if (! record_removal(s, x, i))
                    return false;
                removed_any = true;
            }
        if (removed_any)
            enqueue_neighbours(s, x, _current);
    }
    return true;
}

auto Propagator::bind(SolverState & s) -> void
{
    for (auto & cc : _compiled)
        if (cc.kind == Compiled::Kind::Positive) {
            const auto count = cc.tuples.size() / std::max<std::size_t>(cc.scope.size(), 1);
            if (cc.order.size() != count) {
                cc.order.resize(count);
                for (std::size_t t = 0; t < count; ++t)
                    cc.order[t] = static_cast<std::uint32_t>(t);
            }
            cc.limit_handle = s.new_reversible(static_cast<std::uint32_t>(count));
        }
    _bound_uid = s.uid();
}

auto Propagator::revise_positive(Compiled & c, SolverState & s) -> bool
{
    const std::size_t arity = c.scope.size();
    std::size_t unsupported = 0;
    for (std::size_t p = 0; p < arity; ++p) {
        const auto & d = s.domain(VariableId{c.scope[p]});
        std::fill_n(_supported[p].begin(), d.initial_size(), 0);
        unsupported += d.size();
    }

    // order[limit, count) holds tuples invalid at this node and below
    std::size_t limit = s.reversible(c.limit_handle);
    const std::size_t old_limit = limit;
    for (std::size_t k = 0; k < limit;) {
        const std::uint32_t * tuple = c.tuples.data() + std::size_t{c.order[k]} * arity;
        bool valid = true;
        for (std::size_t p = 0; p < arity && valid; ++p)
            valid = s.domain(VariableId{c.scope[p]}).contains_index(tuple[p]);
        if (! valid) {
            std::swap(c.order[k], c.order[--limit]);
            continue;
        }
        if (unsupported > 0)
            for (std::size_t p = 0; p < arity; ++p)
                if (! _supported[p][tuple[p]]) {
                    _supported[p][tuple[p]] = 1;
                    --unsupported;
                }
        ++k;
    }
    if (limit != old_limit)
        s.set_reversible(c.limit_handle, static_cast<std::uint32_t>(limit));

    if (unsupported == 0)
        return true;
    return remove_unsupported(c, s);
}

auto Propagator::revise_product(const Compiled & c, SolverState & s) -> bool
{
    const std::size_t arity = c.scope.size();
    std::vector<std::vector<std::uint32_t>> live(arity);
    std::size_t unsupported = 0;
    for (std::size_t p = 0; p < arity; ++p) {
        const auto & d = s.domain(VariableId{c.scope[p]});
        std::fill_n(_supported[p].begin(), d.initial_size(), 0);
        d.for_each_live_index([&](std::size_t i) { live[p].push_back(static_cast<std::uint32_t>(i)); });
        unsupported += d.size();
    }

    const auto * intension = std::get_if<IntensionalExpr>(&c.source->body);

    std::vector<std::size_t> odometer(arity, 0);
    std::vector<int> values(arity);
    bool exhausted = false;
    while (! exhausted && unsupported > 0) {
        bool adds_support = false;
        for (std::size_t p = 0; p < arity; ++p) {
            auto idx = live[p][odometer[p]];
            values[p] = s.domain(VariableId{c.scope[p]}).value_at(idx);
            if (! _supported[p][idx])
                adds_support = true;
        }

        if (adds_support) {
            bool allowed;
            if (intension)
                allowed = evaluate_slots(intension->expr, values) != 0;
            else
                allowed = ! std::binary_search(c.forbidden.begin(), c.forbidden.end(), values);
            if (allowed)
                for (std::size_t p = 0; p < arity; ++p) {
                    auto idx = live[p][odometer[p]];
                    if (! _supported[p][idx]) {
                        _supported[p][idx] = 1;
                        --unsupported;
                    }
                }
        }

        std::size_t p = arity;
        for (;;) {
            if (p == 0) {
                exhausted = true;
                break;
            }
            --p;
            if (++odometer[p] < live[p].size())
                break;
            odometer[p] = 0;
        }
    }

    if (unsupported == 0)
        return true;
    return remove_unsupported(c, s);
}

auto Propagator::revise_not_equal(const Compiled & c, SolverState & s) -> bool
{
    for (int side = 0; side < 2; ++side) {
        auto x = c.scope[static_cast<std::size_t>(side)];
        auto y = c.scope[static_cast<std::size_t>(1 - side)];
        const auto & dx = s.domain(VariableId{x});
        if (dx.size() != 1)
            continue;
        int v = dx.min();
        int idx = s.domain(VariableId{y}).index_of(v);
        if (idx >= 0 && s.domain(VariableId{y}).contains_index(static_cast<std::size_t>(idx))) {
            if (! record_removal(s, y, static_cast<std::size_t>(idx)))
                return false;
            enqueue_neighbours(s, y, _current);
        }
    }
    return true;
}

auto Propagator::revise(Compiled & c, SolverState & s) -> bool
{
    ++_revisions;
    switch (c.kind) {
    case Compiled::Kind::Positive: return revise_positive(c, s);
    case Compiled::Kind::Product: return revise_product(c, s);
    case Compiled::Kind::NotEqual: return revise_not_equal(c, s);
    }
    return true;
}

auto Propagator::propagate(SolverState & s) -> PropagationOutcome
{
    PropagationOutcome out;
    if (s.uid() != _bound_uid)
        bind(s);

    _queue.clear();
    _queue_head = 0;
    for (auto x : s.take_modified())
        enqueue_neighbours(s, x, -1);

    bool ok = true;
    while (_queue_head < _queue.size()) {
        int ci = _queue[_queue_head++];
        _in_queue[static_cast<std::size_t>(ci)] = 0;
        _current = ci;
        if (! revise(_compiled[static_cast<std::size_t>(ci)], s)) {
            out.status = PropagationOutcome::Status::Wipeout;
            out.culprit = ci;
            out.wiped_out = VariableId{_wiped_out};
            ok = false;
            break;
        }
    }
    _current = -1;

    if (! ok)
        for (std::size_t i = _queue_head; i < _queue.size(); ++i)
            _in_queue[static_cast<std::size_t>(_queue[i])] = 0;
    _queue.clear();
    _queue_head = 0;

    // removals made here were all queued already; only later changes are news
    s.take_modified();

    out.changed.reserve(_touched.size());
    for (auto x : _touched) {
        out.changed.push_back(DomainChange{VariableId{x}, _removed_count[x]});
        _removed_count[x] = 0;
    }
    _touched.clear();
    return out;
}

auto root_singleton_probe(SolverState & s, Propagator & prop) -> ProbeReport
{
    if (s.decision_level() != 0)
        throw ContractViolation("root_singleton_probe must run at decision level 0");

    const auto n = s.num_variables();
    ProbeReport report;
    report.reduction.resize(n);
    for (std::size_t x = 0; x < n; ++x)
        report.reduction[x].assign(s.domain(VariableId{static_cast<std::uint32_t>(x)}).initial_size(), std::nullopt);
    report.activations.assign(n, 0);

    bool pruned_in_pass = true;
    while (pruned_in_pass) {
        pruned_in_pass = false;
        ++report.passes;
        std::fill(report.activations.begin(), report.activations.end(), 0);

        for (std::uint32_t xi = 0; xi < n; ++xi) {
            VariableId x{xi};
            std::vector<std::size_t> candidates;
            s.domain(x).for_each_live_index([&](std::size_t i) { candidates.push_back(i); });

            for (auto idx : candidates) {
                if (! s.domain(x).contains_index(idx))
                    continue;
                int v = s.domain(x).value_at(idx);
                double before = s.log_search_space();

                auto token = s.push_level();
                s.assign(x, v);
                auto outcome = prop.propagate(s);

                if (outcome.consistent()) {
                    double after = s.log_search_space();
                    report.reduction[xi][idx] = std::clamp(1.0 - std::exp(after - before), 0.0, 1.0);
                    for (const auto & ch : outcome.changed)
                        ++report.activations[ch.var.index];
                    s.pop_level(token);
                    continue;
                }

                s.pop_level(token);
                report.reduction[xi][idx] = 1.0;
                report.pruned.emplace_back(x, v);
                pruned_in_pass = true;
                if (! s.remove_index(x, idx) || ! prop.propagate(s).consistent()) {
                    report.unsat_at_root = true;
                    return report;
                }
            }
        }
    }
    return report;
}

} // namespace banditcsp
