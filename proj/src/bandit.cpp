#include <banditcsp/bandit.hpp>

#include <cmath>

namespace banditcsp {

auto ts_reward(std::uint64_t effective_children) -> double
{
    if (effective_children < 1)
        throw ContractViolation("ts_reward needs C >= 1");
    return 1.0 / static_cast<double>(effective_children);
}

auto ucb_reward(std::uint64_t effective_children, std::uint64_t c_max) -> double
{
    if (effective_children < 1)
        throw ContractViolation("ucb_reward needs C >= 1");
    if (effective_children > c_max)
        throw ContractViolation("ucb_reward needs C <= C_max");
    return 1.0 - static_cast<double>(effective_children) / static_cast<double>(c_max);
}

auto ucb_index(double mean_reward, std::uint64_t total, std::uint64_t arm_count) -> double
{
    if (arm_count == 0)
        throw ContractViolation("ucb_index of an arm never updated");
    return mean_reward + std::sqrt(2.0 * std::log(static_cast<double>(total)) / static_cast<double>(arm_count));
}

auto sample_beta(double alpha, double beta, Rng & rng) -> double
{
    double x = std::gamma_distribution<double>(alpha, 1.0)(rng);
    double y = std::gamma_distribution<double>(beta, 1.0)(rng);
    return x / (x + y);
}

Selector::Selector(SelectorKind kind, std::size_t arms, std::uint64_t seed, std::optional<std::size_t> window) :
    _kind(kind),
    _window(kind == SelectorKind::RandomArm ? std::nullopt : window),
    _rng(seed),
    _updates(arms, 0),
    _pulls(arms, 0)
{
    if (arms == 0)
        throw ContractViolation("a selector needs at least one arm");
    if (_window && *_window == 0)
        throw ContractViolation("window size must be positive");

    if (kind == SelectorKind::Thompson) {
        _ts.assign(arms, ArmStatsTS{});
        if (_window)
            _arm_max.resize(arms);
    }
    else if (kind == SelectorKind::Ucb1) {
        _ucb.assign(arms, ArmStatsUCB{});
        if (_window)
            _arm_rewards.resize(arms);
    }
}

auto Selector::ucb_total() const -> std::uint64_t
{
    return _window ? static_cast<std::uint64_t>(_entries.size()) : _total_updates;
}

auto Selector::ucb_rho(std::size_t i) const -> double
{
    return ucb_index(_ucb[i].mean(), ucb_total(), _ucb[i].count);
}

auto Selector::choose_arm() -> std::size_t
{
    const std::size_t k = num_arms();
    switch (_kind) {
    case SelectorKind::Thompson: {
        std::size_t best = 0;
        double best_sample = -1.0;
        for (std::size_t i = 0; i < k; ++i) {
            double rho = sample_beta(static_cast<double>(_ts[i].alpha), static_cast<double>(_ts[i].beta), _rng);
            if (rho > best_sample) {
                best_sample = rho;
                best = i;
            }
        }
        return best;
    }
    case SelectorKind::Ucb1: {
        // bootstrap: arms without rewards in round robin, by fewest pulls
        std::optional<std::size_t> fresh;
        for (std::size_t i = 0; i < k; ++i)
            if (_ucb[i].count == 0 && (! fresh || _pulls[i] < _pulls[*fresh]))
                fresh = i;
        if (fresh) {
            ++_pulls[*fresh];
            return *fresh;
        }
        std::size_t best = 0;
        double best_rho = ucb_rho(0);
        for (std::size_t i = 1; i < k; ++i) {
            double rho = ucb_rho(i);
            if (rho > best_rho) {
                best_rho = rho;
                best = i;
            }
        }
        ++_pulls[best];
        return best;
    }
    case SelectorKind::RandomArm: return std::uniform_int_distribution<std::size_t>(0, k - 1)(_rng);
    }
    return 0;
}

auto Selector::update(std::size_t arm, std::uint64_t effective_children) -> void
{
    if (arm >= num_arms())
        throw ContractViolation("update of an unknown arm");
    if (effective_children < 1)
        throw ContractViolation("effective children count must be >= 1");

    _c_max = std::max(_c_max, effective_children);
    ++_total_updates;
    ++_updates[arm];

    switch (_kind) {
    case SelectorKind::Thompson: {
        auto & a = _ts[arm];
        double r = ts_reward(effective_children);
        a.last_reward = r;
        bool success = r >= a.best_reward;
        if (success) {
            a.best_reward = r;
            ++a.alpha;
        }
        else
            ++a.beta;

        if (_window) {
            auto & mx = _arm_max[arm];
            while (! mx.empty() && mx.back().second <= r)
                mx.pop_back();
            mx.emplace_back(_next_seq, r);
            _entries.push_back(WindowEntry{static_cast<std::uint32_t>(arm), r, success, _next_seq++});
            if (_entries.size() > *_window)
                evict_oldest();
        }
        break;
    }
    case SelectorKind::Ucb1: {
        auto & a = _ucb[arm];
        double r = ucb_reward(effective_children, _c_max);
        a.reward_sum += r;
        ++a.count;
        if (_window) {
            _arm_rewards[arm].push_back(r);
            _entries.push_back(WindowEntry{static_cast<std::uint32_t>(arm), r, false, _next_seq++});
            if (_entries.size() > *_window)
                evict_oldest();
        }
        break;
    }
    case SelectorKind::RandomArm: break;
    }
}

auto Selector::evict_oldest() -> void
{
    auto old = _entries.front();
    _entries.pop_front();

    if (_kind == SelectorKind::Thompson) {
        auto & a = _ts[old.arm];
        if (old.success)
            --a.alpha;
        else
            --a.beta;
        auto & mx = _arm_max[old.arm];
        if (! mx.empty() && mx.front().first == old.seq)
            mx.pop_front();
        a.best_reward = mx.empty() ? 0.0 : mx.front().second;
    }
    else {
        auto & rewards = _arm_rewards[old.arm];
        rewards.pop_front();
        // refold rather than subtract, so the sum stays bit-identical to a recount
        auto & a = _ucb[old.arm];
        a.reward_sum = 0.0;
        for (double r : rewards)
            a.reward_sum += r;
        a.count = rewards.size();
    }
}

auto Selector::window_state() const -> WindowState
{
    if (! _window)
        throw ContractViolation("window_state of a non-windowed selector");

    WindowState ws;
    ws.total = _entries.size();
    ws.counts.assign(num_arms(), 0);
    for (const auto & e : _entries)
        ++ws.counts[e.arm];
    if (_kind == SelectorKind::Thompson)
        ws.ts_arms = _ts;
    else
        for (const auto & a : _ucb)
            ws.mean_rewards.push_back(a.mean());
    return ws;
}

} // namespace banditcsp
