#pragma once

#include <banditcsp/errors.hpp>

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace banditcsp {

using Rng = std::mt19937_64;

enum class SelectorKind
{
    Thompson,
    Ucb1,
    RandomArm
};

/// Reward for Thompson sampling: the inverse of the effective child count.
auto ts_reward(std::uint64_t effective_children) -> double;

/// Reward for UCB1: 1 - C / C_max, where C_max already includes this node.
auto ucb_reward(std::uint64_t effective_children, std::uint64_t c_max) -> double;

/// UCB1 index R_i + sqrt(2 ln(m) / m_i). Requires arm_count >= 1.
auto ucb_index(double mean_reward, std::uint64_t total, std::uint64_t arm_count) -> double;

/// Beta(alpha, beta) draw as X / (X + Y) with X ~ Gamma(alpha), Y ~ Gamma(beta).
auto sample_beta(double alpha, double beta, Rng & rng) -> double;

struct ArmStatsTS
{
    std::uint64_t alpha = 1;
    std::uint64_t beta = 1;
    double best_reward = 0.0;
    double last_reward = 0.0;

    auto operator==(const ArmStatsTS &) const -> bool = default;
};

struct ArmStatsUCB
{
    double reward_sum = 0.0;
    std::uint64_t count = 0;

    auto mean() const -> double { return count == 0 ? 0.0 : reward_sum / static_cast<double>(count); }
    auto operator==(const ArmStatsUCB &) const -> bool = default;
};

/// Aggregates of a windowed selector, as seen by choose_arm.
struct WindowState
{
    std::vector<std::uint64_t> counts; // m_i inside the window
    std::vector<double> mean_rewards;  // UCB1-K
    std::vector<ArmStatsTS> ts_arms;   // TS-K
    std::uint64_t total = 0;           // m, at most K

    auto operator==(const WindowState &) const -> bool = default;
};

/// Multi-armed bandit over k arms: Thompson sampling, UCB1, their
/// sliding-window variants, or a uniform random arm.
class Selector
{
public:
    /// window = K for the sliding-window variants; ignored for RandomArm.
    Selector(SelectorKind kind, std::size_t arms, std::uint64_t seed, std::optional<std::size_t> window = std::nullopt);

    auto kind() const -> SelectorKind { return _kind; }
    auto num_arms() const -> std::size_t { return _updates.size(); }
    auto window() const -> std::optional<std::size_t> { return _window; }
    auto is_windowed() const -> bool { return _window.has_value(); }

    /// UCB1: while some arm has no reward in the statistics, returns such
    /// an arm, fewest pulls first (ties to the smaller index); afterwards a
    /// pure function of the statistics.
    auto choose_arm() -> std::size_t;
    auto update(std::size_t arm, std::uint64_t effective_children) -> void;

    /// Throws ContractViolation on a non-windowed selector.
    auto window_state() const -> WindowState;

    auto ts_arm(std::size_t i) const -> const ArmStatsTS & { return _ts[i]; }
    auto ucb_arm(std::size_t i) const -> const ArmStatsUCB & { return _ucb[i]; }
    /// m in the UCB1 index: all updates, or the window occupancy.
    auto ucb_total() const -> std::uint64_t;
    auto ucb_rho(std::size_t i) const -> double;

    auto total_updates() const -> std::uint64_t { return _total_updates; }
    /// Lifetime updates of arm i, including ones since evicted from a window.
    auto updates(std::size_t i) const -> std::uint64_t { return _updates[i]; }
    auto c_max() const -> std::uint64_t { return _c_max; }
    /// choose_arm results per arm (UCB1 only).
    auto pulls(std::size_t i) const -> std::uint64_t { return _pulls[i]; }

private:
    struct WindowEntry
    {
        std::uint32_t arm;
        double reward;
        bool success; // TS: incremented alpha rather than beta
        std::uint64_t seq;
    };

    auto evict_oldest() -> void;

    SelectorKind _kind;
    std::optional<std::size_t> _window;
    Rng _rng;
    std::uint64_t _c_max = 0;
    std::uint64_t _total_updates = 0;
    std::vector<std::uint64_t> _updates;
    std::vector<std::uint64_t> _pulls;
    std::vector<ArmStatsTS> _ts;
    std::vector<ArmStatsUCB> _ucb;

    std::deque<WindowEntry> _entries;
    std::vector<std::deque<double>> _arm_rewards;                       // UCB1-K, per arm, oldest first
    std::vector<std::deque<std::pair<std::uint64_t, double>>> _arm_max; // TS-K, decreasing rewards
    std::uint64_t _next_seq = 0;
};

} // namespace banditcsp
