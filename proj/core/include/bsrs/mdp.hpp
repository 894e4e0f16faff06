#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bsrs/rng.hpp"

namespace bsrs {

/// Dense |S| x |A| action-value table. Row-major: entry (s, a) lives at
/// values[s * n_actions + a].
struct QTable {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> values;

    QTable() = default;
    QTable(int states, int actions)
        : n_states(states),
          n_actions(actions),
          values(static_cast<std::size_t>(states) * actions, 0.0) {}

    static QTable zeros(int states, int actions) { return QTable(states, actions); }

    double& operator()(int s, int a) { return values[static_cast<std::size_t>(s) * n_actions + a]; }
    double operator()(int s, int a) const { return values[static_cast<std::size_t>(s) * n_actions + a]; }

    std::span<const double> row(int s) const {
        return {values.data() + static_cast<std::size_t>(s) * n_actions,
                static_cast<std::size_t>(n_actions)};
    }

    /// Non-finite entries mark divergence; callers must check and report,
    /// never propagate silently.
    bool all_finite() const;
};

/// Dense |S| state-value (or potential) array.
struct ValueFn {
    std::vector<double> values;

    ValueFn() = default;
    explicit ValueFn(int states) : values(static_cast<std::size_t>(states), 0.0) {}
    explicit ValueFn(std::vector<double> v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int s) { return values[static_cast<std::size_t>(s)]; }
    double operator[](int s) const { return values[static_cast<std::size_t>(s)]; }

    bool all_finite() const;
};

/// max_s,a |u(s,a) - w(s,a)|. Tables must have matching shape.
double sup_norm_diff(const QTable& u, const QTable& w);
double sup_norm_diff(const ValueFn& u, const ValueFn& w);

/// Per-state max over actions, no terminal handling (pure table reduction).
ValueFn row_max(const QTable& q);

/// Finite MDP <S, A, p, r, gamma> with dense transition rows. Immutable by
/// convention after construction; safe to share across threads.
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    /// p(s'|s,a), laid out [(s * n_actions + a) * n_states + s'].
    std::vector<double> transition;
    /// r(s,a), laid out [s * n_actions + a].
    std::vector<double> reward;
    double gamma = 0.0;
    std::vector<std::uint8_t> terminal;

    std::span<const double> transition_row(int s, int a) const {
        return {transition.data() +
                    (static_cast<std::size_t>(s) * n_actions + a) * n_states,
                static_cast<std::size_t>(n_states)};
    }

    double reward_at(int s, int a) const {
        return reward[static_cast<std::size_t>(s) * n_actions + a];
    }

    bool is_terminal(int s) const { return terminal[static_cast<std::size_t>(s)] != 0; }

    /// Checks the structural invariants: transition rows are distributions
    /// (sum 1 within 1e-12, no negative mass), rewards finite, gamma in
    /// [0, 1), and terminal states absorbing with zero reward. Throws
    /// std::invalid_argument on the first violation.
    void validate() const;
};

/// Rectangular gridworld with a single absorbing goal. Four actions
/// (up/down/left/right); moves into walls leave the state unchanged; with
/// probability slip_prob the agent slips to a uniformly random perpendicular
/// direction. Reward goal_reward on any transition entering the goal,
/// 0 otherwise.
struct GridworldSpec {
    int width = 0;
    int height = 0;
    int goal_row = 0;
    int goal_col = 0;
    double goal_reward = 1.0;
    double slip_prob = 0.0;
    double gamma = 0.0;
};

namespace grid {
enum Action { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
constexpr int kNumActions = 4;
inline int state_of(const GridworldSpec& spec, int row, int col) {
    return row * spec.width + col;
}
}  // namespace grid

/// Builds the MDP for a gridworld spec. Deterministic: identical specs yield
/// identical MDPs bit for bit. Throws std::invalid_argument if the goal is
/// outside the grid or slip_prob/gamma are out of range.
TabularMdp build_gridworld(const GridworldSpec& spec);

/// E_{s' ~ p(.|s,a)} f(s'): one dot product against the transition row.
double expected_next(const TabularMdp& mdp, int state, int action, const ValueFn& f);

/// Random MDP for property tests and verification sweeps: dense normalized
/// transition rows, rewards uniform in [-1, 1], optionally a few absorbing
/// terminal states. Deterministic given the rng state.
TabularMdp random_mdp(int n_states, int n_actions, double gamma, Rng& rng,
                      int n_terminal = 0);

}  // namespace bsrs
