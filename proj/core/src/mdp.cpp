#include "bsrs/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bsrs {

namespace {

bool finite_range(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

constexpr double kRowSumTolerance = 1e-12;

}  // namespace

bool QTable::all_finite() const { return finite_range(values); }

bool ValueFn::all_finite() const { return finite_range(values); }

double sup_norm_diff(const QTable& u, const QTable& w) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        m = std::max(m, std::abs(u.values[i] - w.values[i]));
    }
    return m;
}

double sup_norm_diff(const ValueFn& u, const ValueFn& w) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        m = std::max(m, std::abs(u.values[i] - w.values[i]));
    }
    return m;
}

ValueFn row_max(const QTable& q) {
    ValueFn v(q.n_states);
    for (int s = 0; s < q.n_states; ++s) {
        const auto r = q.row(s);
        v[s] = *std::max_element(r.begin(), r.end());
    }
    return v;
}

void TabularMdp::validate() const {
    if (n_states <= 0 || n_actions <= 0) {
        throw std::invalid_argument("TabularMdp: state and action counts must be positive");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("TabularMdp: gamma must lie in [0, 1)");
    }
    if (transition.size() != static_cast<std::size_t>(n_states) * n_actions * n_states ||
        reward.size() != static_cast<std::size_t>(n_states) * n_actions ||
        terminal.size() != static_cast<std::size_t>(n_states)) {
        throw std::invalid_argument("TabularMdp: array shapes disagree with state/action counts");
    }
    if (!finite_range(reward)) {
        throw std::invalid_argument("TabularMdp: rewards must be finite");
    }
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            const auto p = transition_row(s, a);
            double sum = 0.0;
            for (double x : p) {
                if (x < 0.0 || !std::isfinite(x)) {
                    throw std::invalid_argument("TabularMdp: transition mass must be finite and >= 0");
                }
                sum += x;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                throw std::invalid_argument(
                    "TabularMdp: transition row (" + std::to_string(s) + "," + std::to_string(a) +
                    ") sums to " + std::to_string(sum));
            }
            if (is_terminal(s)) {
                if (p[static_cast<std::size_t>(s)] != 1.0) {
                    throw std::invalid_argument("TabularMdp: terminal states must self-transition");
                }
                if (reward_at(s, a) != 0.0) {
                    throw std::invalid_argument("TabularMdp: terminal states must have zero reward");
                }
            }
        }
    }
}

TabularMdp build_gridworld(const GridworldSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0) {
        throw std::invalid_argument("build_gridworld: grid dimensions must be positive");
    }
    if (spec.goal_row < 0 || spec.goal_row >= spec.height || spec.goal_col < 0 ||
        spec.goal_col >= spec.width) {
        throw std::invalid_argument("build_gridworld: goal lies outside the grid");
    }
    if (!(spec.slip_prob >= 0.0 && spec.slip_prob < 1.0)) {
        throw std::invalid_argument("build_gridworld: slip_prob must lie in [0, 1)");
    }
    if (!(spec.gamma >= 0.0 && spec.gamma < 1.0)) {
        throw std::invalid_argument("build_gridworld: gamma must lie in [0, 1)");
    }
    if (!std::isfinite(spec.goal_reward)) {
        throw std::invalid_argument("build_gridworld: goal_reward must be finite");
    }

    const int n = spec.width * spec.height;
    TabularMdp mdp;
    mdp.n_states = n;
    mdp.n_actions = grid::kNumActions;
    mdp.gamma = spec.gamma;
    mdp.transition.assign(static_cast<std::size_t>(n) * grid::kNumActions * n, 0.0);
    mdp.reward.assign(static_cast<std::size_t>(n) * grid::kNumActions, 0.0);
    mdp.terminal.assign(static_cast<std::size_t>(n), 0);

    const int goal = grid::state_of(spec, spec.goal_row, spec.goal_col);
    mdp.terminal[static_cast<std::size_t>(goal)] = 1;

    // Row/col deltas indexed by grid::Action.
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    // Perpendicular action pairs: up/down slip to left/right and vice versa.
    static constexpr int perp[4][2] = {{2, 3}, {2, 3}, {0, 1}, {0, 1}};

    auto move = [&spec](int s, int action) {
        const int row = s / spec.width;
        const int col = s % spec.width;
        const int nr = row + dr[action];
        const int nc = col + dc[action];
        if (nr < 0 || nr >= spec.height || nc < 0 || nc >= spec.width) {
            return s;  // bumping a wall leaves the state unchanged
        }
        return nr * spec.width + nc;
    };

    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < grid::kNumActions; ++a) {
            auto* row = mdp.transition.data() +
                        (static_cast<std::size_t>(s) * grid::kNumActions + a) * n;
            if (s == goal) {
                row[s] = 1.0;
                continue;
            }
            row[move(s, a)] += 1.0 - spec.slip_prob;
            row[move(s, perp[a][0])] += spec.slip_prob / 2.0;
            row[move(s, perp[a][1])] += spec.slip_prob / 2.0;
            // Expected reward: goal_reward times the mass entering the goal.
            mdp.reward[static_cast<std::size_t>(s) * grid::kNumActions + a] =
                spec.goal_reward * row[goal];
        }
    }

    mdp.validate();
    return mdp;
}

double expected_next(const TabularMdp& mdp, int state, int action, const ValueFn& f) {
    if (state < 0 || state >= mdp.n_states || action < 0 || action >= mdp.n_actions) {
        throw std::out_of_range("expected_next: state/action out of range");
    }
    const auto p = mdp.transition_row(state, action);
    double acc = 0.0;
    for (int sn = 0; sn < mdp.n_states; ++sn) {
        acc += p[static_cast<std::size_t>(sn)] * f[sn];
    }
    return acc;
}

TabularMdp random_mdp(int n_states, int n_actions, double gamma, Rng& rng, int n_terminal) {
    TabularMdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.gamma = gamma;
    mdp.transition.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
    mdp.reward.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
    mdp.terminal.assign(static_cast<std::size_t>(n_states), 0);

    for (int t = 0; t < n_terminal && t < n_states; ++t) {
        // Last n_terminal states are absorbing.
        mdp.terminal[static_cast<std::size_t>(n_states - 1 - t)] = 1;
    }

    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            auto* row = mdp.transition.data() +
                        (static_cast<std::size_t>(s) * n_actions + a) * n_states;
            if (mdp.is_terminal(s)) {
                row[s] = 1.0;
                continue;
            }
            double sum = 0.0;
            for (int sn = 0; sn < n_states; ++sn) {
                row[sn] = rng.uniform01() + 1e-3;
                sum += row[sn];
            }
            for (int sn = 0; sn < n_states; ++sn) {
                row[sn] /= sum;
            }
            // Renormalization drift is a few ulps; pin the row sum exactly
            // onto the largest entry so validate() never trips.
            const double resum = std::accumulate(row, row + n_states, 0.0);
            auto* big = std::max_element(row, row + n_states);
            *big += 1.0 - resum;
            mdp.reward[static_cast<std::size_t>(s) * n_actions + a] = rng.uniform(-1.0, 1.0);
        }
    }

    mdp.validate();
    return mdp;
}

}  // namespace bsrs
