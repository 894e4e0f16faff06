#include "bsrs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsrs {

ValueFn state_values(const TabularMdp& mdp, const QTable& q) {
    ValueFn v(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) {
            v[s] = 0.0;
            continue;
        }
        const auto r = q.row(s);
        v[s] = *std::max_element(r.begin(), r.end());
    }
    return v;
}

QTable bellman_backup(const TabularMdp& mdp, const QTable& q) {
    if (q.n_states != mdp.n_states || q.n_actions != mdp.n_actions) {
        throw std::invalid_argument("bellman_backup: table shape disagrees with MDP");
    }
    const ValueFn v = state_values(mdp, q);
    QTable out(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            const auto p = mdp.transition_row(s, a);
            double ev = 0.0;
            for (int sn = 0; sn < mdp.n_states; ++sn) {
                ev += p[static_cast<std::size_t>(sn)] * v[sn];
            }
            out(s, a) = mdp.reward_at(s, a) + mdp.gamma * ev;
        }
    }
    return out;
}

TabularMdp pbrs_transform(const TabularMdp& mdp, const ValueFn& phi) {
    if (phi.size() != mdp.n_states) {
        throw std::invalid_argument("pbrs_transform: potential length disagrees with MDP");
    }
    if (!phi.all_finite()) {
        throw std::invalid_argument("pbrs_transform: potential must be finite");
    }
    ValueFn masked = phi;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) masked[s] = 0.0;
    }
    TabularMdp out = mdp;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.is_terminal(s)) continue;  // keeps terminal reward at exactly 0
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double shift = mdp.gamma * expected_next(mdp, s, a, masked) - masked[s];
            out.reward[static_cast<std::size_t>(s) * mdp.n_actions + a] += shift;
        }
    }
    return out;
}

Policy greedy_policy(const QTable& q) {
    Policy pi;
    pi.action.resize(static_cast<std::size_t>(q.n_states));
    for (int s = 0; s < q.n_states; ++s) {
        const auto r = q.row(s);
        int best = 0;
        for (int a = 1; a < q.n_actions; ++a) {
            if (r[static_cast<std::size_t>(a)] > r[static_cast<std::size_t>(best)]) best = a;
        }
        pi.action[static_cast<std::size_t>(s)] = best;
    }
    return pi;
}

std::pair<QTable, ConvergenceReport> value_iteration(const TabularMdp& mdp, const QTable& q0,
                                                     double tol, int max_steps) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("value_iteration: tol must be positive");
    }
    QTable q = q0;
    ConvergenceReport report =
        detail::iterate_to_fixpoint(q, [&mdp](const QTable& cur) { return bellman_backup(mdp, cur); },
                                    tol, max_steps);
    return {std::move(q), std::move(report)};
}

}  // namespace bsrs
