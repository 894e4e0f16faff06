#pragma once

#include <vector>

#include "bsrs/mdp.hpp"

namespace bsrs {

/// Deterministic greedy policy: one action index per state.
struct Policy {
    std::vector<int> action;

    int operator[](int s) const { return action[static_cast<std::size_t>(s)]; }
    int size() const { return static_cast<int>(action.size()); }
};

/// Outcome of an iterative solve. `residuals` holds the sup-norm distance
/// between every pair of successive iterates, so steps == residuals.size()
/// (steps counts operator applications). converged and diverged are
/// mutually exclusive.
struct ConvergenceReport {
    int steps = 0;
    std::vector<double> residuals;
    bool converged = false;
    bool diverged = false;

    double final_residual() const { return residuals.empty() ? 0.0 : residuals.back(); }
};

/// Residuals above this cap terminate a solve with the diverged flag set.
/// Shape-scales beyond the contraction range can blow up geometrically and
/// must stop cleanly rather than overflow to inf.
constexpr double kDivergenceCap = 1e12;

/// Terminal-masked state values: v(s) = 0 at terminal states, max_a Q(s,a)
/// otherwise. This is the "max at terminal states contributes 0" convention
/// shared by every operator here.
ValueFn state_values(const TabularMdp& mdp, const QTable& q);

/// One synchronous Bellman optimality backup:
/// Q'(s,a) = r(s,a) + gamma * E_{s'} max_a' Q(s',a').
QTable bellman_backup(const TabularMdp& mdp, const QTable& q);

/// Potential-based reward transform: identical MDP except
/// r~(s,a) = r(s,a) + gamma * E_{s'}[phi(s')] - phi(s). The potential is
/// evaluated as 0 at terminal states (episodic shaping correctness), so any
/// terminal entries of phi are ignored. Throws on non-finite phi.
TabularMdp pbrs_transform(const TabularMdp& mdp, const ValueFn& phi);

/// Per-state argmax over actions; ties break to the lowest action index.
Policy greedy_policy(const QTable& q);

/// Applies bellman_backup until the sup-norm residual between successive
/// iterates drops below tol, max_steps is exhausted, or the iterates
/// diverge (non-finite entry or residual above kDivergenceCap).
std::pair<QTable, ConvergenceReport> value_iteration(const TabularMdp& mdp, const QTable& q0,
                                                     double tol, int max_steps);

namespace detail {

/// Shared solve loop: repeatedly applies `op` to q, recording residuals.
/// Returns on convergence, divergence, or step budget exhaustion.
template <typename Op>
ConvergenceReport iterate_to_fixpoint(QTable& q, Op&& op, double tol, int max_steps) {
    ConvergenceReport report;
    for (int k = 0; k < max_steps; ++k) {
        QTable next = op(q);
        report.steps = k + 1;
        if (!next.all_finite()) {
            report.diverged = true;
            q = std::move(next);
            break;
        }
        const double res = sup_norm_diff(next, q);
        report.residuals.push_back(res);
        q = std::move(next);
        if (res > kDivergenceCap) {
            report.diverged = true;
            break;
        }
        if (res < tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

}  // namespace detail

}  // namespace bsrs
