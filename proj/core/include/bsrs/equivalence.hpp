#pragma once

#include <span>
#include <vector>

#include "bsrs/mdp.hpp"

namespace bsrs {

/// Linear value model: value(row) = features.row(row) . theta. Rows index
/// states (n_actions == 1, TD-style state values) or state-action pairs
/// laid out [s * n_actions + a] (SARSA-style action values). The
/// propositions checked here are statements about update algebra, so linear
/// features — with tabular one-hot as a special case — are exactly the
/// right model class.
struct LinearModel {
    int n_rows = 0;
    int dim = 0;
    int n_actions = 1;
    std::vector<double> features;  // row-major, n_rows x dim
    std::vector<double> theta;     // length dim

    std::span<const double> row(int r) const {
        return {features.data() + static_cast<std::size_t>(r) * dim,
                static_cast<std::size_t>(dim)};
    }

    double value(int r) const;

    int pair_index(int s, int a) const { return s * n_actions + a; }

    /// State value max_a Q(s,a); requires n_actions > 1 layouts.
    double state_value(int s) const;

    void validate() const;
};

/// One sampled step. a_next is meaningful only for SARSA-style checks.
struct Transition {
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
    int a_next = 0;
    bool done = false;
};

/// Magnitude of the inconsistency any static potential would have to absorb
/// between two consecutive self-shaped iterates:
/// gamma * |eta| * ||V^(n) - V^(n-1)||_inf, where V^(n-1) comes from q and
/// V^(n) from one shaped backup of q. Zero iff q is already the shaped
/// fixed point (or eta == 0).
double static_potential_residual(const TabularMdp& mdp, const QTable& q, double eta);

/// Shaped TD(0) parameter delta with the bootstrapped potential
/// phi = eta * V_theta read with stop-gradient semantics:
/// alpha * grad V(s) * [r + gamma*phi(s') - phi(s) + gamma*V(s') - V(s)].
/// The gamma terms drop when the transition is terminal.
std::vector<double> td0_update_shaped(const LinearModel& model, const Transition& t,
                                      double alpha, double eta, double gamma);

/// Plain unshaped TD(0) delta with the supplied scalars:
/// alpha~ * grad V(s) * [r~ + gamma*V(s') - V(s)].
std::vector<double> td0_update_rescaled(const LinearModel& model, const Transition& t,
                                        double alpha_tilde, double r_tilde, double gamma);

/// Both sides of the regularized SARSA(0) equivalence. lhs is the shaped
/// delta; rhs is alpha~ * (grad Q(s,a) * [r~ + gamma*V(s') - Q(s,a)]
/// + lambda * grad A^2(s,a)) with alpha~ = alpha*(1+eta), r~ = r/(1+eta),
/// lambda = eta/(2*(1+eta)) and A = Q(s,a) - V(s). State values carry
/// stop-gradient semantics on both sides. Throws for eta == -1.
struct SarsaDecomposition {
    std::vector<double> lhs;
    std::vector<double> rhs;
    double max_abs_diff = 0.0;
};
SarsaDecomposition sarsa0_decomposition_check(const LinearModel& model, const Transition& t,
                                              double alpha, double eta, double gamma);

/// Diagnostic for the online-potential variant: when the gradient flows
/// through the state value inside the advantage, the A*gradQ term and the
/// exact-gradient (1/2) grad A^2 term no longer coincide. Returns both and
/// their gap; nothing here is asserted equal.
struct OnlinePhiDiagnostic {
    std::vector<double> advantage_times_grad_q;
    std::vector<double> half_grad_advantage_sq;
    double max_abs_diff = 0.0;
};
OnlinePhiDiagnostic sarsa0_online_phi_diagnostic(const LinearModel& model, const Transition& t);

/// Random model for property sweeps: features and parameters uniform in
/// [-1, 1].
LinearModel random_linear_model(int n_rows, int dim, int n_actions, Rng& rng);

}  // namespace bsrs
