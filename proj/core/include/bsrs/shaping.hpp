#pragma once

#include <utility>

#include "bsrs/operators.hpp"

namespace bsrs {

/// Where the bootstrapped potential is read from during a solve: the live
/// table after every application (Online), or a copy refreshed every
/// update_interval applications (Lagged) — the tabular analog of computing
/// the potential from a target network instead of the online one.
enum class PotentialSource { kOnline, kLagged };

struct ShapeConfig {
    double eta = 0.0;
    PotentialSource source = PotentialSource::kOnline;
    int update_interval = 1;  // used only when source == kLagged; must be >= 1

    void validate() const;
};

/// Open interval of shape-scales for which the self-shaping operator is a
/// sup-norm contraction: (-1, (1-gamma)/(1+gamma)).
std::pair<double, double> admissible_eta_range(double gamma);

/// Lipschitz constant of the self-shaping operator in sup-norm:
/// |eta| + gamma * |1 + eta|.
double contraction_factor(double gamma, double eta);

/// The bootstrapped potential phi(s) = eta * max_a q(s,a), evaluated as 0
/// at terminal states.
ValueFn bootstrap_potential(const TabularMdp& mdp, const QTable& q, double eta);

/// One application of the self-shaping operator with the potential taken
/// from the input table itself:
/// T q(s,a) = (r(s,a) - eta * v(s)) + gamma * (1 + eta) * E_{s'} v(s'),
/// where v = terminal-masked row max of q. Equivalent to
/// shaped_backup_lagged with a freshly computed potential.
QTable shaped_backup(const TabularMdp& mdp, const QTable& q, double eta);

/// PBRS backup with a supplied (possibly stale) potential:
/// q'(s,a) = r(s,a) + gamma * E[phi(s')] - phi(s) + gamma * E_{s'} v(s').
/// phi is evaluated as 0 at terminal states. With phi == 0 this reduces to
/// bellman_backup exactly.
QTable shaped_backup_lagged(const TabularMdp& mdp, const QTable& q, const ValueFn& phi,
                            double eta);

/// Closed-form limit of the self-shaping iteration, computed from the solved
/// unshaped table q0_star:
///   Q_inf(s,a)  = Q0(s,a) - eta/(1+eta) * V0(s)
///   V_inf(s)    = max_a Q_inf(s,a)           (== V0(s)/(1+eta))
///   Phi_inf(s)  = eta * V_inf(s)             (== eta/(1+eta) * V0(s))
/// so max_a Q_inf = V_inf and Phi_inf = eta * V_inf hold exactly as computed.
/// Throws for eta == -1.
struct ShapedFixedPoint {
    QTable q;
    ValueFn v;
    ValueFn phi;
};
ShapedFixedPoint fixed_point_prediction(const QTable& q0_star, double eta);

/// Iterates shaped_backup from q0 until the sup-norm residual falls below
/// tol, max_steps is exhausted, or the iterates diverge. Divergence is the
/// expected outcome for eta far outside admissible_eta_range.
std::pair<QTable, ConvergenceReport> self_shaped_solve(const TabularMdp& mdp, const QTable& q0,
                                                       double eta, double tol, int max_steps);

/// Same solve with an explicit potential-source policy. Online matches
/// self_shaped_solve; Lagged(k) recomputes the potential from the current
/// table only every k applications.
std::pair<QTable, ConvergenceReport> self_shaped_solve(const TabularMdp& mdp, const QTable& q0,
                                                       const ShapeConfig& shape, double tol,
                                                       int max_steps);

}  // namespace bsrs
