#include "bsrs/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsrs {

void ShapeConfig::validate() const {
    if (!std::isfinite(eta)) {
        throw std::invalid_argument("ShapeConfig: eta must be finite");
    }
    if (source == PotentialSource::kLagged && update_interval < 1) {
        throw std::invalid_argument("ShapeConfig: lagged update interval must be >= 1");
    }
}

std::pair<double, double> admissible_eta_range(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("admissible_eta_range: gamma must lie in [0, 1)");
    }
    return {-1.0, (1.0 - gamma) / (1.0 + gamma)};
}

double contraction_factor(double gamma, double eta) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("contraction_factor: gamma must lie in [0, 1)");
    }
    return std::abs(eta) + gamma * std::abs(1.0 + eta);
}

ValueFn bootstrap_potential(const TabularMdp& mdp, const QTable& q, double eta) {
    ValueFn phi = state_values(mdp, q);
    for (double& x : phi.values) {
        x *= eta;
    }
    return phi;
}

QTable shaped_backup(const TabularMdp& mdp, const QTable& q, double eta) {
    return shaped_backup_lagged(mdp, q, bootstrap_potential(mdp, q, eta), eta);
}

QTable shaped_backup_lagged(const TabularMdp& mdp, const QTable& q, const ValueFn& phi,
                            double eta) {
    if (q.n_states != mdp.n_states || q.n_actions != mdp.n_actions ||
        phi.size() != mdp.n_states) {
        throw std::invalid_argument("shaped_backup: shapes disagree with MDP");
    }
    if (!std::isfinite(eta) || !phi.all_finite()) {
        throw std::invalid_argument("shaped_backup: eta and potential must be finite");
    }
    const ValueFn v = state_values(mdp, q);
    // Potential evaluates to 0 at terminal states regardless of the entries
    // supplied; v is already masked.
    QTable out(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) {
        const double phi_s = mdp.is_terminal(s) ? 0.0 : phi[s];
        for (int a = 0; a < mdp.n_actions; ++a) {
            const auto p = mdp.transition_row(s, a);
            double acc = 0.0;
            for (int sn = 0; sn < mdp.n_states; ++sn) {
                const double phi_sn = mdp.is_terminal(sn) ? 0.0 : phi[sn];
                acc += p[static_cast<std::size_t>(sn)] * (v[sn] + phi_sn);
            }
            out(s, a) = (mdp.reward_at(s, a) - phi_s) + mdp.gamma * acc;
        }
    }
    return out;
}

ShapedFixedPoint fixed_point_prediction(const QTable& q0_star, double eta) {
    if (!std::isfinite(eta) || eta == -1.0) {
        throw std::invalid_argument("fixed_point_prediction: eta must be finite and != -1");
    }
    const ValueFn v0 = row_max(q0_star);
    const double scale = eta / (1.0 + eta);

    ShapedFixedPoint fp;
    fp.q = q0_star;
    for (int s = 0; s < q0_star.n_states; ++s) {
        const double shift = scale * v0[s];
        for (int a = 0; a < q0_star.n_actions; ++a) {
            fp.q(s, a) -= shift;
        }
    }
    // v is the row max of the predicted table (equals V0/(1+eta) up to
    // rounding) and phi = eta * v, so the self-consistency identities hold
    // exactly as computed.
    fp.v = row_max(fp.q);
    fp.phi = fp.v;
    for (double& x : fp.phi.values) {
        x *= eta;
    }
    return fp;
}

std::pair<QTable, ConvergenceReport> self_shaped_solve(const TabularMdp& mdp, const QTable& q0,
                                                       double eta, double tol, int max_steps) {
    ShapeConfig shape;
    shape.eta = eta;
    return self_shaped_solve(mdp, q0, shape, tol, max_steps);
}

std::pair<QTable, ConvergenceReport> self_shaped_solve(const TabularMdp& mdp, const QTable& q0,
                                                       const ShapeConfig& shape, double tol,
                                                       int max_steps) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("self_shaped_solve: tol must be positive");
    }
    shape.validate();
    QTable q = q0;
    ConvergenceReport report;
    if (shape.source == PotentialSource::kOnline) {
        report = detail::iterate_to_fixpoint(
            q, [&](const QTable& cur) { return shaped_backup(mdp, cur, shape.eta); }, tol,
            max_steps);
    } else {
        ValueFn phi = bootstrap_potential(mdp, q, shape.eta);
        int since_refresh = 0;
        report = detail::iterate_to_fixpoint(
            q,
            [&](const QTable& cur) {
                if (since_refresh == shape.update_interval) {
                    phi = bootstrap_potential(mdp, cur, shape.eta);
                    since_refresh = 0;
                }
                ++since_refresh;
                return shaped_backup_lagged(mdp, cur, phi, shape.eta);
            },
            tol, max_steps);
    }
    return {std::move(q), std::move(report)};
}

}  // namespace bsrs
