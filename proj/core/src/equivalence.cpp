#include "bsrs/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bsrs/shaping.hpp"

namespace bsrs {

namespace {

std::vector<double> scaled_row(const LinearModel& model, int row, double scale) {
    const auto f = model.row(row);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = scale * f[i];
    }
    return out;
}

void axpy(std::vector<double>& y, double a, std::span<const double> x) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += a * x[i];
    }
}

}  // namespace

double LinearModel::value(int r) const {
    const auto f = row(r);
    return std::inner_product(f.begin(), f.end(), theta.begin(), 0.0);
}

double LinearModel::state_value(int s) const {
    double best = value(pair_index(s, 0));
    for (int a = 1; a < n_actions; ++a) {
        best = std::max(best, value(pair_index(s, a)));
    }
    return best;
}

void LinearModel::validate() const {
    if (n_rows <= 0 || dim <= 0 || n_actions <= 0) {
        throw std::invalid_argument("LinearModel: sizes must be positive");
    }
    if (features.size() != static_cast<std::size_t>(n_rows) * dim ||
        theta.size() != static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("LinearModel: array shapes disagree");
    }
    const bool ok =
        std::all_of(features.begin(), features.end(), [](double x) { return std::isfinite(x); }) &&
        std::all_of(theta.begin(), theta.end(), [](double x) { return std::isfinite(x); });
    if (!ok) {
        throw std::invalid_argument("LinearModel: features and theta must be finite");
    }
}

double static_potential_residual(const TabularMdp& mdp, const QTable& q, double eta) {
    const ValueFn v_prev = state_values(mdp, q);
    const QTable next = shaped_backup(mdp, q, eta);
    const ValueFn v_next = state_values(mdp, next);
    return mdp.gamma * std::abs(eta) * sup_norm_diff(v_next, v_prev);
}

std::vector<double> td0_update_shaped(const LinearModel& model, const Transition& t,
                                      double alpha, double eta, double gamma) {
    model.validate();
    const double v_s = model.value(t.s);
    const double v_next = t.done ? 0.0 : model.value(t.s_next);
    // phi = eta * V with stop-gradient: the value is read, the parameters
    // receive no gradient through it.
    const double phi_s = eta * v_s;
    const double phi_next = t.done ? 0.0 : eta * v_next;
    const double td_error = t.r + gamma * phi_next - phi_s + gamma * v_next - v_s;
    return scaled_row(model, t.s, alpha * td_error);
}

std::vector<double> td0_update_rescaled(const LinearModel& model, const Transition& t,
                                        double alpha_tilde, double r_tilde, double gamma) {
    model.validate();
    const double v_s = model.value(t.s);
    const double v_next = t.done ? 0.0 : model.value(t.s_next);
    const double td_error = r_tilde + gamma * v_next - v_s;
    return scaled_row(model, t.s, alpha_tilde * td_error);
}

SarsaDecomposition sarsa0_decomposition_check(const LinearModel& model, const Transition& t,
                                              double alpha, double eta, double gamma) {
    model.validate();
    if (eta == -1.0) {
        throw std::invalid_argument("sarsa0_decomposition_check: eta must differ from -1");
    }
    const int row_sa = model.pair_index(t.s, t.a);
    const double q_sa = model.value(row_sa);
    const double v_s = model.state_value(t.s);
    const double v_next = t.done ? 0.0 : model.state_value(t.s_next);

    SarsaDecomposition out;

    // Shaped side: one SARSA(0) step against the PBRS-rewritten reward,
    // phi = eta * V with stop-gradient.
    {
        const double phi_s = eta * v_s;
        const double phi_next = t.done ? 0.0 : eta * v_next;
        const double delta = t.r + gamma * phi_next - phi_s + gamma * v_next - q_sa;
        out.lhs = scaled_row(model, row_sa, alpha * delta);
    }

    // Rescaled side: alpha~, r~, plus the l2 advantage regularizer with
    // lambda = eta / (2 (1 + eta)). grad A^2 = 2 A grad Q under the
    // stop-gradient assumption on V.
    {
        const double alpha_tilde = alpha * (1.0 + eta);
        const double r_tilde = t.r / (1.0 + eta);
        const double lambda = 0.5 * eta / (1.0 + eta);
        const double advantage = q_sa - v_s;
        const double delta = r_tilde + gamma * v_next - q_sa;
        out.rhs = scaled_row(model, row_sa, alpha_tilde * delta);
        axpy(out.rhs, alpha_tilde * lambda * 2.0 * advantage, model.row(row_sa));
    }

    for (std::size_t i = 0; i < out.lhs.size(); ++i) {
        out.max_abs_diff = std::max(out.max_abs_diff, std::abs(out.lhs[i] - out.rhs[i]));
    }
    return out;
}

OnlinePhiDiagnostic sarsa0_online_phi_diagnostic(const LinearModel& model, const Transition& t) {
    model.validate();
    const int row_sa = model.pair_index(t.s, t.a);
    const double q_sa = model.value(row_sa);

    // Differentiable state value: gradient flows through the argmax row.
    int best_a = 0;
    for (int a = 1; a < model.n_actions; ++a) {
        if (model.value(model.pair_index(t.s, a)) > model.value(model.pair_index(t.s, best_a))) {
            best_a = a;
        }
    }
    const int row_best = model.pair_index(t.s, best_a);
    const double v_s = model.value(row_best);
    const double advantage = q_sa - v_s;

    OnlinePhiDiagnostic out;
    out.advantage_times_grad_q = scaled_row(model, row_sa, advantage);
    // (1/2) grad A^2 = A (grad Q - grad V); differs from the above unless
    // the gradient through V is suppressed.
    out.half_grad_advantage_sq = scaled_row(model, row_sa, advantage);
    axpy(out.half_grad_advantage_sq, -advantage, model.row(row_best));
    for (std::size_t i = 0; i < out.advantage_times_grad_q.size(); ++i) {
        out.max_abs_diff = std::max(
            out.max_abs_diff,
            std::abs(out.advantage_times_grad_q[i] - out.half_grad_advantage_sq[i]));
    }
    return out;
}

LinearModel random_linear_model(int n_rows, int dim, int n_actions, Rng& rng) {
    LinearModel m;
    m.n_rows = n_rows;
    m.dim = dim;
    m.n_actions = n_actions;
    m.features.resize(static_cast<std::size_t>(n_rows) * dim);
    m.theta.resize(static_cast<std::size_t>(dim));
    for (double& x : m.features) {
        x = rng.uniform(-1.0, 1.0);
    }
    for (double& x : m.theta) {
        x = rng.uniform(-1.0, 1.0);
    }
    return m;
}

}  // namespace bsrs
