#include "bsrs/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace bsrs {

namespace {

constexpr std::uint64_t kEpisodeStreamTag = 0x715ea5ed00000001ULL;

int greedy_action(const QTable& q, int s) {
    const auto row = q.row(s);
    int best = 0;
    for (int a = 1; a < q.n_actions; ++a) {
        if (row[static_cast<std::size_t>(a)] > row[static_cast<std::size_t>(best)]) best = a;
    }
    return best;
}

double masked_max(const TabularMdp& mdp, const QTable& q, int s) {
    if (mdp.is_terminal(s)) return 0.0;
    const auto row = q.row(s);
    return *std::max_element(row.begin(), row.end());
}

std::vector<int> non_terminal_states(const TabularMdp& mdp) {
    std::vector<int> out;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (!mdp.is_terminal(s)) out.push_back(s);
    }
    return out;
}

}  // namespace

void QLearnConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("QLearnConfig: alpha must be positive");
    }
    const bool eps_ok = epsilon_initial >= 0.0 && epsilon_initial <= 1.0 &&
                        epsilon_final >= 0.0 && epsilon_final <= 1.0 &&
                        epsilon_initial >= epsilon_final;
    if (!eps_ok) {
        throw std::invalid_argument(
            "QLearnConfig: epsilons must lie in [0,1] with initial >= final");
    }
    if (!(exploration_fraction >= 0.0 && exploration_fraction <= 1.0)) {
        throw std::invalid_argument("QLearnConfig: exploration_fraction must lie in [0,1]");
    }
    if (total_steps < 0) {
        throw std::invalid_argument("QLearnConfig: total_steps must be >= 0");
    }
    shape.validate();
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

int sample_next_state(const TabularMdp& mdp, int s, int a, Rng& rng) {
    const auto p = mdp.transition_row(s, a);
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int sn = 0; sn < mdp.n_states; ++sn) {
        acc += p[static_cast<std::size_t>(sn)];
        if (u < acc) return sn;
    }
    // u landed in the rounding slack past the last positive entry.
    for (int sn = mdp.n_states - 1; sn > 0; --sn) {
        if (p[static_cast<std::size_t>(sn)] > 0.0) return sn;
    }
    return 0;
}

std::pair<QTable, EpisodeLog> q_learn(const TabularMdp& mdp, const QLearnConfig& cfg,
                                      const StepObserver& observer) {
    cfg.validate();
    const double eta = cfg.shape.eta;
    const bool lagged = cfg.shape.source == PotentialSource::kLagged;

    QTable q(mdp.n_states, mdp.n_actions);
    EpisodeLog log;
    const std::vector<int> starts = non_terminal_states(mdp);
    if (starts.empty() || cfg.total_steps == 0) {
        return {std::move(q), std::move(log)};
    }

    Rng rng(splitmix64(cfg.seed ^ kEpisodeStreamTag));
    QTable q_src = q;  // potential source when lagged
    const double anneal_steps =
        std::max(1.0, cfg.exploration_fraction * static_cast<double>(cfg.total_steps));

    long step = 0;
    long episode = 0;
    long updates = 0;
    while (step < cfg.total_steps && !log.diverged) {
        int s = starts[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(starts.size())))];
        double ep_return = 0.0;
        double discount = 1.0;
        long ep_len = 0;

        while (!mdp.is_terminal(s) && step < cfg.total_steps) {
            const double eps =
                cfg.epsilon_initial +
                (cfg.epsilon_final - cfg.epsilon_initial) *
                    std::min(1.0, static_cast<double>(step) / anneal_steps);
            const int a = rng.bernoulli(eps) ? rng.uniform_int(mdp.n_actions)
                                             : greedy_action(q, s);
            const int s_next = sample_next_state(mdp, s, a, rng);
            const double r = mdp.reward_at(s, a);
            const bool done = mdp.is_terminal(s_next);

            // The BSRS rewrite: bootstrap against the shaped reward. This is
            // the only place eta enters the learner.
            const QTable& phi_src = lagged ? q_src : q;
            const double phi_s = eta * masked_max(mdp, phi_src, s);
            const double phi_next = done ? 0.0 : eta * masked_max(mdp, phi_src, s_next);
            const double r_shaped = r + mdp.gamma * phi_next - phi_s;

            const double target =
                r_shaped + (done ? 0.0 : mdp.gamma * masked_max(mdp, q, s_next));
            q(s, a) += cfg.alpha * (target - q(s, a));
            ++updates;
            if (lagged && updates % cfg.shape.update_interval == 0) {
                q_src = q;
            }

            if (!std::isfinite(q(s, a))) {
                log.diverged = true;
            }
            if (observer) {
                observer(StepEvent{episode, s, a, r, s_next, done});
            }

            ep_return += discount * r;
            discount *= mdp.gamma;
            ++ep_len;
            ++step;
            s = s_next;
            if (log.diverged) break;
        }

        log.returns.push_back(ep_return);
        log.lengths.push_back(ep_len);
        log.q_hashes.push_back(fnv1a64(q.values.data(), q.values.size() * sizeof(double)));
        ++episode;
    }
    return {std::move(q), std::move(log)};
}

double rollout_return(const TabularMdp& mdp, const Policy& policy, int start, long horizon,
                      Rng& rng) {
    double ret = 0.0;
    double discount = 1.0;
    int s = start;
    for (long t = 0; t < horizon && !mdp.is_terminal(s); ++t) {
        const int a = policy[s];
        if (a < 0 || a >= mdp.n_actions) {
            throw std::invalid_argument("rollout_return: policy action out of range");
        }
        ret += discount * mdp.reward_at(s, a);
        discount *= mdp.gamma;
        s = sample_next_state(mdp, s, a, rng);
    }
    return ret;
}

double evaluate_policy(const TabularMdp& mdp, const Policy& policy, int episodes, long horizon,
                       std::uint64_t seed) {
    if (episodes <= 0) {
        throw std::invalid_argument("evaluate_policy: episodes must be positive");
    }
    Rng rng(splitmix64(seed ^ kEpisodeStreamTag));
    const std::vector<int> starts = non_terminal_states(mdp);
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        if (starts.empty()) break;  // only terminal states: every return is 0
        const int start =
            starts[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(starts.size())))];
        total += rollout_return(mdp, policy, start, horizon, rng);
    }
    return total / static_cast<double>(episodes);
}

}  // namespace bsrs
