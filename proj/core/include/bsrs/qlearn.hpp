#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "bsrs/operators.hpp"
#include "bsrs/shaping.hpp"

namespace bsrs {

/// Sample-based learner configuration. The epsilon schedule anneals
/// linearly from epsilon_initial to epsilon_final over the first
/// exploration_fraction of total_steps, then stays flat.
struct QLearnConfig {
    double alpha = 0.1;
    double epsilon_initial = 1.0;
    double epsilon_final = 0.02;
    double exploration_fraction = 0.1;
    long total_steps = 20000;
    ShapeConfig shape;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-episode record of a learning run. Returns are discounted sums of the
/// ORIGINAL task reward — the shaping terms never enter evaluation.
/// q_hashes holds an FNV-1a digest of the table at each episode end, for
/// cheap reproducibility checks.
struct EpisodeLog {
    std::vector<double> returns;
    std::vector<long> lengths;
    std::vector<std::uint64_t> q_hashes;
    bool diverged = false;
};

/// One environment step as seen by the learner, exposed so tests and
/// diagnostics can recompute returns from raw rewards.
struct StepEvent {
    long episode = 0;
    int s = 0;
    int a = 0;
    double r = 0.0;  // original reward, before shaping
    int s_next = 0;
    bool done = false;
};
using StepObserver = std::function<void(const StepEvent&)>;

/// Epsilon-greedy tabular Q-learning where each update bootstraps against
/// the shaped reward r~ = r + gamma*phi(s') - phi(s), phi = eta * max_a
/// Q_src(.,a). Q_src is the live table (Online) or a copy refreshed every
/// update_interval updates (Lagged). Episodes restart uniformly over
/// non-terminal states. Fully deterministic given the seed.
std::pair<QTable, EpisodeLog> q_learn(const TabularMdp& mdp, const QLearnConfig& cfg,
                                      const StepObserver& observer = {});

/// Discounted return of one rollout under a fixed policy on the original
/// reward, starting from `start`, capped at `horizon` steps.
double rollout_return(const TabularMdp& mdp, const Policy& policy, int start, long horizon,
                      Rng& rng);

/// Mean discounted return over seeded rollouts from uniformly random
/// non-terminal start states. Always evaluates the original reward.
double evaluate_policy(const TabularMdp& mdp, const Policy& policy, int episodes, long horizon,
                       std::uint64_t seed);

/// Inverse-CDF sample from the transition row of (s, a).
int sample_next_state(const TabularMdp& mdp, int s, int a, Rng& rng);

std::uint64_t fnv1a64(const void* data, std::size_t size);

}  // namespace bsrs
