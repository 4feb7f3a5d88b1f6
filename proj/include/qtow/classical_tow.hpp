#pragma once
// Classical tug-of-war baseline.
//
// The two coupled preference variables x_A + x_B = const reduce to one
// signed difference coordinate x = x_A - x_B; conservation is then exact by
// construction. Choices threshold x plus a Gaussian fluctuation; updates
// move x by +1 toward the rewarded arm and by -w away on a loss.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "qtow/bandit.hpp"
#include "qtow/record.hpp"
#include "qtow/rng.hpp"

namespace qtow {

struct ClassicalTowAgent {
    double x = 0.0;      // preference difference x_A - x_B
    double sigma = 1.0;  // fluctuation amplitude (>= 0)
    double w = 1.0;      // loss increment magnitude (>= 0)
};

// Pair view of the conserved representation (x_a + x_b = total).
struct PreferencePair {
    double x_a = 0.0;
    double x_b = 0.0;
};

inline PreferencePair to_pair(double x, double total) {
    return {total / 2.0 + x / 2.0, total / 2.0 - x / 2.0};
}

inline double to_difference(const PreferencePair& p) { return p.x_a - p.x_b; }

// Choose A iff x + xi >= 0 with xi ~ Normal(0, sigma^2); the measure-zero
// tie goes to A. One normal draw is consumed every call so stream positions
// do not depend on sigma.
template <class Rng>
Arm ctow_choose(const ClassicalTowAgent& agent, Rng& rng) {
    const double noise = agent.sigma * rng.normal();
    return (agent.x + noise >= 0.0) ? Arm::A : Arm::B;
}

// Analytic P(choose A) = Phi(x / sigma); step function at sigma = 0.
inline double ctow_choice_probability(const ClassicalTowAgent& agent) {
    if (agent.sigma <= 0.0) return agent.x >= 0.0 ? 1.0 : 0.0;
    const double z = agent.x / agent.sigma;
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

inline void ctow_update(ClassicalTowAgent& agent, Arm arm, RewardOutcome outcome) {
    const double toward_a = (arm == Arm::A) ? 1.0 : -1.0;
    agent.x += outcome.win ? toward_a : -toward_a * agent.w;
}

template <class Rng>
TrialRecord ctow_run_trial(ClassicalTowAgent& agent, const BanditEnv& env, Rng& rng,
                           std::uint64_t t, double& cum_regret) {
    TrialRecord rec;
    rec.t = t;
    rec.p_a_pre = ctow_choice_probability(agent);
    const Arm arm = ctow_choose(agent, rng);
    const RewardOutcome outcome = sample_reward(env, arm, rng);
    ctow_update(agent, arm, outcome);
    cum_regret += env.best_prob() - env.arm_prob(arm);
    rec.arm = arm;
    rec.reward = outcome.indicator();
    rec.cum_regret = cum_regret;
    return rec;
}

inline EpisodeResult ctow_run_episode(ClassicalTowAgent agent, const BanditEnv& env,
                                      std::uint64_t trials, std::uint64_t seed) {
    require_env(env);
    Xoshiro256pp rng(seed);
    EpisodeResult result;
    result.trajectory.reserve(trials);
    double cum_regret = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t)
        result.trajectory.push_back(ctow_run_trial(agent, env, rng, t, cum_regret));
    result.summary = summarize(result.trajectory);
    return result;
}

}  // namespace qtow
