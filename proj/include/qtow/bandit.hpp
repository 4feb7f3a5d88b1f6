#pragma once
// Two-armed Bernoulli bandit environment. The strength parameter
// g = p_a + p_b controls the asymmetry of agent updates downstream.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtow/errors.hpp"

namespace qtow {

enum class Arm : int { A = 0, B = 1 };

inline char arm_label(Arm a) { return a == Arm::A ? 'A' : 'B'; }
inline Arm other_arm(Arm a) { return a == Arm::A ? Arm::B : Arm::A; }

struct RewardOutcome {
    bool win = false;
    int indicator() const { return win ? 1 : 0; }
};

struct BanditEnv {
    double p_a = 0.5;
    double p_b = 0.5;

    double strength() const { return p_a + p_b; }  // g
    double arm_prob(Arm a) const { return a == Arm::A ? p_a : p_b; }
    double best_prob() const { return p_a >= p_b ? p_a : p_b; }
};

inline void require_env(const BanditEnv& env) {
    if (!(env.p_a >= 0.0 && env.p_a <= 1.0))
        throw PreconditionError("p_a out of range [0,1]: " + std::to_string(env.p_a));
    if (!(env.p_b >= 0.0 && env.p_b <= 1.0))
        throw PreconditionError("p_b out of range [0,1]: " + std::to_string(env.p_b));
}

template <class Rng>
RewardOutcome sample_reward(const BanditEnv& env, Arm arm, Rng& rng) {
    return {rng.uniform() < env.arm_prob(arm)};
}

// P(win at t) = P(A) p_a + P(B) p_b; distinct from g.
inline double per_trial_reward_prob(const BanditEnv& env, double p_choose_a) {
    return p_choose_a * env.p_a + (1.0 - p_choose_a) * env.p_b;
}

// Ties break toward A so regret accounting is deterministic.
inline Arm optimal_arm(const BanditEnv& env) {
    return env.p_b > env.p_a ? Arm::B : Arm::A;
}

// Piecewise-stationary schedule for exploration demos: segments of
// (first_trial, env), sorted, with the first segment starting at trial 0.
struct PiecewiseEnv {
    std::vector<std::pair<std::uint64_t, BanditEnv>> segments;

    BanditEnv at(std::uint64_t t) const {
        if (segments.empty() || segments.front().first != 0)
            throw PreconditionError("schedule must start at trial 0");
        BanditEnv current = segments.front().second;
        for (const auto& [start, env] : segments) {
            if (start > t) break;
            current = env;
        }
        return current;
    }
};

}  // namespace qtow
