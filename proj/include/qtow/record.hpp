#pragma once
// Per-trial logging schema shared by every agent, and the episode summary
// derived from it. Optional fields stay empty where a trial produced no
// decision (strict-policy no-play) or an agent has no such quantity
// (classical / uniform baselines).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "qtow/bandit.hpp"

namespace qtow {

struct TrialRecord {
    std::uint64_t t = 0;
    std::optional<Arm> arm;
    std::optional<int> reward;       // 1 = win, 0 = lose
    double p_a_pre = 0.0;            // P(choose A) of the pre-decision state
    std::optional<double> g_hat;     // strength estimate after the trial
    std::optional<double> mu;        // memory weight after the trial
    std::optional<double> phi;       // loss-rotation magnitude used this trial
    double cum_regret = 0.0;
};

// Evaluation windows over the tail of an episode.
inline constexpr std::uint64_t kTerminalArmWindow = 1000;
inline constexpr std::uint64_t kTerminalEstimatorWindow = 2000;

struct EpisodeSummary {
    std::uint64_t trials = 0;
    std::uint64_t plays = 0;     // trials that yielded a decision
    std::uint64_t no_plays = 0;
    std::uint64_t wins = 0;
    double freq_a = 0.0;         // fraction of plays choosing A
    double freq_b = 0.0;
    std::optional<double> terminal_freq_a;      // over the last kTerminalArmWindow trials
    std::optional<double> terminal_mean_g_hat;  // over the last kTerminalEstimatorWindow trials
    std::optional<double> terminal_mean_mu;
    std::optional<double> final_g_hat;
    std::optional<double> final_mu;
    double cum_regret = 0.0;
};

// Pure function of the trajectory; every aggregate can be recomputed from
// the emitted rows.
inline EpisodeSummary summarize(const std::vector<TrialRecord>& trajectory) {
    EpisodeSummary s;
    s.trials = trajectory.size();
    std::uint64_t a_count = 0;
    for (const auto& rec : trajectory) {
        if (rec.arm) {
            ++s.plays;
            if (*rec.arm == Arm::A) ++a_count;
            if (rec.reward && *rec.reward == 1) ++s.wins;
        } else {
            ++s.no_plays;
        }
    }
    if (s.plays > 0) {
        s.freq_a = static_cast<double>(a_count) / static_cast<double>(s.plays);
        s.freq_b = 1.0 - s.freq_a;
    }
    if (!trajectory.empty()) {
        const std::uint64_t arm_window =
            std::min<std::uint64_t>(kTerminalArmWindow, trajectory.size());
        std::uint64_t win_plays = 0, win_a = 0;
        for (std::uint64_t i = trajectory.size() - arm_window; i < trajectory.size(); ++i) {
            if (trajectory[i].arm) {
                ++win_plays;
                if (*trajectory[i].arm == Arm::A) ++win_a;
            }
        }
        if (win_plays > 0)
            s.terminal_freq_a = static_cast<double>(win_a) / static_cast<double>(win_plays);

        const std::uint64_t est_window =
            std::min<std::uint64_t>(kTerminalEstimatorWindow, trajectory.size());
        double g_sum = 0.0, mu_sum = 0.0;
        std::uint64_t g_n = 0, mu_n = 0;
        for (std::uint64_t i = trajectory.size() - est_window; i < trajectory.size(); ++i) {
            if (trajectory[i].g_hat) {
                g_sum += *trajectory[i].g_hat;
                ++g_n;
            }
            if (trajectory[i].mu) {
                mu_sum += *trajectory[i].mu;
                ++mu_n;
            }
        }
        if (g_n > 0) s.terminal_mean_g_hat = g_sum / static_cast<double>(g_n);
        if (mu_n > 0) s.terminal_mean_mu = mu_sum / static_cast<double>(mu_n);

        s.final_g_hat = trajectory.back().g_hat;
        s.final_mu = trajectory.back().mu;
        s.cum_regret = trajectory.back().cum_regret;
    }
    return s;
}

struct EpisodeResult {
    std::vector<TrialRecord> trajectory;
    EpisodeSummary summary;
};

}  // namespace qtow
