#pragma once
// The quantum tug-of-war agent, in both realizations.
//
//   state_carrying  A single qutrit persists across trials. Decisions are
//                   projective measurements with Lüders collapse; learning
//                   applies reward-conditioned rotations to the survivor.
//
//   device          A fresh qutrit (sqrt(1-mu) cos a, sqrt(1-mu) sin a,
//                   sqrt(mu)) is prepared each trial from the device
//                   parameters (alpha, mu); the measured state is then
//                   discarded and only the parameters carry history.
//
// Updates: win rotates the decision subspace by theta toward the chosen
// arm, a loss rotates by phi = w(g_hat)·theta away from it, where
// w(g) = g / (2 - g) and g_hat is either known, tracked by a clamped
// online estimator g <- g + eta (I - g), or encoded in the memory weight
// mu (g_hat = 2 mu) updated by interference feedback.
//
// Sign convention, fixed here once: "toward arm X" is the rotation
// direction that increases X's Born weight to first order, i.e. the sign
// of -Re(<A|psi><psi|B>) for X = A (and its negation for B). At the poles
// the gradient vanishes and the A-direction defaults to rotation_ab(-theta)
// (positive rotation_ab moves amplitude from A toward B), so winning at a
// pole oscillates around it rather than rotating through it — a fixed
// global sign would carry the state past P = 1 and equilibrate on the
// wrong arm. Wins rotate toward the chosen arm by theta, losses away by
// phi = w(g_hat)·theta. Positive rotation_a_perp / rotation_b_perp angles
// move amplitude from the arm toward |perp>.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <variant>

#include "qtow/bandit.hpp"
#include "qtow/quantum.hpp"
#include "qtow/record.hpp"
#include "qtow/rng.hpp"

namespace qtow {

enum class AgentMode { state_carrying, device };
enum class PerpPolicy { postselect, strict };
enum class EstimatorKind { known_g, classical, quantum_memory };

struct AgentConfig {
    double theta = 0.1;  // win rotation angle (radians)
    AgentMode mode = AgentMode::device;
    PerpPolicy perp_policy = PerpPolicy::postselect;
    EstimatorKind estimator = EstimatorKind::classical;
    double known_g = 1.0;   // used by known_g only
    double eta = 0.05;      // classical estimator learning rate, in (0,1)
    double epsilon = 0.01;  // estimator clamp margin, in (0,1)
    double eta_mu = 0.05;   // device-mode memory drift rate
    double kappa = 0.05;    // state-mode memory rotation angle (radians)
    double initial_alpha = std::numbers::pi / 4.0;
    double initial_mu = 0.5;
    double initial_g_hat = 1.0;

    double mu_min() const { return epsilon / 2.0; }
    double mu_max() const { return 1.0 - epsilon / 2.0; }
};

inline void require_agent_config(const AgentConfig& cfg) {
    if (!std::isfinite(cfg.theta)) throw PreconditionError("theta must be finite");
    if (!(cfg.eta > 0.0 && cfg.eta < 1.0))
        throw PreconditionError("eta out of range (0,1)");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw PreconditionError("epsilon out of range (0,1)");
    if (!(cfg.eta_mu > 0.0 && cfg.eta_mu < 1.0))
        throw PreconditionError("eta_mu out of range (0,1)");
    if (!std::isfinite(cfg.kappa)) throw PreconditionError("kappa must be finite");
    if (!(cfg.initial_mu >= 0.0 && cfg.initial_mu <= 1.0))
        throw PreconditionError("initial_mu out of range [0,1]");
    if (!(cfg.known_g >= 0.0 && cfg.known_g <= 2.0))
        throw PreconditionError("g out of range [0,2]");
}

// ---------------------------------------------------------------------------
// Update asymmetry and estimation

// w(g) = g / (2 - g). Inputs at or above 2 are clamped to 2 - epsilon (with
// a warning, since that signals a configuration problem); inputs slightly
// above 2 - epsilon are clamped silently to keep w finite.
inline double asymmetry_w(double g, double epsilon = 0.01) {
    if (g >= 2.0) {
        std::clog << "qtow: warning: g = " << g << " clamped to " << 2.0 - epsilon
                  << " (w(g) diverges at g = 2)\n";
        g = 2.0 - epsilon;
    }
    if (g > 2.0 - epsilon) g = 2.0 - epsilon;
    if (g < 0.0) g = 0.0;
    return g / (2.0 - g);
}

// One step of the clamped online strength estimator.
inline double estimator_step(double g_hat, int indicator, double eta, double epsilon) {
    double next = g_hat + eta * (static_cast<double>(indicator) - g_hat);
    if (next < epsilon) next = epsilon;
    if (next > 2.0 - epsilon) next = 2.0 - epsilon;
    return next;
}

// ---------------------------------------------------------------------------
// Agent state

struct DeviceParams {
    double alpha = std::numbers::pi / 4.0;  // decision angle, kept in (-pi, pi]
    double mu = 0.5;                        // memory weight, in [0,1]
};

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

// (sqrt(1-mu) cos a, sqrt(1-mu) sin a, sqrt(mu))
inline QutritState prepare_device_state(double alpha, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw PreconditionError("mu out of range [0,1]");
    if (!std::isfinite(alpha)) throw PreconditionError("alpha must be finite");
    const double decision = std::sqrt(1.0 - mu);
    return {decision * std::cos(alpha), decision * std::sin(alpha), std::sqrt(mu)};
}

struct AgentState {
    std::variant<QutritState, DeviceParams> rep;
    double g_hat = 1.0;

    bool is_device() const { return std::holds_alternative<DeviceParams>(rep); }
    const QutritState& psi() const { return std::get<QutritState>(rep); }
    QutritState& psi() { return std::get<QutritState>(rep); }
    const DeviceParams& params() const { return std::get<DeviceParams>(rep); }
    DeviceParams& params() { return std::get<DeviceParams>(rep); }

    // Memory weight as seen by the estimator readout.
    double mu_readout() const {
        return is_device() ? params().mu : std::norm(psi().amp[2]);
    }
};

inline AgentState make_agent_state(const AgentConfig& cfg) {
    require_agent_config(cfg);
    AgentState st;
    if (cfg.mode == AgentMode::device)
        st.rep = DeviceParams{wrap_angle(cfg.initial_alpha), cfg.initial_mu};
    else
        st.rep = prepare_device_state(cfg.initial_alpha, cfg.initial_mu);

    double g0 = cfg.initial_g_hat;
    if (cfg.estimator == EstimatorKind::known_g) g0 = cfg.known_g;
    if (cfg.estimator == EstimatorKind::quantum_memory) g0 = 2.0 * cfg.initial_mu;
    // invariant: g_hat always lives in the clamp interval
    st.g_hat = std::min(std::max(g0, cfg.epsilon), 2.0 - cfg.epsilon);
    return st;
}

// ---------------------------------------------------------------------------
// Decision measurement

struct DecisionOutcome {
    std::optional<Arm> arm;  // empty = strict-policy no-play
    QutritState post;        // post-measurement state (state_carrying mode)
    double p_a_pre = 0.0;    // raw Born probabilities before measuring
    double p_b_pre = 0.0;
};

// Three-outcome measurement {M_A, M_B, M_perp}, sampled with one uniform in
// the fixed threshold order (A, B, perp). Under postselect a perp outcome is
// resolved into a decision with a second draw at P(A)/(P(A)+P(B)); under
// strict it stands as a no-play and (state mode) collapses onto M_perp.
template <class Rng>
DecisionOutcome qtow_decide(const QutritState& psi, AgentMode mode, PerpPolicy policy,
                            Rng& rng) {
    DecisionOutcome out;
    out.p_a_pre = born_probability(psi, projector_a());
    out.p_b_pre = born_probability(psi, projector_b());

    const double u = rng.uniform();
    int outcome;  // 0 = A, 1 = B, 2 = perp
    if (u < out.p_a_pre)
        outcome = 0;
    else if (u < out.p_a_pre + out.p_b_pre)
        outcome = 1;
    else
        outcome = 2;

    if (outcome == 2) {
        if (policy == PerpPolicy::postselect) {
            const double decision_mass = out.p_a_pre + out.p_b_pre;
            if (decision_mass < kTolZeroBranch)
                throw ForcedPerpOutcome("decision subspace carries no amplitude (mu = 1)");
            outcome = (rng.uniform() < out.p_a_pre / decision_mass) ? 0 : 1;
        } else {
            if (mode == AgentMode::state_carrying)
                out.post = lueders_collapse(psi, projector_perp()).state;
            return out;  // no-play
        }
    }

    out.arm = (outcome == 0) ? Arm::A : Arm::B;
    if (mode == AgentMode::state_carrying) {
        const Operator& proj = (*out.arm == Arm::A) ? projector_a() : projector_b();
        out.post = lueders_collapse(psi, proj).state;
    }
    return out;
}

template <class Rng>
DecisionOutcome qtow_decide(const AgentState& st, const AgentConfig& cfg, Rng& rng) {
    const QutritState psi =
        st.is_device() ? prepare_device_state(st.params().alpha, st.params().mu) : st.psi();
    return qtow_decide(psi, cfg.mode, cfg.perp_policy, rng);
}

// ---------------------------------------------------------------------------
// Learning updates

// Strength value feeding w for this trial: the exact configured g under
// known_g, the running estimate otherwise.
inline double effective_g(const AgentState& st, const AgentConfig& cfg) {
    return cfg.estimator == EstimatorKind::known_g ? cfg.known_g : st.g_hat;
}

// Rotation sign that moves weight toward arm A: dP(A)/d(angle) equals
// -2·Re(<A|psi><psi|B>), so descend that overlap. Zero overlap (a pole)
// keeps the declared default of -1.
inline double toward_a_sign(double decision_overlap) {
    return decision_overlap >= 0.0 ? -1.0 : 1.0;
}

// Reward-conditioned decision-subspace rotation plus (classical estimator)
// the g_hat step. Returns the loss angle phi = w(g_hat)·theta computed for
// this trial.
inline double qtow_learning_update(AgentState& st, Arm arm, RewardOutcome outcome,
                                   const AgentConfig& cfg) {
    const double phi = asymmetry_w(effective_g(st, cfg), cfg.epsilon) * cfg.theta;
    const double overlap =
        st.is_device() ? std::sin(2.0 * st.params().alpha)
                       : (st.psi().amp[0] * std::conj(st.psi().amp[1])).real();
    const double toward_chosen =
        (arm == Arm::A) ? toward_a_sign(overlap) : -toward_a_sign(overlap);
    const double delta = outcome.win ? toward_chosen * cfg.theta : -toward_chosen * phi;

    if (st.is_device())
        st.params().alpha = wrap_angle(st.params().alpha + delta);
    else
        st.psi() = apply_unitary(st.psi(), rotation_ab(delta));

    if (cfg.estimator == EstimatorKind::classical)
        st.g_hat = estimator_step(st.g_hat, outcome.indicator(), cfg.eta, cfg.epsilon);
    return phi;
}

// Quantum-memory feedback (no-op for other estimators).
//
//   device  mu <- clamp(mu + eta_mu (I - mu)); g_hat = 2 mu stays exact.
//   state   rotate the chosen arm's (arm, perp) plane by +kappa on a win
//           (amplitude toward perp) and -kappa on a loss, then read
//           mu = |<perp|psi>|^2 back into g_hat = 2 mu.
inline void memory_feedback(AgentState& st, Arm arm, int indicator, const AgentConfig& cfg) {
    if (cfg.estimator != EstimatorKind::quantum_memory) return;

    if (st.is_device()) {
        double mu = st.params().mu + cfg.eta_mu * (static_cast<double>(indicator) - st.params().mu);
        if (mu < cfg.mu_min()) mu = cfg.mu_min();
        if (mu > cfg.mu_max()) mu = cfg.mu_max();
        st.params().mu = mu;
        st.g_hat = 2.0 * mu;
    } else {
        const double angle = indicator == 1 ? cfg.kappa : -cfg.kappa;
        const Operator rot = (arm == Arm::A) ? rotation_a_perp(angle) : rotation_b_perp(angle);
        st.psi() = apply_unitary(st.psi(), rot);
        const double mu = std::norm(st.psi().amp[2]);
        st.g_hat = std::min(std::max(2.0 * mu, cfg.epsilon), 2.0 - cfg.epsilon);
    }
}

// ---------------------------------------------------------------------------
// Trial and episode composition

struct TrialContext {
    std::uint64_t t = 0;
    double cum_regret = 0.0;
};

// decide -> reward -> learning update -> memory feedback, then log.
// A strict-mode no-play skips reward and all updates; regret still accrues
// the best arm's expected reward.
template <class Rng>
TrialRecord run_trial(AgentState& st, const AgentConfig& cfg, const BanditEnv& env,
                      Rng& rng, TrialContext& ctx) {
    TrialRecord rec;
    rec.t = ctx.t++;

    const DecisionOutcome decision = qtow_decide(st, cfg, rng);
    rec.p_a_pre = decision.p_a_pre;

    if (!decision.arm) {
        if (!st.is_device()) st.psi() = decision.post;
        ctx.cum_regret += env.best_prob();
        rec.g_hat = st.g_hat;
        rec.mu = st.mu_readout();
        rec.cum_regret = ctx.cum_regret;
        return rec;
    }

    if (!st.is_device()) st.psi() = decision.post;
    const Arm arm = *decision.arm;
    const RewardOutcome outcome = sample_reward(env, arm, rng);
    ctx.cum_regret += env.best_prob() - env.arm_prob(arm);

    rec.phi = qtow_learning_update(st, arm, outcome, cfg);
    memory_feedback(st, arm, outcome.indicator(), cfg);

    rec.arm = arm;
    rec.reward = outcome.indicator();
    rec.g_hat = st.g_hat;
    rec.mu = st.mu_readout();
    rec.cum_regret = ctx.cum_regret;
    return rec;
}

inline EpisodeResult run_episode(const AgentConfig& cfg, const BanditEnv& env,
                                 std::uint64_t trials, std::uint64_t seed) {
    require_env(env);
    AgentState st = make_agent_state(cfg);
    Xoshiro256pp rng(seed);
    TrialContext ctx;
    EpisodeResult result;
    result.trajectory.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t)
        result.trajectory.push_back(run_trial(st, cfg, env, rng, ctx));
    result.summary = summarize(result.trajectory);
    return result;
}

}  // namespace qtow
