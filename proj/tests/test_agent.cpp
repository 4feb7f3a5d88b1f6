#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qtow/agent.hpp"

using namespace qtow;
using std::numbers::pi;

namespace {

AgentConfig device_defaults() { return AgentConfig{}; }

AgentConfig state_defaults() {
    AgentConfig cfg;
    cfg.mode = AgentMode::state_carrying;
    return cfg;
}

}  // namespace

// ---------------------------------------------------------------------------
// asymmetry_w / estimator_step

TEST_CASE("asymmetry spot values", "[agent]") {
    REQUIRE(asymmetry_w(0.0) == 0.0);
    REQUIRE(asymmetry_w(1.0) == 1.0);
    REQUIRE(std::abs(asymmetry_w(0.5) - 1.0 / 3.0) <= 1e-16);
    REQUIRE(std::abs(asymmetry_w(1.9) - 19.0) < 1e-12);
}

TEST_CASE("asymmetry is monotone and clamps the singularity", "[agent]") {
    double prev = -1.0;
    for (double g = 0.0; g <= 1.95; g += 0.05) {
        const double w = asymmetry_w(g);
        REQUIRE(w > prev);
        prev = w;
    }
    const double eps = 0.01;
    REQUIRE(asymmetry_w(2.0, eps) == asymmetry_w(2.0 - eps, eps));
    REQUIRE(std::abs(asymmetry_w(5.0, eps) - 199.0) < 1e-9);
    REQUIRE(asymmetry_w(-1.0, eps) == 0.0);
}

TEST_CASE("estimator step drifts toward the indicator and stays clamped", "[agent]") {
    REQUIRE(std::abs(estimator_step(0.5, 1, 0.1, 0.01) - 0.55) < 1e-15);
    REQUIRE(estimator_step(0.01, 0, 0.3, 0.01) == 0.01);  // projection floor
    REQUIRE(estimator_step(1.0, 1, 0.3, 0.01) == 1.0);    // unclamped fixed point at g = I
    const double down = estimator_step(1.99, 0, 0.5, 0.01);
    REQUIRE(std::abs(down - 0.995) < 1e-15);
}

// w(2 mu) == mu / (1 - mu) holds bit-exactly: the factor-two rescaling of
// numerator and denominator commutes with rounding.
TEST_CASE("memory readout composes exactly with the asymmetry law", "[agent][property]") {
    const double eps = 0.01;
    for (int i = 0; i <= 1000; ++i) {
        const double mu = (1.0 - eps / 2.0) * static_cast<double>(i) / 1000.0;
        REQUIRE(asymmetry_w(2.0 * mu, eps) == mu / (1.0 - mu));
    }
}

// ---------------------------------------------------------------------------
// prepare_device_state / qtow_decide

TEST_CASE("device preparation lays out the declared amplitudes", "[agent]") {
    const QutritState fair = prepare_device_state(pi / 4, 0.0);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    REQUIRE(std::abs(fair.amp[0].real() - inv_sqrt2) < 1e-15);
    REQUIRE(std::abs(fair.amp[1].real() - inv_sqrt2) < 1e-15);
    REQUIRE(fair.amp[2] == cdouble(0.0));

    const QutritState all_memory = prepare_device_state(1.234, 1.0);
    REQUIRE(max_abs_diff(all_memory, QutritState::basis_perp()) == 0.0);

    const QutritState half = prepare_device_state(0.0, 0.5);
    REQUIRE(std::abs(born_probability(half, projector_a()) - 0.5) < 1e-15);
    REQUIRE(std::abs(born_probability(half, projector_perp()) - 0.5) < 1e-15);

    REQUIRE_THROWS_AS(prepare_device_state(0.0, 1.5), PreconditionError);
}

TEST_CASE("decisions on pure decision states are certain", "[agent]") {
    Xoshiro256pp rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto outcome =
            qtow_decide(QutritState::basis_a(), AgentMode::device, PerpPolicy::postselect, rng);
        REQUIRE(outcome.arm == Arm::A);
        REQUIRE(outcome.p_a_pre == 1.0);
    }
}

TEST_CASE("an empty decision subspace forces the perp error under postselect", "[agent]") {
    Xoshiro256pp rng(2);
    bool threw = false;
    for (int i = 0; i < 64 && !threw; ++i) {
        try {
            (void)qtow_decide(QutritState::basis_perp(), AgentMode::device,
                              PerpPolicy::postselect, rng);
        } catch (const ForcedPerpOutcome&) {
            threw = true;
        }
    }
    REQUIRE(threw);
}

TEST_CASE("postselect resolves perp outcomes by conditional Born weights", "[agent]") {
    Xoshiro256pp rng(3);
    const QutritState psi = prepare_device_state(pi / 4, 0.5);
    const int n = 100000;
    int a_count = 0;
    for (int i = 0; i < n; ++i) {
        const auto outcome = qtow_decide(psi, AgentMode::device, PerpPolicy::postselect, rng);
        REQUIRE(outcome.arm.has_value());
        if (*outcome.arm == Arm::A) ++a_count;
    }
    const double sigma = std::sqrt(0.25 / n);
    REQUIRE(std::abs(static_cast<double>(a_count) / n - 0.5) < 3.0 * sigma);
}

TEST_CASE("strict policy records no-plays and collapses onto the memory mode", "[agent]") {
    Xoshiro256pp rng(4);
    const auto outcome = qtow_decide(QutritState::basis_perp(), AgentMode::state_carrying,
                                     PerpPolicy::strict, rng);
    REQUIRE_FALSE(outcome.arm.has_value());
    REQUIRE(max_abs_diff(outcome.post, QutritState::basis_perp()) < 1e-12);
}

TEST_CASE("state-carrying decisions collapse onto the chosen arm", "[agent]") {
    Xoshiro256pp rng(5);
    const QutritState psi = prepare_device_state(1.1, 0.2);
    for (int i = 0; i < 200; ++i) {
        const auto outcome =
            qtow_decide(psi, AgentMode::state_carrying, PerpPolicy::postselect, rng);
        const Operator& proj = (*outcome.arm == Arm::A) ? projector_a() : projector_b();
        REQUIRE(std::abs(expectation(outcome.post, proj) - 1.0) < 1e-12);
    }
}

// ---------------------------------------------------------------------------
// qtow_learning_update / memory_feedback

TEST_CASE("win on A rotates the device angle toward A", "[agent]") {
    AgentConfig cfg = device_defaults();
    AgentState st = make_agent_state(cfg);
    st.params().alpha = 0.0;  // the pole: zero gradient, declared default sign
    qtow_learning_update(st, Arm::A, {true}, cfg);
    REQUIRE(std::abs(st.params().alpha + cfg.theta) < 1e-15);  // alpha = -0.1
}

TEST_CASE("wins rotate along the shorter arc toward the chosen arm", "[agent]") {
    AgentConfig cfg = device_defaults();
    AgentState st = make_agent_state(cfg);

    // from either side of the A pole a win on A must raise P(A)
    for (double alpha0 : {0.3, -0.3, std::numbers::pi - 0.3}) {
        st.params().alpha = alpha0;
        const double before = std::cos(alpha0) * std::cos(alpha0);
        qtow_learning_update(st, Arm::A, {true}, cfg);
        const double after = std::pow(std::cos(st.params().alpha), 2);
        REQUIRE(after > before);
    }

    // and a win on B must raise P(B)
    for (double alpha0 : {0.3, -0.3, 1.2}) {
        st.params().alpha = alpha0;
        const double before = std::pow(std::sin(alpha0), 2);
        qtow_learning_update(st, Arm::B, {true}, cfg);
        REQUIRE(std::pow(std::sin(st.params().alpha), 2) > before);
    }

    // losses rotate the other way
    st.params().alpha = 0.3;
    qtow_learning_update(st, Arm::A, {false}, cfg);
    REQUIRE(st.params().alpha > 0.3);
}

TEST_CASE("a symmetric loss rotates the state fully across at theta = pi/2", "[agent]") {
    AgentConfig cfg = state_defaults();
    cfg.theta = pi / 2;
    cfg.estimator = EstimatorKind::known_g;
    cfg.known_g = 1.0;  // phi = theta
    AgentState st = make_agent_state(cfg);
    st.psi() = QutritState::basis_a();
    qtow_learning_update(st, Arm::A, {false}, cfg);
    REQUIRE(std::abs(born_probability(st.psi(), projector_b()) - 1.0) < 1e-12);
}

TEST_CASE("the loss angle scales by the asymmetry of the current estimate", "[agent]") {
    AgentConfig cfg = device_defaults();
    cfg.initial_g_hat = 0.5;
    AgentState st = make_agent_state(cfg);
    const double phi = qtow_learning_update(st, Arm::B, {true}, cfg);
    REQUIRE(std::abs(phi - cfg.theta / 3.0) < 1e-15);
}

TEST_CASE("device memory feedback drifts mu and keeps g_hat = 2 mu exact", "[agent]") {
    AgentConfig cfg = device_defaults();
    cfg.estimator = EstimatorKind::quantum_memory;
    cfg.eta_mu = 0.1;
    AgentState st = make_agent_state(cfg);
    memory_feedback(st, Arm::A, 1, cfg);
    REQUIRE(std::abs(st.params().mu - 0.55) < 1e-15);
    REQUIRE(st.g_hat == 2.0 * st.params().mu);

    // clamp boundaries are fixed points of the drift
    st.params().mu = cfg.mu_max();
    memory_feedback(st, Arm::A, 1, cfg);
    REQUIRE(st.params().mu == cfg.mu_max());
    st.params().mu = cfg.mu_min();
    memory_feedback(st, Arm::B, 0, cfg);
    REQUIRE(st.params().mu == cfg.mu_min());
}

TEST_CASE("state-carrying memory feedback moves amplitude into the memory mode", "[agent]") {
    AgentConfig cfg = state_defaults();
    cfg.estimator = EstimatorKind::quantum_memory;
    cfg.kappa = pi / 6;
    AgentState st = make_agent_state(cfg);
    st.psi() = QutritState::basis_a();  // post-decision survivor
    memory_feedback(st, Arm::A, 1, cfg);
    REQUIRE(std::abs(st.mu_readout() - 0.25) < 1e-15);  // sin^2(pi/6)
    REQUIRE(std::abs(st.g_hat - 0.5) < 1e-15);

    // the B branch leaves |A> untouched
    st.psi() = QutritState::basis_a();
    memory_feedback(st, Arm::B, 0, cfg);
    REQUIRE(max_abs_diff(st.psi(), QutritState::basis_a()) == 0.0);
}

// ---------------------------------------------------------------------------
// run_trial / run_episode

TEST_CASE("a certain environment rewards exactly the chosen arm", "[agent]") {
    AgentConfig cfg = device_defaults();
    cfg.initial_mu = 0.0;
    AgentState st = make_agent_state(cfg);
    Xoshiro256pp rng(6);
    TrialContext ctx;
    for (int t = 0; t < 200; ++t) {
        const TrialRecord rec = run_trial(st, cfg, {1.0, 0.0}, rng, ctx);
        REQUIRE(rec.arm.has_value());
        REQUIRE(*rec.reward == (*rec.arm == Arm::A ? 1 : 0));
    }
}

TEST_CASE("strict mode starting in the memory state never plays", "[agent]") {
    AgentConfig cfg = state_defaults();
    cfg.perp_policy = PerpPolicy::strict;
    cfg.initial_mu = 1.0;  // |perp>
    const BanditEnv env{0.8, 0.2};
    const EpisodeResult result = run_episode(cfg, env, 50, 7);
    REQUIRE(result.summary.no_plays == 50);
    REQUIRE(result.summary.plays == 0);
    REQUIRE(std::abs(result.summary.cum_regret - 50 * 0.8) < 1e-12);
}

TEST_CASE("single-trial episodes summarize that trial", "[agent]") {
    const EpisodeResult result = run_episode(device_defaults(), {0.8, 0.2}, 1, 8);
    REQUIRE(result.trajectory.size() == 1);
    REQUIRE(result.summary.trials == 1);
    REQUIRE(result.summary.plays == 1);
    REQUIRE(result.summary.freq_a == (*result.trajectory[0].arm == Arm::A ? 1.0 : 0.0));
    REQUIRE(result.summary.cum_regret == result.trajectory[0].cum_regret);
}

TEST_CASE("episodes replay bit-identically for a fixed seed", "[agent]") {
    for (const AgentConfig& cfg : {device_defaults(), state_defaults()}) {
        const EpisodeResult a = run_episode(cfg, {0.8, 0.2}, 400, 12345);
        const EpisodeResult b = run_episode(cfg, {0.8, 0.2}, 400, 12345);
        REQUIRE(a.trajectory.size() == b.trajectory.size());
        for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
            REQUIRE(a.trajectory[i].arm == b.trajectory[i].arm);
            REQUIRE(a.trajectory[i].reward == b.trajectory[i].reward);
            REQUIRE(a.trajectory[i].p_a_pre == b.trajectory[i].p_a_pre);
            REQUIRE(a.trajectory[i].g_hat == b.trajectory[i].g_hat);
            REQUIRE(a.trajectory[i].mu == b.trajectory[i].mu);
            REQUIRE(a.trajectory[i].phi == b.trajectory[i].phi);
            REQUIRE(a.trajectory[i].cum_regret == b.trajectory[i].cum_regret);
        }
    }
    const EpisodeResult c = run_episode(device_defaults(), {0.8, 0.2}, 400, 1);
    const EpisodeResult d = run_episode(device_defaults(), {0.8, 0.2}, 400, 2);
    bool differs = false;
    for (std::size_t i = 0; i < c.trajectory.size() && !differs; ++i)
        differs = c.trajectory[i].arm != d.trajectory[i].arm;
    REQUIRE(differs);
}

TEST_CASE("the persistent state keeps unit norm across a long episode", "[agent][property]") {
    AgentConfig cfg = state_defaults();
    cfg.estimator = EstimatorKind::quantum_memory;
    AgentState st = make_agent_state(cfg);
    Xoshiro256pp rng(13);
    TrialContext ctx;
    const BanditEnv env{0.7, 0.4};
    for (int t = 0; t < 5000; ++t) {
        (void)run_trial(st, cfg, env, rng, ctx);
        REQUIRE(std::abs(st.psi().norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("estimator trace stays inside the clamp interval", "[agent][property]") {
    AgentConfig cfg = device_defaults();
    const EpisodeResult result = run_episode(cfg, {0.9, 0.8}, 3000, 14);
    for (const auto& rec : result.trajectory) {
        REQUIRE(*rec.g_hat >= cfg.epsilon);
        REQUIRE(*rec.g_hat <= 2.0 - cfg.epsilon);
    }
}

TEST_CASE("device memory identity g_hat = 2 mu holds along whole episodes",
          "[agent][property]") {
    AgentConfig cfg = device_defaults();
    cfg.estimator = EstimatorKind::quantum_memory;
    const EpisodeResult result = run_episode(cfg, {0.8, 0.2}, 3000, 15);
    for (const auto& rec : result.trajectory) {
        REQUIRE(*rec.mu >= 0.0);
        REQUIRE(*rec.mu <= 1.0);
        REQUIRE(*rec.g_hat == 2.0 * *rec.mu);
    }
}

TEST_CASE("frozen dynamics reproduce the prepared Born statistics", "[agent][property]") {
    AgentConfig cfg = device_defaults();
    cfg.theta = 0.0;
    cfg.initial_alpha = pi / 3;  // conditional P(A) = cos^2 = 0.25
    cfg.initial_mu = 0.4;
    const EpisodeResult result = run_episode(cfg, {0.5, 0.5}, 20000, 16);
    const double sigma = std::sqrt(0.25 * 0.75 / 20000.0);
    REQUIRE(std::abs(result.summary.freq_a - 0.25) < 3.0 * sigma);
}

TEST_CASE("mirrored environments give mirrored decision statistics", "[agent][property]") {
    // exact mirror at the Born level
    for (double alpha : {0.3, 0.7, 1.2}) {
        const QutritState psi = prepare_device_state(alpha, 0.3);
        const QutritState mirrored = prepare_device_state(pi / 2 - alpha, 0.3);
        REQUIRE(std::abs(born_probability(psi, projector_a()) -
                         born_probability(mirrored, projector_b())) < 1e-15);
    }

    // statistical mirror of full learning runs under swapped arms
    AgentConfig cfg = device_defaults();  // initial alpha pi/4 is self-mirrored
    const int runs = 20;
    double mean_a = 0.0, mean_b = 0.0, sq_a = 0.0, sq_b = 0.0;
    for (int r = 0; r < runs; ++r) {
        const double fa =
            run_episode(cfg, {0.8, 0.2}, 4000, derive_seed(100, r)).summary.freq_a;
        const double fb =
            run_episode(cfg, {0.2, 0.8}, 4000, derive_seed(200, r)).summary.freq_b;
        mean_a += fa;
        mean_b += fb;
        sq_a += fa * fa;
        sq_b += fb * fb;
    }
    mean_a /= runs;
    mean_b /= runs;
    const double var_a = sq_a / runs - mean_a * mean_a;
    const double var_b = sq_b / runs - mean_b * mean_b;
    const double se = std::sqrt((var_a + var_b) / runs);
    REQUIRE(std::abs(mean_a - mean_b) < 4.0 * se + 0.02);
}

TEST_CASE("a known strength bypasses estimation entirely", "[agent]") {
    AgentConfig cfg = device_defaults();
    cfg.estimator = EstimatorKind::known_g;
    cfg.known_g = 0.5;
    const EpisodeResult result = run_episode(cfg, {0.3, 0.2}, 500, 18);
    for (const auto& rec : result.trajectory) {
        REQUIRE(*rec.g_hat == 0.5);  // never updated
        if (rec.phi) REQUIRE(std::abs(*rec.phi - cfg.theta / 3.0) < 1e-15);  // w(0.5) = 1/3
    }
}

TEST_CASE("device strict mode with an all-memory preparation never plays", "[agent]") {
    AgentConfig cfg = device_defaults();
    cfg.perp_policy = PerpPolicy::strict;
    cfg.initial_mu = 1.0;
    const EpisodeResult result = run_episode(cfg, {0.8, 0.2}, 20, 19);
    REQUIRE(result.summary.plays == 0);
    REQUIRE(result.summary.no_plays == 20);
}

TEST_CASE("an all-memory preparation under postselect surfaces the forced-perp error",
          "[agent]") {
    AgentConfig cfg = device_defaults();
    cfg.initial_mu = 1.0;
    REQUIRE_THROWS_AS(run_episode(cfg, {0.8, 0.2}, 10, 20), ForcedPerpOutcome);
}

TEST_CASE("regret is nondecreasing and counts missed best-arm mass", "[agent][property]") {
    const EpisodeResult result = run_episode(device_defaults(), {0.8, 0.2}, 2000, 17);
    double prev = 0.0;
    for (const auto& rec : result.trajectory) {
        REQUIRE(rec.cum_regret >= prev);
        prev = rec.cum_regret;
    }
    REQUIRE(result.summary.cum_regret < 2000 * 0.6);  // never worse than always-B
}
