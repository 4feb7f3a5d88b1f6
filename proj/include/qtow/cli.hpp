#pragma once
// Command-line wiring. The experiment is chosen by subcommand; every option
// lives on the root command and falls through, so a config file stays a
// flat key=value list mirroring the flag names. Precedence: flags override
// config-file values, which override the QTOW_SEED environment variable.

#include <cstdint>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qtow/harness.hpp"
#include "qtow/version.hpp"

namespace qtow {

inline void attach_cli(CLI::App& app, ExperimentConfig& cfg) {
    app.description("Quantum tug-of-war bandit simulator and contextuality-witness toolkit");
    app.set_version_flag("--version", std::string("qtow ") + QTOW_VERSION);
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value config file (flags take precedence)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    app.add_option("--seed", cfg.seed, "Base seed; run k uses derive_seed(seed, k)")
        ->envname("QTOW_SEED")
        ->capture_default_str();
    app.add_option("--out", cfg.out, "Output directory (created if missing)");
    app.add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                {"json", OutputFormat::json}},
            CLI::ignore_case))
        ->default_str("json");
    app.add_option("--runs", cfg.runs, "Independent runs")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{10000000}))
        ->capture_default_str();
    app.add_option("--trials", cfg.trials, "Trials per run")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000000000}))
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();

    app.add_option("--pa", cfg.p_a, "Reward probability of arm A")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--pb", cfg.p_b, "Reward probability of arm B")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--theta", cfg.agent.theta, "Win rotation angle (radians)")
        ->capture_default_str();
    app.add_option("--eta", cfg.agent.eta, "Estimator learning rate")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    app.add_option("--epsilon", cfg.agent.epsilon, "Estimator clamp margin")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    app.add_option("--eta-mu", cfg.agent.eta_mu, "Memory drift rate (device + memory estimator)")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    app.add_option("--kappa", cfg.agent.kappa, "Memory rotation angle (state + memory estimator)")
        ->capture_default_str();
    app.add_option("--mode", cfg.agent.mode, "Agent realization")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, AgentMode>{{"device", AgentMode::device},
                                             {"state", AgentMode::state_carrying}},
            CLI::ignore_case))
        ->default_str("device");
    app.add_option("--perp-policy", cfg.agent.perp_policy, "Handling of the perp outcome")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, PerpPolicy>{{"postselect", PerpPolicy::postselect},
                                              {"strict", PerpPolicy::strict}},
            CLI::ignore_case))
        ->default_str("postselect");
    app.add_option("--estimator", cfg.agent.estimator, "Strength estimator")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, EstimatorKind>{{"known", EstimatorKind::known_g},
                                                 {"classical", EstimatorKind::classical},
                                                 {"memory", EstimatorKind::quantum_memory}},
            CLI::ignore_case))
        ->default_str("classical");
    app.add_option("--g", cfg.agent.known_g, "True strength g (estimator = known)")
        ->check(CLI::Range(0.0, 2.0))
        ->capture_default_str();
    app.add_option("--sigma", cfg.sigma, "Classical-baseline fluctuation amplitude")
        ->check(CLI::Range(0.0, 1e9))
        ->capture_default_str();

    app.add_option_function<std::string>(
           "--beta-grid",
           [&cfg](const std::string& text) {
               try {
                   cfg.beta_grid = BetaGrid::parse(text);
               } catch (const PreconditionError& e) {
                   throw CLI::ValidationError("--beta-grid", e.what());
               }
           },
           "Probe angle sweep start:stop:step (radians)")
        ->default_str(cfg.beta_grid.to_string());
    app.add_option_function<std::string>(
           "--state",
           [&cfg](const std::string& text) {
               try {
                   cfg.state = StateSpec::parse(text);
               } catch (const PreconditionError& e) {
                   throw CLI::ValidationError("--state", e.what());
               }
           },
           "Probed state: perp | A | B | a0,a1,a2")
        ->default_str("perp");
    app.add_option("--samples", cfg.samples, "Monte Carlo samples (per beta / per context)")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000000000}))
        ->capture_default_str();

    const std::map<std::string, ExperimentKind> kinds{
        {"kcbs", ExperimentKind::kcbs},
        {"lemma-a1", ExperimentKind::probe_disturbance},
        {"bandit", ExperimentKind::bandit},
        {"estimator", ExperimentKind::estimator},
        {"compare", ExperimentKind::compare},
    };
    static const std::map<std::string, std::string> blurbs{
        {"kcbs", "Analytic and sampled five-cycle witness"},
        {"lemma-a1", "Probe-disturbance sweep over the probe angle"},
        {"bandit", "Quantum tug-of-war bandit runs"},
        {"estimator", "Strength-estimator traces (tip: --theta 0 freezes the policy)"},
        {"compare", "Quantum vs classical vs uniform baselines on shared seeds"},
    };
    for (const auto& [name, kind] : kinds) {
        CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
        sub->fallthrough();
        ExperimentKind k = kind;
        sub->callback([&cfg, k] { cfg.experiment = k; });
    }
}

}  // namespace qtow
