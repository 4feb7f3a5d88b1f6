#pragma once
// Batch experiment runner: validated configuration, seeded reproducible
// execution with run-level parallelism, and CSV/JSON emission.
//
// Determinism contract: every emitted byte except the wall_clock_seconds
// field of meta.json is a pure function of the configuration. Run k draws
// from the stream seeded with derive_seed(seed, k), so worker count and
// scheduling never change results.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qtow/agent.hpp"
#include "qtow/classical_tow.hpp"
#include "qtow/contextuality.hpp"
#include "qtow/emit.hpp"
#include "qtow/version.hpp"

namespace qtow {

enum class ExperimentKind { kcbs, probe_disturbance, bandit, estimator, compare };
enum class OutputFormat { csv, json };

inline const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::kcbs: return "kcbs";
        case ExperimentKind::probe_disturbance: return "lemma-a1";
        case ExperimentKind::bandit: return "bandit";
        case ExperimentKind::estimator: return "estimator";
        case ExperimentKind::compare: return "compare";
    }
    return "?";
}

inline const char* format_name(OutputFormat f) {
    return f == OutputFormat::csv ? "csv" : "json";
}

inline const char* mode_name(AgentMode m) {
    return m == AgentMode::device ? "device" : "state";
}

inline const char* policy_name(PerpPolicy p) {
    return p == PerpPolicy::postselect ? "postselect" : "strict";
}

inline const char* estimator_name(EstimatorKind e) {
    switch (e) {
        case EstimatorKind::known_g: return "known";
        case EstimatorKind::classical: return "classical";
        case EstimatorKind::quantum_memory: return "memory";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Sweep / state selection

struct StateSpec {
    enum class Kind { perp, a, b, custom } kind = Kind::perp;
    std::array<double, 3> amplitudes{0.0, 0.0, 1.0};

    QutritState make() const {
        switch (kind) {
            case Kind::perp: return QutritState::basis_perp();
            case Kind::a: return QutritState::basis_a();
            case Kind::b: return QutritState::basis_b();
            case Kind::custom: break;
        }
        QutritState psi{amplitudes[0], amplitudes[1], amplitudes[2]};
        require_normalized(psi);
        return psi;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::perp: return "perp";
            case Kind::a: return "A";
            case Kind::b: return "B";
            case Kind::custom: break;
        }
        return fmt_double(amplitudes[0]) + "," + fmt_double(amplitudes[1]) + "," +
               fmt_double(amplitudes[2]);
    }

    // "perp" | "A" | "B" | "a0,a1,a2" (real amplitudes, unit norm)
    static StateSpec parse(const std::string& text) {
        StateSpec spec;
        if (text == "perp") return spec;
        if (text == "A" || text == "a") {
            spec.kind = Kind::a;
            return spec;
        }
        if (text == "B" || text == "b") {
            spec.kind = Kind::b;
            return spec;
        }
        spec.kind = Kind::custom;
        std::size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
            std::size_t used = 0;
            try {
                spec.amplitudes[i] = std::stod(text.substr(pos), &used);
            } catch (const std::exception&) {
                throw PreconditionError("state: expected perp|A|B or three comma-separated "
                                        "amplitudes, got '" + text + "'");
            }
            pos += used;
            if (i < 2) {
                if (pos >= text.size() || text[pos] != ',')
                    throw PreconditionError("state: expected three comma-separated amplitudes");
                ++pos;
            }
        }
        if (pos != text.size())
            throw PreconditionError("state: trailing characters in '" + text + "'");
        spec.make();  // norm check
        return spec;
    }
};

struct BetaGrid {
    double start = 0.0;
    double stop = std::numbers::pi / 2.0;
    double step = 0.1;

    std::vector<double> points() const {
        if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start) || !std::isfinite(stop))
            throw PreconditionError("beta-grid: need finite start:stop:step with step > 0");
        if (stop < start) throw PreconditionError("beta-grid: stop < start");
        std::vector<double> pts;
        for (std::uint64_t k = 0;; ++k) {
            const double beta = start + static_cast<double>(k) * step;
            if (beta > stop + 1e-12) break;
            if (pts.size() >= 100000) throw PreconditionError("beta-grid: more than 1e5 points");
            pts.push_back(beta);
        }
        return pts;
    }

    std::string to_string() const {
        return fmt_double(start) + ":" + fmt_double(stop) + ":" + fmt_double(step);
    }

    static BetaGrid parse(const std::string& text) {
        BetaGrid grid;
        const auto first = text.find(':');
        const auto second = text.find(':', first == std::string::npos ? first : first + 1);
        if (first == std::string::npos || second == std::string::npos)
            throw PreconditionError("beta-grid: expected start:stop:step, got '" + text + "'");
        try {
            grid.start = std::stod(text.substr(0, first));
            grid.stop = std::stod(text.substr(first + 1, second - first - 1));
            grid.step = std::stod(text.substr(second + 1));
        } catch (const std::exception&) {
            throw PreconditionError("beta-grid: expected start:stop:step, got '" + text + "'");
        }
        grid.points();  // validates
        return grid;
    }
};

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::bandit;
    double p_a = 0.8;
    double p_b = 0.2;
    AgentConfig agent;
    double sigma = 1.0;  // classical-baseline fluctuation (compare)
    std::uint64_t trials = 20000;
    std::uint64_t runs = 100;
    std::uint64_t seed = 42;
    std::string out;  // output directory; empty = compute only
    OutputFormat format = OutputFormat::json;
    BetaGrid beta_grid{};
    StateSpec state{};
    std::uint64_t samples = 100000;
    unsigned workers = 0;  // 0 = hardware concurrency

    BanditEnv env() const { return {p_a, p_b}; }
};

inline void validate_config(const ExperimentConfig& cfg) {
    require_env(cfg.env());
    require_agent_config(cfg.agent);
    if (cfg.trials < 1) throw PreconditionError("trials must be >= 1");
    if (cfg.runs < 1) throw PreconditionError("runs must be >= 1");
    if (cfg.samples < 1) throw PreconditionError("samples must be >= 1");
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma))
        throw PreconditionError("sigma must be finite and >= 0");
    cfg.beta_grid.points();
    cfg.state.make();
}

// Flat config echo mirroring the CLI flag names; embedded in every output.
inline std::string config_echo_json(const ExperimentConfig& cfg) {
    JsonObject obj;
    obj.field("experiment", experiment_name(cfg.experiment))
        .field("pa", cfg.p_a)
        .field("pb", cfg.p_b)
        .field("theta", cfg.agent.theta)
        .field("eta", cfg.agent.eta)
        .field("epsilon", cfg.agent.epsilon)
        .field("eta-mu", cfg.agent.eta_mu)
        .field("kappa", cfg.agent.kappa)
        .field("mode", mode_name(cfg.agent.mode))
        .field("perp-policy", policy_name(cfg.agent.perp_policy))
        .field("estimator", estimator_name(cfg.agent.estimator))
        .field("g", cfg.agent.known_g)
        .field("sigma", cfg.sigma)
        .field("trials", cfg.trials)
        .field("runs", cfg.runs)
        .field("seed", cfg.seed)
        .field("format", format_name(cfg.format))
        .field("beta-grid", cfg.beta_grid.to_string())
        .field("state", cfg.state.to_string())
        .field("samples", cfg.samples);
    // workers deliberately omitted: execution parameters must not change
    // emitted bytes
    return obj.str();
}

// ---------------------------------------------------------------------------
// Results

struct AgentRunRow {
    std::string agent;
    std::uint64_t run_id = 0;
    std::uint64_t seed_run = 0;
    EpisodeSummary summary;
};

struct ProbeRow {
    double beta = 0.0;
    double p_no_probe = 0.0;
    double p_with_probe = 0.0;
    double p_no_probe_sampled = 0.0;
    double p_with_probe_sampled = 0.0;
    std::uint64_t samples = 0;
};

struct ExperimentResult {
    std::vector<std::string> files;
    double wall_clock_seconds = 0.0;
    std::vector<AgentRunRow> runs;  // bandit / estimator / compare, grouped by agent
    std::optional<WitnessResult> witness;
    std::optional<SampledWitness> sampled_witness;
    std::vector<ProbeRow> probe_rows;
};

// ---------------------------------------------------------------------------
// Baseline agent (uniform-random choice)

inline EpisodeResult uniform_run_episode(const BanditEnv& env, std::uint64_t trials,
                                         std::uint64_t seed) {
    require_env(env);
    Xoshiro256pp rng(seed);
    EpisodeResult result;
    result.trajectory.reserve(trials);
    double cum_regret = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        TrialRecord rec;
        rec.t = t;
        rec.p_a_pre = 0.5;
        const Arm arm = rng.uniform() < 0.5 ? Arm::A : Arm::B;
        const RewardOutcome outcome = sample_reward(env, arm, rng);
        cum_regret += env.best_prob() - env.arm_prob(arm);
        rec.arm = arm;
        rec.reward = outcome.indicator();
        rec.cum_regret = cum_regret;
        result.trajectory.push_back(rec);
    }
    result.summary = summarize(result.trajectory);
    return result;
}

// ---------------------------------------------------------------------------
// Internals

namespace detail {

// Index-sharded worker pool; results are merged by run index, so the
// outcome is identical for any worker count.
template <class Body>
void parallel_for(std::uint64_t count, unsigned workers, Body&& body) {
    if (workers == 0) workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > count) workers = static_cast<unsigned>(count);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline const char* kTrialCsvHeader = "run_id,t,arm,reward,p_a_pre,g_hat,mu,phi_t,cum_regret\n";

inline std::string trial_rows_csv(std::uint64_t run_id, const std::vector<TrialRecord>& records) {
    std::string out;
    out.reserve(records.size() * 48);
    const std::string run = std::to_string(run_id);
    for (const auto& rec : records) {
        out += run;
        out += ',';
        out += std::to_string(rec.t);
        out += ',';
        if (rec.arm) out += arm_label(*rec.arm);
        out += ',';
        if (rec.reward) out += std::to_string(*rec.reward);
        out += ',';
        out += fmt_double(rec.p_a_pre);
        out += ',';
        out += fmt_opt(rec.g_hat);
        out += ',';
        out += fmt_opt(rec.mu);
        out += ',';
        out += fmt_opt(rec.phi);
        out += ',';
        out += fmt_double(rec.cum_regret);
        out += '\n';
    }
    return out;
}

inline std::string trial_rows_json(std::uint64_t run_id, const std::vector<TrialRecord>& records) {
    std::string out;
    out.reserve(records.size() * 96);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        JsonObject obj;
        obj.field("run_id", run_id).field("t", rec.t);
        if (rec.arm)
            obj.field("arm", std::string(1, arm_label(*rec.arm)));
        else
            obj.raw("arm", "null");
        if (rec.reward)
            obj.field("reward", *rec.reward);
        else
            obj.raw("reward", "null");
        obj.field("p_a_pre", rec.p_a_pre)
            .field("g_hat", rec.g_hat)
            .field("mu", rec.mu)
            .field("phi_t", rec.phi)
            .field("cum_regret", rec.cum_regret);
        if (i || run_id) out += ",\n";
        out += obj.str();
    }
    return out;
}

// Fixed emission/aggregation order for per-run summary fields.
inline std::vector<std::pair<const char*, std::optional<double>>> summary_fields(
    const EpisodeSummary& s) {
    return {
        {"trials", static_cast<double>(s.trials)},
        {"plays", static_cast<double>(s.plays)},
        {"no_plays", static_cast<double>(s.no_plays)},
        {"wins", static_cast<double>(s.wins)},
        {"freq_a", s.freq_a},
        {"freq_b", s.freq_b},
        {"terminal_freq_a", s.terminal_freq_a},
        {"terminal_mean_g_hat", s.terminal_mean_g_hat},
        {"terminal_mean_mu", s.terminal_mean_mu},
        {"final_g_hat", s.final_g_hat},
        {"final_mu", s.final_mu},
        {"cum_regret", s.cum_regret},
    };
}

struct FieldStats {
    std::optional<double> mean;
    std::optional<double> stddev;  // sample stddev; 0 when n == 1
};

inline std::vector<std::pair<const char*, FieldStats>> aggregate_fields(
    const std::vector<AgentRunRow*>& rows) {
    std::vector<std::pair<const char*, FieldStats>> out;
    if (rows.empty()) return out;
    const auto names = summary_fields(rows.front()->summary);
    for (std::size_t f = 0; f < names.size(); ++f) {
        double sum = 0.0, sum_sq = 0.0;
        std::uint64_t n = 0;
        for (const AgentRunRow* row : rows) {
            const auto fields = summary_fields(row->summary);
            if (fields[f].second) {
                sum += *fields[f].second;
                sum_sq += *fields[f].second * *fields[f].second;
                ++n;
            }
        }
        FieldStats stats;
        if (n > 0) {
            const double mean = sum / static_cast<double>(n);
            stats.mean = mean;
            stats.stddev = n > 1 ? std::sqrt(std::max(0.0, (sum_sq - static_cast<double>(n) *
                                                                         mean * mean) /
                                                               static_cast<double>(n - 1)))
                                 : 0.0;
        }
        out.emplace_back(names[f].first, stats);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiment execution

namespace detail {

struct EmitBuffer {
    std::vector<std::string> chunks;  // one per run, merged in run order
};

inline void emit_trials_file(const std::filesystem::path& dir, const std::string& stem,
                             OutputFormat format, std::uint64_t seed, const EmitBuffer& buffer,
                             ExperimentResult& result) {
    std::string content;
    if (format == OutputFormat::csv) {
        content = kTrialCsvHeader;
        for (const auto& chunk : buffer.chunks) content += chunk;
    } else {
        content = "{\"seed\":" + std::to_string(seed) + ",\"records\":[\n";
        for (const auto& chunk : buffer.chunks) content += chunk;
        content += "\n]}\n";
    }
    const auto path = dir / (stem + (format == OutputFormat::csv ? ".csv" : ".json"));
    write_text_file(path, content);
    result.files.push_back(path.string());
}

inline void emit_summary(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                         ExperimentResult& result) {
    // group rows by agent, preserving insertion order
    std::vector<std::string> agents;
    for (const auto& row : result.runs)
        if (std::find(agents.begin(), agents.end(), row.agent) == agents.end())
            agents.push_back(row.agent);

    if (cfg.format == OutputFormat::csv) {
        std::string content =
            "agent,run_id,seed_run,trials,plays,no_plays,wins,freq_a,freq_b,terminal_freq_a,"
            "terminal_mean_g_hat,terminal_mean_mu,final_g_hat,final_mu,cum_regret\n";
        for (const auto& agent : agents) {
            std::vector<AgentRunRow*> rows;
            for (auto& row : result.runs)
                if (row.agent == agent) rows.push_back(&row);
            for (const AgentRunRow* row : rows) {
                content += agent + "," + std::to_string(row->run_id) + "," +
                           std::to_string(row->seed_run);
                for (const auto& [name, value] : detail::summary_fields(row->summary)) {
                    (void)name;
                    content += "," + fmt_opt(value);
                }
                content += '\n';
            }
            const auto stats = detail::aggregate_fields(rows);
            for (const char* label : {"mean", "stddev"}) {
                content += agent + "," + label + ",";
                for (const auto& [name, s] : stats) {
                    (void)name;
                    content += "," + fmt_opt(label == std::string("mean") ? s.mean : s.stddev);
                }
                content += '\n';
            }
        }
        const auto path = dir / "summary.csv";
        write_text_file(path, content);
        result.files.push_back(path.string());
    } else {
        JsonArray agent_arr;
        for (const auto& agent : agents) {
            std::vector<AgentRunRow*> rows;
            for (auto& row : result.runs)
                if (row.agent == agent) rows.push_back(&row);
            JsonArray run_arr;
            for (const AgentRunRow* row : rows) {
                JsonObject obj;
                obj.field("run_id", row->run_id).field("seed_run", row->seed_run);
                for (const auto& [name, value] : detail::summary_fields(row->summary))
                    obj.field(name, value);
                run_arr.push_raw(obj.str());
            }
            const auto stats = detail::aggregate_fields(rows);
            JsonObject mean_obj, std_obj;
            for (const auto& [name, s] : stats) {
                mean_obj.field(name, s.mean);
                std_obj.field(name, s.stddev);
            }
            JsonObject agent_obj;
            agent_obj.field("agent", agent)
                .raw("runs", run_arr.str())
                .raw("mean", mean_obj.str())
                .raw("stddev", std_obj.str());
            agent_arr.push_raw(agent_obj.str());
        }
        JsonObject top;
        top.field("experiment", experiment_name(cfg.experiment))
            .field("seed", cfg.seed)
            .raw("config", config_echo_json(cfg))
            .raw("agents", agent_arr.str());
        const auto path = dir / "summary.json";
        write_text_file(path, top.str() + "\n");
        result.files.push_back(path.string());
    }
}

inline void run_bandit_like(const ExperimentConfig& cfg, ExperimentResult& result,
                            const std::filesystem::path& dir, bool emitting) {
    const BanditEnv env = cfg.env();
    const bool compare = cfg.experiment == ExperimentKind::compare;

    std::vector<std::string> agents{"qtow"};
    if (compare) {
        agents.emplace_back("classical");
        agents.emplace_back("uniform");
    }

    struct Slot {
        EpisodeSummary summary;
        std::string chunk;
    };
    std::vector<std::vector<Slot>> slots(agents.size());
    for (auto& s : slots) s.resize(cfg.runs);

    const ClassicalTowAgent classical_init{0.0, cfg.sigma,
                                           asymmetry_w(env.strength(), cfg.agent.epsilon)};

    detail::parallel_for(cfg.runs, cfg.workers, [&](std::uint64_t r) {
        const std::uint64_t seed_run = derive_seed(cfg.seed, r);
        for (std::size_t a = 0; a < agents.size(); ++a) {
            EpisodeResult ep;
            if (agents[a] == "qtow")
                ep = run_episode(cfg.agent, env, cfg.trials, seed_run);
            else if (agents[a] == "classical")
                ep = ctow_run_episode(classical_init, env, cfg.trials, seed_run);
            else
                ep = uniform_run_episode(env, cfg.trials, seed_run);
            Slot& slot = slots[a][r];
            slot.summary = ep.summary;
            if (emitting)
                slot.chunk = cfg.format == OutputFormat::csv
                                 ? detail::trial_rows_csv(r, ep.trajectory)
                                 : detail::trial_rows_json(r, ep.trajectory);
        }
    });

    for (std::size_t a = 0; a < agents.size(); ++a) {
        for (std::uint64_t r = 0; r < cfg.runs; ++r)
            result.runs.push_back({agents[a], r, derive_seed(cfg.seed, r), slots[a][r].summary});
        if (emitting) {
            EmitBuffer buffer;
            for (auto& slot : slots[a]) buffer.chunks.push_back(std::move(slot.chunk));
            const std::string stem = compare ? "trials_" + agents[a] : std::string("trials");
            emit_trials_file(dir, stem, cfg.format, cfg.seed, buffer, result);
        }
    }
    if (emitting) emit_summary(dir, cfg, result);
}

inline void run_kcbs(const ExperimentConfig& cfg, ExperimentResult& result,
                     const std::filesystem::path& dir, bool emitting) {
    const KcbsSet set = build_kcbs();
    const QutritState psi = cfg.state.make();
    result.witness = kcbs_witness(psi, set);
    result.sampled_witness = kcbs_sampled_contexts(psi, set, cfg.samples, cfg.seed);
    if (!emitting) return;

    const WitnessResult& wit = *result.witness;
    const SampledWitness& samp = *result.sampled_witness;
    if (cfg.format == OutputFormat::csv) {
        std::string content =
            "projector,expectation,sampled_estimate,est_first,est_second,marginal_z\n";
        for (int i = 0; i < 5; ++i)
            content += csv_row({std::to_string(i + 1), fmt_double(wit.expectations[i]),
                                fmt_double(samp.estimates[i]),
                                fmt_double(samp.marginals[i].est_first),
                                fmt_double(samp.marginals[i].est_second),
                                fmt_double(samp.marginals[i].z)});
        content += csv_row({"sum", fmt_double(wit.sum), fmt_double(samp.sum), "", "",
                            fmt_double(samp.violation_z)});
        const auto path = dir / "witness.csv";
        write_text_file(path, content);
        result.files.push_back(path.string());
    } else {
        JsonArray expectations, estimates, marginals;
        for (int i = 0; i < 5; ++i) {
            expectations.push(wit.expectations[i]);
            estimates.push(samp.estimates[i]);
            JsonObject m;
            m.field("projector", i + 1)
                .field("est_first", samp.marginals[i].est_first)
                .field("est_second", samp.marginals[i].est_second)
                .field("sigma", samp.marginals[i].sigma)
                .field("z", samp.marginals[i].z);
            marginals.push_raw(m.str());
        }
        JsonObject analytic;
        analytic.raw("expectations", expectations.str())
            .field("sum", wit.sum)
            .field("classical_bound", wit.classical_bound)
            .field("quantum_max", wit.quantum_max)
            .field("violated", wit.violated);
        JsonObject sampled;
        sampled.field("n_per_context", samp.n_per_context)
            .raw("estimates", estimates.str())
            .field("sum", samp.sum)
            .field("sum_sigma", samp.sum_sigma)
            .field("violation_z", samp.violation_z)
            .raw("marginals", marginals.str());
        JsonObject top;
        top.field("seed", cfg.seed)
            .field("state", cfg.state.to_string())
            .raw("analytic", analytic.str())
            .raw("sampled", sampled.str());
        const auto path = dir / "witness.json";
        write_text_file(path, top.str() + "\n");
        result.files.push_back(path.string());
    }
}

inline void run_probe_disturbance(const ExperimentConfig& cfg, ExperimentResult& result,
                                  const std::filesystem::path& dir, bool emitting) {
    const QutritState psi = cfg.state.make();
    const auto betas = cfg.beta_grid.points();
    result.probe_rows.resize(betas.size());
    detail::parallel_for(betas.size(), cfg.workers, [&](std::uint64_t i) {
        const double beta = betas[i];
        const ProbeComparison analytic = probe_disturbance_analytic(psi, beta);
        const ProbeComparison sampled =
            probe_disturbance_sampled(psi, beta, cfg.samples, derive_seed(cfg.seed, i));
        result.probe_rows[i] = {beta,
                                analytic.p_no_probe,
                                analytic.p_with_probe,
                                sampled.p_no_probe,
                                sampled.p_with_probe,
                                cfg.samples};
    });
    if (!emitting) return;

    if (cfg.format == OutputFormat::csv) {
        std::string content =
            "beta,p_no_probe,p_with_probe,p_no_probe_sampled,p_with_probe_sampled,samples\n";
        for (const auto& row : result.probe_rows)
            content += csv_row({fmt_double(row.beta), fmt_double(row.p_no_probe),
                                fmt_double(row.p_with_probe), fmt_double(row.p_no_probe_sampled),
                                fmt_double(row.p_with_probe_sampled),
                                std::to_string(row.samples)});
        const auto path = dir / "probe_disturbance.csv";
        write_text_file(path, content);
        result.files.push_back(path.string());
    } else {
        JsonArray rows;
        for (const auto& row : result.probe_rows) {
            JsonObject obj;
            obj.field("beta", row.beta)
                .field("p_no_probe", row.p_no_probe)
                .field("p_with_probe", row.p_with_probe)
                .field("p_no_probe_sampled", row.p_no_probe_sampled)
                .field("p_with_probe_sampled", row.p_with_probe_sampled)
                .field("samples", row.samples);
            rows.push_raw(obj.str());
        }
        JsonObject top;
        top.field("seed", cfg.seed).field("state", cfg.state.to_string()).raw("rows", rows.str());
        const auto path = dir / "probe_disturbance.json";
        write_text_file(path, top.str() + "\n");
        result.files.push_back(path.string());
    }
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentResult result;
    const bool emitting = !cfg.out.empty();
    std::filesystem::path dir(cfg.out);
    if (emitting) std::filesystem::create_directories(dir);

    switch (cfg.experiment) {
        case ExperimentKind::kcbs:
            detail::run_kcbs(cfg, result, dir, emitting);
            break;
        case ExperimentKind::probe_disturbance:
            detail::run_probe_disturbance(cfg, result, dir, emitting);
            break;
        default:
            detail::run_bandit_like(cfg, result, dir, emitting);
            break;
    }

    result.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (emitting) {
        JsonObject meta;
        meta.field("tool", "qtow")
            .field("version", QTOW_VERSION)
            .field("experiment", experiment_name(cfg.experiment))
            .field("seed", cfg.seed)
            .raw("config", config_echo_json(cfg))
            .field("workers", static_cast<std::uint64_t>(cfg.workers))
            .field("wall_clock_seconds", result.wall_clock_seconds);
        const auto path = dir / "meta.json";
        write_text_file(path, meta.str() + "\n");
        result.files.push_back(path.string());
    }
    return result;
}

}  // namespace qtow
