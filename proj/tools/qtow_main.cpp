// qtow — experiment runner.
//
//   qtow kcbs     [--state perp] [--samples N] ...
//   qtow lemma-a1 --beta-grid 0:1.5708:0.1 --state perp ...
//   qtow bandit   --pa 0.8 --pb 0.2 --theta 0.1 --trials 20000 --runs 100 ...
//   qtow estimator --theta 0 ...
//   qtow compare  --sigma 1.0 ...
//
// Shared flags: --seed --out --format {csv|json} --runs --trials --workers
// --config FILE. Flags override config-file values; QTOW_SEED is the
// lowest-precedence seed source.

#include <cstdio>
#include <exception>

#include "qtow/cli.hpp"

namespace {

void print_brief(const qtow::ExperimentConfig& cfg, const qtow::ExperimentResult& result) {
    using namespace qtow;
    if (result.witness) {
        const WitnessResult& wit = *result.witness;
        std::printf("analytic: sum = %s  bound = %s  quantum_max = %s  violated = %s\n",
                    fmt_double(wit.sum).c_str(), fmt_double(wit.classical_bound).c_str(),
                    fmt_double(wit.quantum_max).c_str(), wit.violated ? "true" : "false");
        if (result.sampled_witness) {
            const SampledWitness& samp = *result.sampled_witness;
            std::printf("sampled:  sum = %s  sigma = %s  violation_z = %s\n",
                        fmt_double(samp.sum).c_str(), fmt_double(samp.sum_sigma).c_str(),
                        fmt_double(samp.violation_z).c_str());
        }
    }
    if (!result.probe_rows.empty()) {
        std::printf("%-10s %-22s %-22s %-22s\n", "beta", "p_no_probe", "p_with_probe",
                    "p_with_probe_sampled");
        for (const auto& row : result.probe_rows)
            std::printf("%-10.6f %-22s %-22s %-22s\n", row.beta,
                        fmt_double(row.p_no_probe).c_str(), fmt_double(row.p_with_probe).c_str(),
                        fmt_double(row.p_with_probe_sampled).c_str());
    }
    if (!result.runs.empty()) {
        std::string agent;
        for (const auto& row : result.runs) {
            if (row.agent != agent) {
                agent = row.agent;
                double freq = 0.0, terminal = 0.0, regret = 0.0;
                std::uint64_t n = 0, n_term = 0;
                for (const auto& r : result.runs) {
                    if (r.agent != agent) continue;
                    freq += r.summary.freq_a;
                    regret += r.summary.cum_regret;
                    ++n;
                    if (r.summary.terminal_freq_a) {
                        terminal += *r.summary.terminal_freq_a;
                        ++n_term;
                    }
                }
                std::printf("%-10s runs = %llu  mean freq_a = %.6f  mean terminal freq_a = %.6f"
                            "  mean cum_regret = %.3f\n",
                            agent.c_str(), static_cast<unsigned long long>(n),
                            freq / static_cast<double>(n),
                            n_term ? terminal / static_cast<double>(n_term) : 0.0,
                            regret / static_cast<double>(n));
            }
        }
        std::printf("(seed = %llu, trials = %llu)\n",
                    static_cast<unsigned long long>(cfg.seed),
                    static_cast<unsigned long long>(cfg.trials));
    }
    for (const auto& file : result.files) std::printf("wrote %s\n", file.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    qtow::ExperimentConfig cfg;
    CLI::App app{"qtow"};
    qtow::attach_cli(app, cfg);
    CLI11_PARSE(app, argc, argv);

    try {
        const qtow::ExperimentResult result = qtow::run_experiment(cfg);
        print_brief(cfg, result);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qtow: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
