// Minimal library tour: witness values, a probe sweep, and a short
// learning run. Build and run: ./qtow_demo

#include <cstdio>
#include <numbers>

#include "qtow/classical_tow.hpp"
#include "qtow/contextuality.hpp"
#include "qtow/harness.hpp"

int main() {
    using namespace qtow;

    // Witness on the symmetry-axis state vs the maximally mixed state.
    const KcbsSet set = build_kcbs();
    const WitnessResult peak = kcbs_witness(QutritState::basis_perp(), set);
    const WitnessResult flat = kcbs_witness(DensityMatrix::maximally_mixed(), set);
    std::printf("witness |z>:   sum = %.15f  (bound 2, max %.15f, violated = %s)\n", peak.sum,
                peak.quantum_max, peak.violated ? "yes" : "no");
    std::printf("witness I/3:   sum = %.15f  (violated = %s)\n\n", flat.sum,
                flat.violated ? "yes" : "no");

    // An unrecorded probe makes an impossible decision possible.
    for (double beta : {0.0, 0.4, std::numbers::pi / 4}) {
        const ProbeComparison probe =
            probe_disturbance_analytic(QutritState::basis_perp(), beta);
        std::printf("probe beta = %.4f: P(A) without = %.4f, with = %.4f\n", beta,
                    probe.p_no_probe, probe.p_with_probe);
    }

    // A short device-mode learning run against (0.8, 0.2).
    const BanditEnv env{0.8, 0.2};
    const EpisodeResult quantum = run_episode(AgentConfig{}, env, 5000, 1);
    const EpisodeResult classical =
        ctow_run_episode({0.0, 1.0, asymmetry_w(env.strength())}, env, 5000, 1);
    std::printf("\nafter 5000 trials on (0.8, 0.2):\n");
    std::printf("  qtow      freq_a = %.3f, regret = %.1f\n", quantum.summary.freq_a,
                quantum.summary.cum_regret);
    std::printf("  classical freq_a = %.3f, regret = %.1f\n", classical.summary.freq_a,
                classical.summary.cum_regret);
    return 0;
}
