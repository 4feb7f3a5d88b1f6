#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qtow/agent.hpp"
#include "qtow/contextuality.hpp"
#include "qtow/rng.hpp"
#include "test_oracles.hpp"

using namespace qtow;
using std::numbers::pi;

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kInvSqrt5 = 1.0 / kSqrt5;

QutritState random_unit_state(Xoshiro256pp& rng) {
    QutritState psi;
    for (int i = 0; i < 3; ++i) psi.amp[i] = cdouble(rng.normal(), rng.normal());
    return normalized(psi);
}

}  // namespace

// ---------------------------------------------------------------------------
// build_kcbs geometry

TEST_CASE("five-cycle vectors share the symmetry-axis component", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    const double expected = std::pow(5.0, -0.25);  // 0.6687403...
    for (int k = 0; k < 5; ++k) REQUIRE(std::abs(set.vectors[k][2] - expected) < 1e-15);
    REQUIRE(expected == Catch::Approx(0.6687403).margin(1e-7));
}

TEST_CASE("adjacent vectors are orthogonal, all unit norm", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    for (int k = 0; k < 5; ++k) {
        REQUIRE(std::abs(std::sqrt(kcbs_inner(set, k, k)) - 1.0) < 1e-12);
        REQUIRE(std::abs(kcbs_inner(set, k, (k + 1) % 5)) < 1e-12);
    }
    REQUIRE_NOTHROW(require_kcbs(set));
}

TEST_CASE("non-adjacent vectors overlap substantially", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    REQUIRE(std::abs(kcbs_inner(set, 0, 2)) > 0.1);
    REQUIRE(std::abs(kcbs_inner(set, 0, 3)) > 0.1);
}

TEST_CASE("the set is invariant under the cyclic relabeling rotation", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    const double step = 4.0 * pi / 5.0;
    const double c = std::cos(step), s = std::sin(step);
    for (int k = 0; k < 5; ++k) {
        const auto& v = set.vectors[k];
        const std::array<double, 3> rotated{c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]};
        const auto& next = set.vectors[(k + 1) % 5];
        for (int i = 0; i < 3; ++i) REQUIRE(std::abs(rotated[i] - next[i]) < 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Analytic witness

TEST_CASE("the symmetry-axis state attains the quantum maximum", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    const WitnessResult result = kcbs_witness(QutritState::basis_perp(), set);
    for (double e : result.expectations) REQUIRE(std::abs(e - kInvSqrt5) < 1e-12);
    REQUIRE(std::abs(result.sum - kSqrt5) < 1e-12);
    REQUIRE(result.classical_bound == 2.0);
    REQUIRE(result.violated);
}

TEST_CASE("the maximally mixed state stays classical", "[kcbs]") {
    const WitnessResult result = kcbs_witness(DensityMatrix::maximally_mixed(), build_kcbs());
    REQUIRE(std::abs(result.sum - 5.0 / 3.0) < 1e-12);
    REQUIRE_FALSE(result.violated);
}

TEST_CASE("a decision basis state stays classical", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    // independent oracle: sum the five squared overlaps by hand
    double expected = 0.0;
    for (int k = 0; k < 5; ++k) expected += set.vectors[k][0] * set.vectors[k][0];
    const double sin_sq = 1.0 - kInvSqrt5;
    REQUIRE(std::abs(expected - 2.5 * sin_sq) < 1e-12);  // closed form

    const WitnessResult result = kcbs_witness(QutritState::basis_a(), set);
    REQUIRE(std::abs(result.sum - expected) < 1e-12);
    REQUIRE(result.sum == Catch::Approx(1.382).margin(5e-4));
    REQUIRE_FALSE(result.violated);
}

TEST_CASE("the witness consumes agent-prepared states directly", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    // sliding the preparation toward the memory mode approaches the maximum
    double prev = 0.0;
    for (double mu : {0.0, 0.5, 0.9, 1.0}) {
        const WitnessResult result = kcbs_witness(prepare_device_state(0.7, mu), set);
        REQUIRE(result.sum >= 0.0);
        REQUIRE(result.sum <= kSqrt5 + 1e-9);
        REQUIRE(result.sum > prev);
        prev = result.sum;
    }
    REQUIRE(std::abs(prev - kSqrt5) < 1e-12);  // mu = 1 is the symmetry axis
}

TEST_CASE("witness sums stay within the quantum range over random states",
          "[kcbs][property]") {
    const KcbsSet set = build_kcbs();
    Xoshiro256pp rng(2718);
    for (int round = 0; round < 10000; ++round) {
        const WitnessResult result = kcbs_witness(random_unit_state(rng), set);
        REQUIRE(result.sum >= 0.0);
        REQUIRE(result.sum <= kSqrt5 + 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Noncontextual assignments

TEST_CASE("exhaustive assignment search fixes the classical bound at 2", "[kcbs]") {
    const NoncontextualMax result = noncontextual_max(build_kcbs());
    REQUIRE(result.max_sum == 2);
    REQUIRE(result.argmax.size() == 5);  // the five non-adjacent pairs
    for (const auto& assignment : result.argmax) {
        REQUIRE(assignment.admissible());
        REQUIRE(assignment.sum() == 2);
    }
}

TEST_CASE("adjacency rules on explicit assignments", "[kcbs]") {
    REQUIRE(HiddenAssignment{{1, 0, 1, 0, 0}}.admissible());
    REQUIRE_FALSE(HiddenAssignment{{1, 1, 0, 0, 0}}.admissible());
    REQUIRE_FALSE(HiddenAssignment{{1, 0, 0, 0, 1}}.admissible());  // cyclic pair

    int admissible_count = 0;
    for (int mask = 0; mask < 32; ++mask) {
        HiddenAssignment a;
        for (int k = 0; k < 5; ++k) a.bits[k] = (mask >> k) & 1;
        if (a.admissible()) ++admissible_count;
    }
    REQUIRE(admissible_count == 11);  // independent sets of the 5-cycle
}

// ---------------------------------------------------------------------------
// Probe disturbance

TEST_CASE("probing the memory state opens a path into the decision subspace", "[probe]") {
    const QutritState perp = QutritState::basis_perp();

    for (double beta : {0.1, 0.5, pi / 4, 1.2}) {
        const ProbeComparison result = probe_disturbance_analytic(perp, beta);
        REQUIRE(result.p_no_probe == 0.0);
        REQUIRE(result.p_with_probe > 0.0);
        // independent full-matrix oracle
        oracle::Vec3 probe{std::cos(beta), 0.0, std::sin(beta)};
        oracle::Mat3 rho_prime =
            oracle::dephase(oracle::outer({0.0, 0.0, 1.0}), oracle::outer(probe));
        oracle::Mat3 m_a{};
        m_a[0] = 1.0;
        REQUIRE(std::abs(result.p_with_probe - oracle::real_trace_of_product(m_a, rho_prime)) <
                1e-14);
    }

    // commuting probes leave the statistics alone
    REQUIRE(probe_disturbance_analytic(perp, 0.0).p_with_probe < 1e-12);
    REQUIRE(probe_disturbance_analytic(perp, pi / 2).p_with_probe < 1e-12);
    REQUIRE(std::abs(probe_disturbance_analytic(perp, pi / 4).p_with_probe - 0.5) < 1e-14);
}

TEST_CASE("sampled probe statistics match the channel within Monte Carlo error", "[probe]") {
    const QutritState perp = QutritState::basis_perp();
    const std::uint64_t n = 100000;
    const ProbeComparison sampled = probe_disturbance_sampled(perp, pi / 4, n, 77);
    const double sigma = std::sqrt(0.5 * 0.5 / static_cast<double>(n));
    REQUIRE(sampled.p_no_probe == 0.0);
    REQUIRE(std::abs(sampled.p_with_probe - 0.5) < 3.0 * sigma);
}

TEST_CASE("a beta = 0 probe on the A state is invisible", "[probe]") {
    const ProbeComparison result = probe_disturbance_sampled(QutritState::basis_a(), 0.0, 500, 3);
    REQUIRE(result.p_no_probe == 1.0);
    REQUIRE(result.p_with_probe == 1.0);
}

TEST_CASE("single-sample estimates are single Bernoulli draws", "[probe]") {
    const ProbeComparison result =
        probe_disturbance_sampled(normalized({0.6, 0.0, 0.8}), 0.9, 1, 4);
    REQUIRE((result.p_no_probe == 0.0 || result.p_no_probe == 1.0));
    REQUIRE((result.p_with_probe == 0.0 || result.p_with_probe == 1.0));
}

TEST_CASE("sampled and analytic probe values agree across random inputs",
          "[probe][property]") {
    Xoshiro256pp rng(31337);
    for (int round = 0; round < 6; ++round) {
        QutritState psi = random_unit_state(rng);
        const double beta = rng.uniform() * (pi / 2.0);
        const ProbeComparison analytic = probe_disturbance_analytic(psi, beta);
        const std::uint64_t n = 40000;
        const ProbeComparison sampled = probe_disturbance_sampled(psi, beta, n, 1000 + round);
        const auto sigma = [&](double p) {
            return std::max(std::sqrt(p * (1.0 - p) / static_cast<double>(n)), 1e-4);
        };
        REQUIRE(std::abs(sampled.p_no_probe - analytic.p_no_probe) <
                4.0 * sigma(analytic.p_no_probe));
        REQUIRE(std::abs(sampled.p_with_probe - analytic.p_with_probe) <
                4.0 * sigma(analytic.p_with_probe));
    }
}

// ---------------------------------------------------------------------------
// Sampled contexts

TEST_CASE("context effects are complete three-outcome measurements", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    for (int k = 0; k < 5; ++k) {
        const Operator rest =
            Operator::identity() - set.projectors[k] - set.projectors[(k + 1) % 5];
        const Operator total = set.projectors[k] + set.projectors[(k + 1) % 5] + rest;
        REQUIRE(max_abs_diff(total, Operator::identity()) < 1e-12);
        REQUIRE(is_projector(rest, 1e-10));  // adjacency makes the remainder a projector
    }
}

TEST_CASE("per-context sampling reproduces the witness and its marginals", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    const std::uint64_t n = 100000;
    const SampledWitness result =
        kcbs_sampled_contexts(QutritState::basis_perp(), set, n, 271828);

    REQUIRE(result.n_per_context == n);
    REQUIRE(std::abs(result.sum - kSqrt5) < 3.0 * result.sum_sigma);
    for (const auto& marginal : result.marginals) REQUIRE(marginal.z < 3.0);
    REQUIRE(result.violation_z > 5.0);  // far above the classical bound
}

TEST_CASE("sampled contexts are deterministic in the seed", "[kcbs]") {
    const KcbsSet set = build_kcbs();
    const SampledWitness a = kcbs_sampled_contexts(QutritState::basis_perp(), set, 2000, 5);
    const SampledWitness b = kcbs_sampled_contexts(QutritState::basis_perp(), set, 2000, 5);
    REQUIRE(a.sum == b.sum);
    for (int i = 0; i < 5; ++i) REQUIRE(a.estimates[i] == b.estimates[i]);
}
