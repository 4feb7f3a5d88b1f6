#pragma once
// KCBS contextuality witness toolkit and the probe-disturbance diagnostic.
//
// The five-cycle construction uses unit vectors
//   |v_i> = (sin a cos f_i, sin a sin f_i, cos a),  f_i = 4 pi i / 5,
// i = 1..5, with cos^2 a = 1/sqrt(5). Adjacent vectors are orthogonal, so
// adjacent rank-1 projectors P_i = |v_i><v_i| are exclusive and jointly
// measurable via the three-outcome context {P_i, P_{i+1}, I - P_i - P_{i+1}}.
// On |z> = (0,0,1) every <P_i> equals 1/sqrt(5) and the sum attains the
// quantum maximum sqrt(5), above the noncontextual value-assignment bound 2.
//
// The probe-disturbance diagnostic compares P(decide A) with and without an
// unrecorded intermediate probe |v(beta)> = cos b |A> + sin b |perp>; the
// with-probe value is Tr(M_A rho') for the dephasing channel
// rho' = P rho P + (I-P) rho (I-P), evaluated analytically and by
// trajectory sampling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qtow/quantum.hpp"
#include "qtow/rng.hpp"

namespace qtow {

inline constexpr double kKcbsClassicalBound = 2.0;
inline const double kKcbsQuantumMax = std::sqrt(5.0);

// ---------------------------------------------------------------------------
// Construction

struct KcbsSet {
    std::array<std::array<double, 3>, 5> vectors{};  // |v_i>, index k holds i = k+1
    std::array<Operator, 5> projectors{};

    QutritState vector_state(int k) const {
        return {vectors[k][0], vectors[k][1], vectors[k][2]};
    }
};

inline double kcbs_inner(const KcbsSet& set, int i, int j) {
    double dot = 0.0;
    for (int c = 0; c < 3; ++c) dot += set.vectors[i][c] * set.vectors[j][c];
    return dot;
}

inline KcbsSet build_kcbs() {
    KcbsSet set;
    const double cos_a = std::pow(5.0, -0.25);  // cos^2 a = 1/sqrt(5)
    const double sin_a = std::sqrt(1.0 - 1.0 / std::sqrt(5.0));
    for (int k = 0; k < 5; ++k) {
        const double phase = 4.0 * std::numbers::pi * static_cast<double>(k + 1) / 5.0;
        set.vectors[k] = {sin_a * std::cos(phase), sin_a * std::sin(phase), cos_a};
        set.projectors[k] = projector_onto(set.vector_state(k));
    }
    return set;
}

inline void require_kcbs(const KcbsSet& set, double tol = kTolIdentity) {
    for (int k = 0; k < 5; ++k) {
        if (std::abs(std::sqrt(kcbs_inner(set, k, k)) - 1.0) > tol)
            throw PreconditionError("KCBS vector " + std::to_string(k + 1) + " is not unit norm");
        if (std::abs(kcbs_inner(set, k, (k + 1) % 5)) > tol)
            throw PreconditionError("KCBS vectors " + std::to_string(k + 1) + "," +
                                    std::to_string((k + 1) % 5 + 1) + " are not orthogonal");
    }
}

// ---------------------------------------------------------------------------
// Analytic witness

struct WitnessResult {
    std::array<double, 5> expectations{};
    double sum = 0.0;
    double classical_bound = kKcbsClassicalBound;
    double quantum_max = kKcbsQuantumMax;
    bool violated = false;  // sum > bound + 1e-9 (analytic values only)
};

namespace detail {
template <class StateOrRho>
WitnessResult witness_impl(const StateOrRho& state, const KcbsSet& set) {
    require_kcbs(set);
    WitnessResult result;
    for (int k = 0; k < 5; ++k) {
        result.expectations[k] = expectation(state, set.projectors[k]);
        result.sum += result.expectations[k];
    }
    result.violated = result.sum > result.classical_bound + 1e-9;
    return result;
}
}  // namespace detail

inline WitnessResult kcbs_witness(const QutritState& psi, const KcbsSet& set) {
    return detail::witness_impl(psi, set);
}

inline WitnessResult kcbs_witness(const DensityMatrix& rho, const KcbsSet& set) {
    require_density(rho);
    return detail::witness_impl(rho, set);
}

// ---------------------------------------------------------------------------
// Noncontextual value assignments

// 0/1 values on the five projectors; admissible when no two cyclically
// adjacent entries are both 1 (exclusivity).
struct HiddenAssignment {
    std::array<int, 5> bits{};

    bool admissible() const {
        for (int k = 0; k < 5; ++k)
            if (bits[k] == 1 && bits[(k + 1) % 5] == 1) return false;
        return true;
    }
    int sum() const {
        int s = 0;
        for (int b : bits) s += b;
        return s;
    }
};

struct NoncontextualMax {
    int max_sum = 0;
    std::vector<HiddenAssignment> argmax;
};

// Exhaustive enumeration of all 32 assignments; the maximum admissible sum
// is the independence number of the 5-cycle (= 2), independent of the
// vectors' geometry.
inline NoncontextualMax noncontextual_max(const KcbsSet& set) {
    require_kcbs(set);
    NoncontextualMax result;
    for (int mask = 0; mask < 32; ++mask) {
        HiddenAssignment candidate;
        for (int k = 0; k < 5; ++k) candidate.bits[k] = (mask >> k) & 1;
        if (!candidate.admissible()) continue;
        const int s = candidate.sum();
        if (s > result.max_sum) {
            result.max_sum = s;
            result.argmax.clear();
        }
        if (s == result.max_sum) result.argmax.push_back(candidate);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Probe disturbance diagnostic

struct ProbeComparison {
    double beta = 0.0;
    double p_no_probe = 0.0;
    double p_with_probe = 0.0;
};

// |v(beta)> = cos b |A> + sin b |perp>
inline QutritState probe_vector(double beta) {
    return {std::cos(beta), 0.0, std::sin(beta)};
}

inline ProbeComparison probe_disturbance_analytic(const QutritState& psi, double beta) {
    ProbeComparison out;
    out.beta = beta;
    out.p_no_probe = born_probability(psi, projector_a());
    const DensityMatrix dephased =
        dephase_probe(DensityMatrix::from_state(psi), projector_onto(probe_vector(beta)));
    out.p_with_probe = expectation(dephased, projector_a());
    return out;
}

// Same protocol, sampled: draw the (unrecorded) probe outcome, collapse the
// state accordingly, then measure the decision. Both branch states are
// fixed by (psi, beta), so they are collapsed once up front.
inline ProbeComparison probe_disturbance_sampled(const QutritState& psi, double beta,
                                                 std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw PreconditionError("n_samples must be >= 1");
    const Operator m_a = projector_a();
    const Operator probe = projector_onto(probe_vector(beta));
    const Operator probe_comp = Operator::identity() - probe;

    const double p_probe = born_probability(psi, probe);
    const double p_a_hit =
        p_probe >= kTolZeroBranch ? born_probability(lueders_collapse(psi, probe).state, m_a)
                                  : 0.0;
    const double p_a_miss =
        1.0 - p_probe >= kTolZeroBranch
            ? born_probability(lueders_collapse(psi, probe_comp).state, m_a)
            : 0.0;
    const double p_a_direct = born_probability(psi, m_a);

    Xoshiro256pp rng(seed);
    std::uint64_t direct_hits = 0, probed_hits = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i)
        if (rng.uniform() < p_a_direct) ++direct_hits;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const double branch_prob = (rng.uniform() < p_probe) ? p_a_hit : p_a_miss;
        if (rng.uniform() < branch_prob) ++probed_hits;
    }

    ProbeComparison out;
    out.beta = beta;
    out.p_no_probe = static_cast<double>(direct_hits) / static_cast<double>(n_samples);
    out.p_with_probe = static_cast<double>(probed_hits) / static_cast<double>(n_samples);
    return out;
}

// ---------------------------------------------------------------------------
// Sampled contexts

// Context k jointly measures the adjacent pair (P_{k}, P_{k+1}) through the
// three-outcome measurement {P_k, P_{k+1}, I - P_k - P_{k+1}} on fresh
// copies of the state. Projector i is therefore estimated twice: as the
// first effect of context i and as the second effect of context i-1.
struct MarginalCheck {
    double est_first = 0.0;   // from context i
    double est_second = 0.0;  // from context i-1
    double sigma = 0.0;       // combined binomial sigma of the difference
    double z = 0.0;           // |est_first - est_second| / sigma
};

struct SampledWitness {
    std::array<double, 5> estimates{};  // mean of the two context marginals
    double sum = 0.0;
    double sum_sigma = 0.0;    // binomial propagation through the mean
    double violation_z = 0.0;  // (sum - classical bound) / sum_sigma
    std::array<MarginalCheck, 5> marginals{};
    std::uint64_t n_per_context = 0;
};

inline SampledWitness kcbs_sampled_contexts(const QutritState& psi, const KcbsSet& set,
                                            std::uint64_t n_per_context, std::uint64_t seed) {
    if (n_per_context < 1) throw PreconditionError("n_per_context must be >= 1");
    require_kcbs(set);
    require_normalized(psi);

    // counts[k] = occurrences of (P_k, P_{k+1}, rest) in context k
    std::array<std::array<std::uint64_t, 3>, 5> counts{};
    for (int k = 0; k < 5; ++k) {
        const double p_first = born_probability(psi, set.projectors[k]);
        const double p_second = born_probability(psi, set.projectors[(k + 1) % 5]);
        Xoshiro256pp rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        for (std::uint64_t i = 0; i < n_per_context; ++i) {
            const double u = rng.uniform();
            if (u < p_first)
                ++counts[k][0];
            else if (u < p_first + p_second)
                ++counts[k][1];
            else
                ++counts[k][2];
        }
    }

    SampledWitness out;
    out.n_per_context = n_per_context;
    const double n = static_cast<double>(n_per_context);
    double sum_var = 0.0;
    for (int i = 0; i < 5; ++i) {
        const int prev = (i + 4) % 5;
        MarginalCheck& check = out.marginals[i];
        check.est_first = static_cast<double>(counts[i][0]) / n;
        check.est_second = static_cast<double>(counts[prev][1]) / n;
        const double var_first = check.est_first * (1.0 - check.est_first) / n;
        const double var_second = check.est_second * (1.0 - check.est_second) / n;
        check.sigma = std::sqrt(var_first + var_second);
        check.z = check.sigma > 0.0 ? std::abs(check.est_first - check.est_second) / check.sigma
                                    : 0.0;
        out.estimates[i] = 0.5 * (check.est_first + check.est_second);
        out.sum += out.estimates[i];
        sum_var += 0.25 * (var_first + var_second);
    }
    out.sum_sigma = std::sqrt(sum_var);
    out.violation_z =
        out.sum_sigma > 0.0 ? (out.sum - kKcbsClassicalBound) / out.sum_sigma : 0.0;
    return out;
}

}  // namespace qtow
