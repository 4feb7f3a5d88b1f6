#pragma once
// Qutrit state/operator algebra over the fixed basis (|A>, |B>, |perp>),
// stored at indices (0, 1, 2).
//
//   QutritState    |psi> = a|A> + b|B> + c|perp>,  <psi|psi> = 1
//   Operator       3x3 complex matrix (unitaries, projectors, observables)
//   DensityMatrix  3x3 Hermitian, trace 1, positive semidefinite
//
// Born probabilities, projective (Lüders) collapse, block rotations on the
// (A,B), (A,perp) and (B,perp) planes, and the unrecorded-probe dephasing
// channel rho -> P rho P + (I-P) rho (I-P).
//
// All values are immutable after construction; operations are pure and
// return fresh values, so concurrent use needs no coordination.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qtow/errors.hpp"

namespace qtow {

using cdouble = std::complex<double>;

// Tolerance tiers: algebraic identities / precondition predicates /
// long-run state-norm drift. 3x3 double algebra has ample headroom.
inline constexpr double kTolIdentity = 1e-12;
inline constexpr double kTolPredicate = 1e-10;
inline constexpr double kTolNormDrift = 1e-9;
inline constexpr double kTolZeroBranch = 1e-15;

namespace detail {
inline bool finite(cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
}

// ---------------------------------------------------------------------------
// QutritState

struct QutritState {
    std::array<cdouble, 3> amp{};  // (A, B, perp)

    QutritState() = default;
    QutritState(cdouble a, cdouble b, cdouble perp) : amp{a, b, perp} {}

    double norm_sq() const {
        return std::norm(amp[0]) + std::norm(amp[1]) + std::norm(amp[2]);
    }
    double norm() const { return std::sqrt(norm_sq()); }

    bool finite() const {
        return detail::finite(amp[0]) && detail::finite(amp[1]) && detail::finite(amp[2]);
    }

    static QutritState basis_a() { return {1.0, 0.0, 0.0}; }
    static QutritState basis_b() { return {0.0, 1.0, 0.0}; }
    static QutritState basis_perp() { return {0.0, 0.0, 1.0}; }
};

inline double max_abs_diff(const QutritState& x, const QutritState& y) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(x.amp[i] - y.amp[i]));
    return m;
}

inline void require_normalized(const QutritState& psi, double tol = kTolNormDrift) {
    if (!psi.finite())
        throw PreconditionError("state has non-finite amplitudes");
    if (std::abs(psi.norm() - 1.0) > tol)
        throw PreconditionError("state is not normalized: |psi| = " + std::to_string(psi.norm()));
}

// Scale to unit norm (used when assembling test states, never silently in
// measurement paths).
inline QutritState normalized(const QutritState& psi) {
    const double n = psi.norm();
    if (n <= 0.0 || !std::isfinite(n))
        throw PreconditionError("cannot normalize a zero or non-finite state");
    return {psi.amp[0] / n, psi.amp[1] / n, psi.amp[2] / n};
}

// ---------------------------------------------------------------------------
// Operator

struct Operator {
    std::array<cdouble, 9> m{};  // row-major

    cdouble& at(int r, int c) { return m[3 * r + c]; }
    const cdouble& at(int r, int c) const { return m[3 * r + c]; }

    static Operator identity() {
        Operator op;
        op.at(0, 0) = op.at(1, 1) = op.at(2, 2) = 1.0;
        return op;
    }

    Operator adjoint() const {
        Operator out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out.at(r, c) = std::conj(at(c, r));
        return out;
    }

    cdouble trace() const { return at(0, 0) + at(1, 1) + at(2, 2); }

    bool finite() const {
        for (const auto& z : m)
            if (!detail::finite(z)) return false;
        return true;
    }
};

inline Operator operator*(const Operator& x, const Operator& y) {
    Operator out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            cdouble s = 0.0;
            for (int k = 0; k < 3; ++k) s += x.at(r, k) * y.at(k, c);
            out.at(r, c) = s;
        }
    return out;
}

inline QutritState operator*(const Operator& op, const QutritState& psi) {
    QutritState out;
    for (int r = 0; r < 3; ++r) {
        cdouble s = 0.0;
        for (int c = 0; c < 3; ++c) s += op.at(r, c) * psi.amp[c];
        out.amp[r] = s;
    }
    return out;
}

inline Operator operator+(const Operator& x, const Operator& y) {
    Operator out;
    for (int i = 0; i < 9; ++i) out.m[i] = x.m[i] + y.m[i];
    return out;
}

inline Operator operator-(const Operator& x, const Operator& y) {
    Operator out;
    for (int i = 0; i < 9; ++i) out.m[i] = x.m[i] - y.m[i];
    return out;
}

inline double max_abs_diff(const Operator& x, const Operator& y) {
    double m = 0.0;
    for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(x.m[i] - y.m[i]));
    return m;
}

// max-norm deviation from U†U = I
inline double unitarity_defect(const Operator& u) {
    return max_abs_diff(u.adjoint() * u, Operator::identity());
}

inline double hermiticity_defect(const Operator& op) {
    return max_abs_diff(op, op.adjoint());
}

inline bool is_unitary(const Operator& u, double tol = kTolPredicate) {
    return u.finite() && unitarity_defect(u) <= tol;
}

inline bool is_hermitian(const Operator& op, double tol = kTolPredicate) {
    return op.finite() && hermiticity_defect(op) <= tol;
}

inline bool is_projector(const Operator& p, double tol = kTolPredicate) {
    return is_hermitian(p, tol) && max_abs_diff(p * p, p) <= tol;
}

inline void require_unitary(const Operator& u, double tol = kTolPredicate) {
    if (!is_unitary(u, tol))
        throw PreconditionError("operator is not unitary (||U†U - I|| > tol)");
}

inline void require_hermitian(const Operator& op, double tol = kTolPredicate) {
    if (!is_hermitian(op, tol))
        throw PreconditionError("operator is not Hermitian");
}

inline void require_projector(const Operator& p, double tol = kTolPredicate) {
    if (!is_projector(p, tol))
        throw PreconditionError("operator is not a projector (P² = P, P = P†)");
}

// ---------------------------------------------------------------------------
// Fixed operators

inline Operator projector_a() {
    Operator p;
    p.at(0, 0) = 1.0;
    return p;
}

inline Operator projector_b() {
    Operator p;
    p.at(1, 1) = 1.0;
    return p;
}

// M_perp = I - M_A - M_B
inline Operator projector_perp() {
    Operator p;
    p.at(2, 2) = 1.0;
    return p;
}

// Preference-difference observable Z = |A><A| - |B><B|.
inline Operator z_observable() {
    Operator z;
    z.at(0, 0) = 1.0;
    z.at(1, 1) = -1.0;
    return z;
}

// Rank-1 projector |v><v| onto a unit vector.
inline Operator projector_onto(const QutritState& v) {
    require_normalized(v, kTolPredicate);
    Operator p;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) p.at(r, c) = v.amp[r] * std::conj(v.amp[c]);
    return p;
}

namespace detail {
// Rotation [[cos,-sin],[sin,cos]] embedded on ordered index pair (i, j),
// identity on the remaining basis vector. Positive angle moves amplitude
// from index i toward index j.
inline Operator plane_rotation(int i, int j, double angle) {
    if (!std::isfinite(angle)) throw PreconditionError("rotation angle must be finite");
    Operator op = Operator::identity();
    const double c = std::cos(angle), s = std::sin(angle);
    op.at(i, i) = c;
    op.at(i, j) = -s;
    op.at(j, i) = s;
    op.at(j, j) = c;
    return op;
}
}  // namespace detail

// Decision-subspace rotation on (|A>,|B>); |perp> untouched.
inline Operator rotation_ab(double angle) { return detail::plane_rotation(0, 1, angle); }
// Memory-coupling rotations on (|A>,|perp>) and (|B>,|perp>).
inline Operator rotation_a_perp(double angle) { return detail::plane_rotation(0, 2, angle); }
inline Operator rotation_b_perp(double angle) { return detail::plane_rotation(1, 2, angle); }

// ---------------------------------------------------------------------------
// Measurement and evolution

// <psi|P|psi> for a projector P, clamped to [0,1] to absorb round-off.
inline double born_probability(const QutritState& psi, const Operator& proj) {
    require_normalized(psi);
    require_projector(proj);
    const QutritState p_psi = proj * psi;
    cdouble v = 0.0;
    for (int i = 0; i < 3; ++i) v += std::conj(psi.amp[i]) * p_psi.amp[i];
    double prob = v.real();
    if (prob < 0.0) prob = 0.0;
    if (prob > 1.0) prob = 1.0;
    return prob;
}

struct CollapseResult {
    QutritState state;
    double probability = 0.0;
};

// Lüders rule: |psi> -> P|psi> / sqrt(<P>).
inline CollapseResult lueders_collapse(const QutritState& psi, const Operator& proj) {
    const double prob = born_probability(psi, proj);
    if (prob < kTolZeroBranch)
        throw ZeroProbabilityBranch("collapse onto an outcome of probability " +
                                    std::to_string(prob));
    const QutritState p_psi = proj * psi;
    const double inv = 1.0 / std::sqrt(prob);
    return {{p_psi.amp[0] * inv, p_psi.amp[1] * inv, p_psi.amp[2] * inv}, prob};
}

inline QutritState apply_unitary(const QutritState& psi, const Operator& u) {
    if (!psi.finite()) throw PreconditionError("state has non-finite amplitudes");
    require_unitary(u);
    return u * psi;
}

// ---------------------------------------------------------------------------
// DensityMatrix

struct DensityMatrix {
    std::array<cdouble, 9> m{};  // row-major

    cdouble& at(int r, int c) { return m[3 * r + c]; }
    const cdouble& at(int r, int c) const { return m[3 * r + c]; }

    cdouble trace() const { return at(0, 0) + at(1, 1) + at(2, 2); }

    static DensityMatrix from_state(const QutritState& psi) {
        require_normalized(psi);
        DensityMatrix rho;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) rho.at(r, c) = psi.amp[r] * std::conj(psi.amp[c]);
        return rho;
    }

    static DensityMatrix maximally_mixed() {
        DensityMatrix rho;
        rho.at(0, 0) = rho.at(1, 1) = rho.at(2, 2) = 1.0 / 3.0;
        return rho;
    }

    Operator as_operator() const {
        Operator op;
        op.m = m;
        return op;
    }
};

// Smallest eigenvalue of a 3x3 Hermitian matrix via cyclic complex Jacobi
// iteration. Unlike characteristic-polynomial roots, this stays accurate to
// ~1e-15 for the (near-)degenerate spectra of pure states, well inside the
// validity tolerance.
inline double min_eigenvalue_hermitian(const DensityMatrix& rho) {
    Operator a = rho.as_operator();
    for (int sweep = 0; sweep < 30; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) off += std::norm(a.at(p, q));
        if (off < 1e-64) break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) {
                const cdouble apq = a.at(p, q);
                const double beta = std::abs(apq);
                if (beta < 1e-300) continue;
                const cdouble u = apq / beta;
                const double tau = (a.at(q, q).real() - a.at(p, p).real()) / (2.0 * beta);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::hypot(1.0, tau))
                                            : 1.0 / (tau - std::hypot(1.0, tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                Operator g = Operator::identity();
                g.at(p, p) = c;
                g.at(q, q) = c;
                g.at(p, q) = s * u;
                g.at(q, p) = -s * std::conj(u);
                a = g.adjoint() * a * g;
            }
    }
    return std::min({a.at(0, 0).real(), a.at(1, 1).real(), a.at(2, 2).real()});
}

inline bool is_valid_density(const DensityMatrix& rho, double tol = kTolIdentity) {
    Operator op = rho.as_operator();
    if (!op.finite()) return false;
    if (hermiticity_defect(op) > tol) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
        return false;
    return min_eigenvalue_hermitian(rho) >= -tol;
}

inline void require_density(const DensityMatrix& rho, double tol = kTolIdentity) {
    if (!is_valid_density(rho, tol))
        throw PreconditionError("matrix is not a valid density matrix");
}

// Unrecorded binary probe: rho' = P rho P + (I-P) rho (I-P).
inline DensityMatrix dephase_probe(const DensityMatrix& rho, const Operator& proj) {
    require_density(rho);
    require_projector(proj);
    const Operator comp = Operator::identity() - proj;
    const Operator r = rho.as_operator();
    const Operator out = proj * r * proj + comp * r * comp;
    DensityMatrix result;
    result.m = out.m;
    return result;
}

// ---------------------------------------------------------------------------
// Expectation values

namespace detail {
inline double checked_real(cdouble v, const char* what) {
    if (std::abs(v.imag()) > kTolIdentity)
        throw PreconditionError(std::string(what) + " has a non-negligible imaginary part");
    return v.real();
}
}  // namespace detail

inline double expectation(const QutritState& psi, const Operator& observable) {
    require_normalized(psi);
    require_hermitian(observable);
    const QutritState o_psi = observable * psi;
    cdouble v = 0.0;
    for (int i = 0; i < 3; ++i) v += std::conj(psi.amp[i]) * o_psi.amp[i];
    return detail::checked_real(v, "expectation value");
}

inline double expectation(const DensityMatrix& rho, const Operator& observable) {
    require_hermitian(observable);
    return detail::checked_real((observable * rho.as_operator()).trace(), "expectation value");
}

}  // namespace qtow
