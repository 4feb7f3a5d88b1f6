#pragma once
// Test-only oracle helpers, deliberately independent of the library's
// algebra paths: a minimal 3x3 complex matrix calculator used to recompute
// channel outputs and expectation values by hand.

#include <array>
#include <complex>

namespace oracle {

using C = std::complex<double>;
using Mat3 = std::array<C, 9>;  // row-major
using Vec3 = std::array<C, 3>;

inline Mat3 identity() {
    Mat3 m{};
    m[0] = m[4] = m[8] = 1.0;
    return m;
}

inline Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            C s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[3 * r + k] * b[3 * k + c];
            out[3 * r + c] = s;
        }
    return out;
}

inline Mat3 add(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 9; ++i) out[i] = a[i] + b[i];
    return out;
}

inline Mat3 sub(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 9; ++i) out[i] = a[i] - b[i];
    return out;
}

inline C trace(const Mat3& a) { return a[0] + a[4] + a[8]; }

inline Mat3 outer(const Vec3& v) {
    Mat3 out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[3 * r + c] = v[r] * std::conj(v[c]);
    return out;
}

// rho' = P rho P + (I-P) rho (I-P), all arithmetic local to this file
inline Mat3 dephase(const Mat3& rho, const Mat3& proj) {
    const Mat3 comp = sub(identity(), proj);
    return add(mul(mul(proj, rho), proj), mul(mul(comp, rho), comp));
}

inline double real_trace_of_product(const Mat3& a, const Mat3& b) {
    return trace(mul(a, b)).real();
}

}  // namespace oracle
