#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace csd {

using cd = std::complex<double>;

/** 2x2 complex matrix, value type for the spinor algebra. */
struct Mat2 {
    cd a, b, c, d;  // [[a, b], [c, d]]

    friend constexpr Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend constexpr Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend constexpr Mat2 operator*(cd s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

    constexpr Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

    // Matrix-vector product on a spinor value (u1, u2).
    constexpr void apply(cd u1, cd u2, cd& v1, cd& v2) const {
        v1 = a * u1 + b * u2;
        v2 = c * u1 + d * u2;
    }
};

/** A single spinor value, two complex amplitudes. */
struct Spinor2 {
    cd u1{0.0}, u2{0.0};
};

// <u, v> = u1 conj(v1) + u2 conj(v2), linear in the first slot.
inline cd spinor_dot(cd u1, cd u2, cd v1, cd v2) {
    return u1 * std::conj(v1) + u2 * std::conj(v2);
}

namespace dirac {

inline constexpr cd I{0.0, 1.0};

// gamma^0 = diag(1,-1), gamma^1 = [[0,i],[i,0]], gamma^2 = [[0,1],[-1,0]].
inline constexpr Mat2 gamma0{1.0, 0.0, 0.0, -1.0};
inline constexpr Mat2 gamma1{0.0, I, I, 0.0};
inline constexpr Mat2 gamma2{0.0, 1.0, -1.0, 0.0};

// alpha^j = gamma^0 gamma^j, beta = gamma^0, alpha^0 = identity.
inline constexpr Mat2 identity{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2 alpha1{0.0, I, -I, 0.0};
inline constexpr Mat2 alpha2{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 beta = gamma0;

inline constexpr Mat2 alpha(int j) { return j == 0 ? identity : (j == 1 ? alpha1 : alpha2); }
inline constexpr Mat2 gamma(int mu) { return mu == 0 ? gamma0 : (mu == 1 ? gamma1 : gamma2); }

// Symbol of -i alpha . grad at frequency xi: alpha . xi = xi1 alpha1 + xi2 alpha2.
inline Mat2 alpha_dot(double xi1, double xi2) { return cd(xi1) * alpha1 + cd(xi2) * alpha2; }

// Half-wave projection Pi_pm(xi) = (I +- alpha . xi / |xi|) / 2 onto the
// +-|xi| eigenspaces of -i alpha . grad. At xi = 0 the convention is
// Pi_pm(0) = (I +- alpha1) / 2: a fixed unit direction that keeps every
// projection identity exact on the zero mode and only affects the spatial
// mean of psi.
inline Mat2 half_wave(double xi1, double xi2, int sign) {
    const double r = std::sqrt(xi1 * xi1 + xi2 * xi2);
    Mat2 dir = r > 0.0 ? alpha_dot(xi1 / r, xi2 / r) : alpha1;
    Mat2 m = identity + cd(static_cast<double>(sign)) * dir;
    return cd(0.5) * m;
}

namespace detail {

// Gaussian-integer 2x2 matrices for the exact identity checks: all entries of
// the matrix table live in {0, +-1, +-i}.
struct GInt {
    long long re = 0, im = 0;
    friend constexpr GInt operator+(GInt x, GInt y) { return {x.re + y.re, x.im + y.im}; }
    friend constexpr GInt operator-(GInt x, GInt y) { return {x.re - y.re, x.im - y.im}; }
    friend constexpr GInt operator*(GInt x, GInt y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend constexpr bool operator==(GInt x, GInt y) { return x.re == y.re && x.im == y.im; }
};

struct GMat {
    GInt a, b, c, d;
    friend constexpr GMat operator*(const GMat& x, const GMat& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend constexpr GMat operator+(const GMat& x, const GMat& y) {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    constexpr GMat adjoint() const {
        return {{a.re, -a.im}, {c.re, -c.im}, {b.re, -b.im}, {d.re, -d.im}};
    }
    friend constexpr bool operator==(const GMat& x, const GMat& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

inline constexpr GMat g_id{{1, 0}, {0, 0}, {0, 0}, {1, 0}};
inline constexpr GMat g_zero{{0, 0}, {0, 0}, {0, 0}, {0, 0}};
inline constexpr GMat g_a1{{0, 0}, {0, 1}, {0, -1}, {0, 0}};
inline constexpr GMat g_a2{{0, 0}, {1, 0}, {1, 0}, {0, 0}};
inline constexpr GMat g_beta{{1, 0}, {0, 0}, {0, 0}, {-1, 0}};

}  // namespace detail

// Exact (integer-arithmetic) verification of the matrix identities:
// alpha^j, beta Hermitian with square one; alpha^1 alpha^2 + alpha^2 alpha^1 = 0;
// alpha^j beta + beta alpha^j = 0. Returns true iff all hold exactly.
constexpr bool verify_exact_identities() {
    using namespace detail;
    for (GMat m : {g_a1, g_a2, g_beta}) {
        if (!(m.adjoint() == m)) return false;
        if (!(m * m == g_id)) return false;
    }
    if (!(g_a1 * g_a2 + g_a2 * g_a1 == g_zero)) return false;
    if (!(g_a1 * g_beta + g_beta * g_a1 == g_zero)) return false;
    if (!(g_a2 * g_beta + g_beta * g_a2 == g_zero)) return false;
    return true;
}

static_assert(verify_exact_identities());

}  // namespace dirac
}  // namespace csd
