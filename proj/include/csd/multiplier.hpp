#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>

#include "csd/dirac.hpp"
#include "csd/field.hpp"

namespace csd {

/** Fourier multiplier: a map xi -> scalar or xi -> 2x2 matrix, applied mode by
 * mode in frequency space. The zero-mode value is always explicitly assigned
 * (singular symbols like Delta^{-1} d_j never divide by |xi| = 0), and
 * derivative-type symbols zero the asymmetric Nyquist row/column to keep the
 * active lattice symmetric. */
class MultiplierSymbol {
  public:
    using ScalarFn = std::function<cd(double, double)>;
    using MatrixFn = std::function<Mat2(double, double)>;

    static MultiplierSymbol scalar(ScalarFn f, cd zero_value, bool zero_nyquist = false) {
        MultiplierSymbol s;
        s.scalar_ = std::move(f);
        s.zero_scalar_ = zero_value;
        s.zero_nyquist_ = zero_nyquist;
        return s;
    }
    static MultiplierSymbol matrix(MatrixFn f, Mat2 zero_value, bool zero_nyquist = false) {
        MultiplierSymbol s;
        s.matrix_ = std::move(f);
        s.zero_matrix_ = zero_value;
        s.zero_nyquist_ = zero_nyquist;
        return s;
    }

    bool is_matrix() const { return static_cast<bool>(matrix_); }
    bool zeroes_nyquist() const { return zero_nyquist_; }

    // Pin the symbol to one frequency lattice; applying it to a field on a
    // different grid is then a shape error.
    MultiplierSymbol bound_to(const TorusGrid& g) const {
        MultiplierSymbol s = *this;
        s.bound_ = g;
        return s;
    }
    const std::optional<TorusGrid>& bound_grid() const { return bound_; }

    cd eval_scalar(const TorusGrid& g, int k1, int k2) const {
        if (zero_nyquist_ && (g.is_nyquist(k1) || g.is_nyquist(k2))) return cd{0.0};
        if (k1 == 0 && k2 == 0) return zero_scalar_;
        return scalar_(g.freq_of_mode(k1), g.freq_of_mode(k2));
    }
    Mat2 eval_matrix(const TorusGrid& g, int k1, int k2) const {
        if (zero_nyquist_ && (g.is_nyquist(k1) || g.is_nyquist(k2)))
            return Mat2{0.0, 0.0, 0.0, 0.0};
        if (k1 == 0 && k2 == 0) return zero_matrix_;
        return matrix_(g.freq_of_mode(k1), g.freq_of_mode(k2));
    }

  private:
    MultiplierSymbol() = default;
    ScalarFn scalar_;
    MatrixFn matrix_;
    std::optional<TorusGrid> bound_;
    cd zero_scalar_{0.0};
    Mat2 zero_matrix_{0.0, 0.0, 0.0, 0.0};
    bool zero_nyquist_ = false;
};

namespace symbols {

inline MultiplierSymbol identity() {
    return MultiplierSymbol::scalar([](double, double) { return cd{1.0}; }, cd{1.0});
}

// |xi|
inline MultiplierSymbol abs_xi() {
    return MultiplierSymbol::scalar([](double x, double y) { return cd{std::hypot(x, y)}; }, cd{0.0});
}

// <xi>^s = (1 + |xi|^2)^{s/2}
inline MultiplierSymbol bracket_pow(double s) {
    return MultiplierSymbol::scalar(
        [s](double x, double y) { return cd{std::pow(1.0 + x * x + y * y, 0.5 * s)}; }, cd{1.0});
}

// Delta^{-1} d_j: -i xi_j / |xi|^2, zero mode -> 0 (mean projected out),
// Nyquist zeroed (odd symbol, keeps real fields real).
inline MultiplierSymbol inv_laplacian_derivative(int axis) {
    return MultiplierSymbol::scalar(
        [axis](double x, double y) {
            const double q = x * x + y * y;
            return cd{0.0, -1.0} * cd{(axis == 1 ? x : y) / q};
        },
        cd{0.0}, /*zero_nyquist=*/true);
}

// d_j: i xi_j, Nyquist zeroed.
inline MultiplierSymbol derivative(int axis) {
    return MultiplierSymbol::scalar(
        [axis](double x, double y) { return cd{0.0, axis == 1 ? x : y}; }, cd{0.0},
        /*zero_nyquist=*/true);
}

// Pi_pm(xi); the zero-mode value follows the fixed Pi_pm(0) = (I +- alpha1)/2
// convention from dirac::half_wave.
inline MultiplierSymbol half_wave(int sign) {
    return MultiplierSymbol::matrix(
        [sign](double x, double y) { return dirac::half_wave(x, y, sign); },
        dirac::half_wave(0.0, 0.0, sign));
}

// Symbol of -i alpha . grad: alpha . xi, Nyquist zeroed (odd).
inline MultiplierSymbol alpha_dot_xi() {
    return MultiplierSymbol::matrix(
        [](double x, double y) { return dirac::alpha_dot(x, y); }, Mat2{0.0, 0.0, 0.0, 0.0},
        /*zero_nyquist=*/true);
}

// |D| Pi_+ - |D| Pi_-, the split form of -i alpha . grad; Nyquist zeroed to
// match alpha_dot_xi.
inline MultiplierSymbol split_dirac() {
    return MultiplierSymbol::matrix(
        [](double x, double y) {
            const cd r{std::hypot(x, y)};
            return r * dirac::half_wave(x, y, +1) - r * dirac::half_wave(x, y, -1);
        },
        Mat2{0.0, 0.0, 0.0, 0.0}, /*zero_nyquist=*/true);
}

}  // namespace symbols

inline ScalarField apply_multiplier(const ScalarField& f, const MultiplierSymbol& symbol) {
    if (symbol.is_matrix()) throw ShapeError("apply_multiplier: matrix symbol on a scalar field");
    if (symbol.bound_grid() && *symbol.bound_grid() != f.grid())
        throw ShapeError("apply_multiplier: symbol bound to a different lattice");
    ScalarField hat = f.to(Rep::frequency);
    const TorusGrid& g = hat.grid();
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2)
            hat[g.index(i1, i2)] *= symbol.eval_scalar(g, g.mode(i1), g.mode(i2));
    return hat.to(f.rep());
}

inline SpinorField apply_multiplier(const SpinorField& f, const MultiplierSymbol& symbol) {
    if (symbol.bound_grid() && *symbol.bound_grid() != f.grid())
        throw ShapeError("apply_multiplier: symbol bound to a different lattice");
    SpinorField hat = f.to(Rep::frequency);
    const TorusGrid& g = hat.grid();
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const long idx = g.index(i1, i2);
            if (symbol.is_matrix()) {
                const Mat2 m = symbol.eval_matrix(g, g.mode(i1), g.mode(i2));
                cd v1, v2;
                m.apply(hat.u1()[idx], hat.u2()[idx], v1, v2);
                hat.u1()[idx] = v1;
                hat.u2()[idx] = v2;
            } else {
                const cd s = symbol.eval_scalar(g, g.mode(i1), g.mode(i2));
                hat.u1()[idx] *= s;
                hat.u2()[idx] *= s;
            }
        }
    return hat.to(f.rep());
}

// 1/2-rule dealiasing for the cubic nonlinearity: zero every mode with
// max(|k1|, |k2|) > n/4. The 2/3 rule would leave aliased images of cubic
// products inside the kept band.
template <typename Field>
Field dealias(const Field& f) {
    Field hat = f.to(Rep::frequency);
    const TorusGrid& g = hat.grid();
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            if (g.in_dealias_band(g.mode(i1), g.mode(i2))) continue;
            const long idx = g.index(i1, i2);
            if constexpr (std::is_same_v<Field, SpinorField>) {
                hat.u1()[idx] = 0.0;
                hat.u2()[idx] = 0.0;
            } else {
                hat[idx] = 0.0;
            }
        }
    return hat.to(f.rep());
}

// Delta^{-1} d_axis f for a real field f; the result is real (Hermitian
// symmetry is preserved: odd imaginary symbol, Nyquist and zero mode zeroed).
inline ScalarField inverse_laplacian_derivative(const ScalarField& f, int axis) {
    ScalarField out = apply_multiplier(f, symbols::inv_laplacian_derivative(axis));
    return out;
}

// Pi_pm(D) psi.
inline SpinorField half_wave_projection(const SpinorField& psi, int sign) {
    return apply_multiplier(psi, symbols::half_wave(sign));
}

// -i alpha . grad psi, evaluated both as the direct symbol alpha . xi and as
// |D| Pi_+ - |D| Pi_-; the two paths must agree to 1e-12 relative error.
inline SpinorField dirac_derivative(const SpinorField& psi) {
    SpinorField direct = apply_multiplier(psi, symbols::alpha_dot_xi());
    SpinorField split = apply_multiplier(psi, symbols::split_dirac());
    const double ref = l2_norm(direct);
    const double diff = l2_norm(direct - split);
    if (diff > 1e-12 * std::max(1.0, ref))
        throw ConsistencyError("dirac_derivative: symbol and half-wave paths disagree");
    return direct;
}

namespace detail {

inline double sobolev_weight_sq(double xi1, double xi2, double s, bool homogeneous) {
    const double q = xi1 * xi1 + xi2 * xi2;
    if (homogeneous) return q == 0.0 ? 0.0 : std::pow(q, s);
    return std::pow(1.0 + q, s);
}

}  // namespace detail

// H^s / Hdot^s norm. Normalisation: the s = 0 inhomogeneous norm equals the
// physical-space L2 norm (Parseval with the 1/n^2 forward convention). The
// homogeneous norm excludes the zero mode.
inline double sobolev_norm(const ScalarField& f, double s, bool homogeneous = false) {
    ScalarField hat = f.to(Rep::frequency);
    const TorusGrid& g = hat.grid();
    double acc = 0.0;
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2)
            acc += detail::sobolev_weight_sq(g.freq(i1), g.freq(i2), s, homogeneous) *
                   std::norm(hat[g.index(i1, i2)]);
    return g.extent() * std::sqrt(acc);
}

inline double sobolev_norm(const SpinorField& f, double s, bool homogeneous = false) {
    SpinorField hat = f.to(Rep::frequency);
    const TorusGrid& g = hat.grid();
    double acc = 0.0;
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const double w = detail::sobolev_weight_sq(g.freq(i1), g.freq(i2), s, homogeneous);
            const long idx = g.index(i1, i2);
            acc += w * (std::norm(hat.u1()[idx]) + std::norm(hat.u2()[idx]));
        }
    return g.extent() * std::sqrt(acc);
}

}  // namespace csd
