#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "csd/trajectory.hpp"

namespace csd {

enum class Window { none, smooth_cutoff };

/** Space-time Fourier coefficients of a trajectory, indexed by (tau, xi).
 *
 * The M frames are treated as periodic samples of period P = M * dt; the tau
 * lattice is (2*pi/P) * {-M/2+1, ..., M/2}, mirroring the spatial convention.
 * With window = none the transform is lossless: the weighted l2 of the
 * coefficients with unit weight equals the discrete L2_{t,x} norm of the
 * trajectory. Values are periodized estimators of the continuum norms, not
 * restriction norms.
 */
struct SpaceTimeSpectrum {
    TorusGrid grid;
    long m_frames;
    double dt;
    Window window;
    // c1[tau_index], c2[tau_index]: spatial coefficient arrays per component.
    std::vector<std::vector<cd>> c1, c2;

    double period() const { return static_cast<double>(m_frames) * dt; }
    int tau_mode(long it) const { return static_cast<int>(it <= m_frames / 2 ? it : it - m_frames); }
    double tau_freq(long it) const { return 2.0 * std::numbers::pi / period() * tau_mode(it); }
};

inline double window_weight(Window w, double u) {
    if (w == Window::none) return 1.0;
    // Raised-cosine taper over the outer 10% of the interval.
    const double a = 0.1;
    if (u < a) return 0.5 * (1.0 + std::cos(std::numbers::pi * (u / a - 1.0)));
    if (u > 1.0 - a) return 0.5 * (1.0 + std::cos(std::numbers::pi * ((u - (1.0 - a)) / a)));
    return 1.0;
}

inline SpaceTimeSpectrum spacetime_transform(const Trajectory& traj, Window window = Window::none) {
    if (traj.frames.empty()) throw ShapeError("spacetime_transform: empty trajectory");
    const long M = traj.n_frames();
    const TorusGrid& g = traj.grid();
    const size_t sz = static_cast<size_t>(g.size());

    // Spatial transforms per frame, with the optional temporal taper.
    std::vector<std::vector<cd>> f1(M), f2(M);
    for (long m = 0; m < M; ++m) {
        SpinorField hat = traj.frames[static_cast<size_t>(m)].to(Rep::frequency);
        f1[m] = std::move(hat.u1());
        f2[m] = std::move(hat.u2());
        const double w = window_weight(window, static_cast<double>(m) / static_cast<double>(M));
        if (w != 1.0)
            for (size_t j = 0; j < sz; ++j) {
                f1[m][j] *= w;
                f2[m][j] *= w;
            }
    }

    SpaceTimeSpectrum sp{g, M, traj.dt, window, {}, {}};
    sp.c1.assign(static_cast<size_t>(M), std::vector<cd>(sz, cd{0.0}));
    sp.c2.assign(static_cast<size_t>(M), std::vector<cd>(sz, cd{0.0}));
    // Plain DFT in time with the 1/M forward factor; M is small (frame counts).
    for (long it = 0; it < M; ++it) {
        for (long m = 0; m < M; ++m) {
            const double ph = -2.0 * std::numbers::pi * static_cast<double>(it) * static_cast<double>(m) /
                              static_cast<double>(M);
            const cd e{std::cos(ph), std::sin(ph)};
            for (size_t j = 0; j < sz; ++j) {
                sp.c1[it][j] += e * f1[m][j];
                sp.c2[it][j] += e * f2[m][j];
            }
        }
        const double inv = 1.0 / static_cast<double>(M);
        for (size_t j = 0; j < sz; ++j) {
            sp.c1[it][j] *= inv;
            sp.c2[it][j] *= inv;
        }
    }
    return sp;
}

namespace detail {

enum class STWeight { xsb_plus, xsb_minus, hsb };

inline double st_weight_sq(STWeight kind, double tau, double abs_xi, double s, double b) {
    double w;
    switch (kind) {
        case STWeight::xsb_plus: w = tau + abs_xi; break;
        case STWeight::xsb_minus: w = tau - abs_xi; break;
        default: w = std::abs(tau) - abs_xi; break;
    }
    return std::pow(1.0 + abs_xi * abs_xi, s) * std::pow(1.0 + w * w, b);
}

inline double weighted_norm(const SpaceTimeSpectrum& sp, STWeight kind, double s, double b) {
    const TorusGrid& g = sp.grid;
    double acc = 0.0;
    for (long it = 0; it < sp.m_frames; ++it) {
        const double tau = sp.tau_freq(it);
        for (int i1 = 0; i1 < g.n(); ++i1)
            for (int i2 = 0; i2 < g.n(); ++i2) {
                const double abs_xi = std::hypot(g.freq(i1), g.freq(i2));
                const long j = g.index(i1, i2);
                acc += st_weight_sq(kind, tau, abs_xi, s, b) *
                       (std::norm(sp.c1[it][j]) + std::norm(sp.c2[it][j]));
            }
    }
    return g.extent() * std::sqrt(sp.period() * acc);
}

}  // namespace detail

// || <xi>^s <tau +- |xi|>^b fhat ||_{l2}, half-wave adapted.
inline double xsb_norm(const SpaceTimeSpectrum& sp, double s, double b, int sign) {
    return detail::weighted_norm(sp, sign > 0 ? detail::STWeight::xsb_plus : detail::STWeight::xsb_minus,
                                 s, b);
}
inline double xsb_norm(const Trajectory& traj, double s, double b, int sign) {
    return xsb_norm(spacetime_transform(traj), s, b, sign);
}

// || <xi>^s <|tau| - |xi|>^b fhat ||_{l2}, two-sided wave-Sobolev weight.
inline double hsb_norm(const SpaceTimeSpectrum& sp, double s, double b) {
    return detail::weighted_norm(sp, detail::STWeight::hsb, s, b);
}
inline double hsb_norm(const Trajectory& traj, double s, double b) {
    return hsb_norm(spacetime_transform(traj), s, b);
}

struct EmbeddingReport {
    double hsb;
    double xsb_plus;
    double xsb_minus;
    double slack;  // min(xsb_plus, xsb_minus) - hsb, nonnegative when the embedding holds
};

// Checks || . ||_{H^{s,b}} <= || . ||_{X^{s,b}_pm} for b >= 0. The weight
// inequality <|tau|-|xi|> <= <tau +- |xi|> holds pointwise on the lattice, so
// a violation is an internal error, not a data property.
inline EmbeddingReport embedding_check(const Trajectory& traj, double s, double b) {
    if (b < 0.0) throw ConfigError("embedding_check: requires b >= 0");
    SpaceTimeSpectrum sp = spacetime_transform(traj);
    EmbeddingReport r{};
    r.hsb = hsb_norm(sp, s, b);
    r.xsb_plus = xsb_norm(sp, s, b, +1);
    r.xsb_minus = xsb_norm(sp, s, b, -1);
    const double m = std::min(r.xsb_plus, r.xsb_minus);
    r.slack = m - r.hsb;
    if (r.hsb > m * (1.0 + 1e-12) + 1e-300)
        throw ConsistencyError("embedding_check: H^{s,b} norm exceeded X^{s,b} norm");
    return r;
}

// Discrete L2 over the periodized space-time lattice.
inline double l2_spacetime(const Trajectory& traj) {
    double acc = 0.0;
    for (const auto& f : traj.frames) {
        const double v = l2_norm(f);
        acc += v * v;
    }
    return std::sqrt(acc * traj.dt);
}

}  // namespace csd
