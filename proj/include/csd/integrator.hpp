#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "csd/model.hpp"
#include "csd/multiplier.hpp"
#include "csd/trajectory.hpp"

namespace csd {

/** The half-wave components psi_pm = Pi_pm(D) psi, kept in frequency
 * representation. Pi_+ psi_+ = psi_+ and Pi_- psi_- = psi_- hold by
 * construction and are re-enforced after every nonlinear step. */
struct HalfWavePair {
    SpinorField plus;
    SpinorField minus;
};

inline HalfWavePair split_initial_data(const SpinorField& psi0) {
    return {half_wave_projection(psi0, +1).to(Rep::frequency),
            half_wave_projection(psi0, -1).to(Rep::frequency)};
}

// psi_pm(t) = e^{-+ i t |D|} psi_pm(0), the exact free half-wave flow.
inline HalfWavePair free_propagate(const HalfWavePair& pair, double t) {
    HalfWavePair out{pair.plus.to(Rep::frequency), pair.minus.to(Rep::frequency)};
    const TorusGrid& g = out.plus.grid();
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const double w = std::hypot(g.freq(i1), g.freq(i2));
            const long j = g.index(i1, i2);
            const cd ph_plus = std::polar(1.0, -t * w);
            const cd ph_minus = std::polar(1.0, t * w);
            out.plus.u1()[j] *= ph_plus;
            out.plus.u2()[j] *= ph_plus;
            out.minus.u1()[j] *= ph_minus;
            out.minus.u2()[j] *= ph_minus;
        }
    return out;
}

// Max projection-compatibility defect of the pair, relative to its size.
inline double projection_defect(const HalfWavePair& pair) {
    const double np = l2_norm(pair.plus), nm = l2_norm(pair.minus);
    const double dp = l2_norm(half_wave_projection(pair.plus, +1) - pair.plus);
    const double dm = l2_norm(half_wave_projection(pair.minus, -1) - pair.minus);
    return std::max(dp / std::max(1.0, np), dm / std::max(1.0, nm));
}

struct SolverConfig {
    int n = 16;
    double extent = 2.0 * std::numbers::pi;
    double dt = 1e-2;
    double T = 1.0;
    double mass = 0.0;
    bool dealias = true;
    int sign_convention = default_sign_convention;
    bool enable_nonlinearity = true;
    long stride = 1;  // record every stride-th step
    std::uint64_t seed = 0;
    // Optional source term F(t) on the right of i dt psi = ... + F, given in
    // frequency representation (manufactured-solution studies).
    std::function<SpinorField(double)> forcing;

    long steps() const {
        const double s = T / dt;
        return static_cast<long>(std::llround(s));
    }

    void validate() const {
        if (n <= 0 || n % 2 != 0) throw ConfigError("solver: n must be positive even");
        if (!(extent > 0.0)) throw ConfigError("solver: extent must be positive");
        if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
        if (!(T > 0.0)) throw ConfigError("solver: T must be positive");
        if (mass < 0.0) throw ConfigError("solver: mass must be nonnegative");
        if (stride < 1) throw ConfigError("solver: stride must be >= 1");
        if (sign_convention != 1 && sign_convention != -1)
            throw ConfigError("solver: sign_convention must be +-1");
        const long s = steps();
        if (s < 1 || std::abs(static_cast<double>(s) * dt - T) > 1e-9 * std::max(1.0, T))
            throw ConfigError("solver: T must be an integer multiple of dt");
        if (s % stride != 0) throw ConfigError("solver: step count must be divisible by stride");
    }
};

namespace detail {

/** One interaction-picture RK4 step of the split system
 *   dt psi_pm = -i ( +-|D| psi_pm + m beta psi_-+ + Pi_pm (N(psi,psi,psi) + F) ).
 * The substitution phi_pm(tau) = e^{+- i tau |D|} psi_pm(t + tau) integrates
 * the stiff linear part exactly; RK4 acts on the source term only, so with the
 * mass, nonlinearity and forcing all absent a step reduces to the exact free
 * propagator. */
class Stepper {
  public:
    Stepper(const TorusGrid& g, double dt, double mass, int sign, bool nonlin, bool do_dealias,
            std::function<SpinorField(double)> forcing)
        : grid_(g), dt_(dt), mass_(mass), sign_(sign), nonlin_(nonlin), dealias_(do_dealias),
          forcing_(std::move(forcing)) {
        const long sz = g.size();
        absxi_.resize(static_cast<size_t>(sz));
        proj_plus_.resize(static_cast<size_t>(sz));
        proj_minus_.resize(static_cast<size_t>(sz));
        mask_.resize(static_cast<size_t>(sz));
        for (int i1 = 0; i1 < g.n(); ++i1)
            for (int i2 = 0; i2 < g.n(); ++i2) {
                const long j = g.index(i1, i2);
                absxi_[j] = std::hypot(g.freq(i1), g.freq(i2));
                proj_plus_[j] = dirac::half_wave(g.freq(i1), g.freq(i2), +1);
                proj_minus_[j] = dirac::half_wave(g.freq(i1), g.freq(i2), -1);
                mask_[j] = g.in_dealias_band(g.mode(i1), g.mode(i2)) ? 1.0 : 0.0;
            }
    }

    bool has_source() const { return mass_ != 0.0 || nonlin_ || static_cast<bool>(forcing_); }

    void step(HalfWavePair& y, double t) const {
        if (!has_source()) {
            apply_phase(y, dt_);
            return;
        }
        HalfWavePair k1 = source(y, t, 0.0);
        HalfWavePair k2 = source(axpy(y, k1, 0.5 * dt_), t, 0.5 * dt_);
        HalfWavePair k3 = source(axpy(y, k2, 0.5 * dt_), t, 0.5 * dt_);
        HalfWavePair k4 = source(axpy(y, k3, dt_), t, dt_);

        const double w = dt_ / 6.0;
        combine(y, k1, k2, k3, k4, w);
        apply_phase(y, dt_);
        project(y);
    }

    // Source term at frame offset zero (free flow factored out):
    //   -i ( m beta psi_-+ + Pi_pm (N + F) ), per sign.
    HalfWavePair source_at(const HalfWavePair& y, double t) const { return source(y, t, 0.0); }

  private:
    static HalfWavePair axpy(const HalfWavePair& y, const HalfWavePair& k, double a) {
        HalfWavePair out = y;
        accum(out.plus, k.plus, a);
        accum(out.minus, k.minus, a);
        return out;
    }
    static void accum(SpinorField& f, const SpinorField& g, double a) {
        for (size_t i = 0; i < f.u1().size(); ++i) {
            f.u1()[i] += a * g.u1()[i];
            f.u2()[i] += a * g.u2()[i];
        }
    }
    static void combine(HalfWavePair& y, const HalfWavePair& k1, const HalfWavePair& k2,
                        const HalfWavePair& k3, const HalfWavePair& k4, double w) {
        auto comb = [w](SpinorField& f, const SpinorField& a, const SpinorField& b,
                        const SpinorField& c, const SpinorField& d) {
            for (size_t i = 0; i < f.u1().size(); ++i) {
                f.u1()[i] += w * (a.u1()[i] + 2.0 * b.u1()[i] + 2.0 * c.u1()[i] + d.u1()[i]);
                f.u2()[i] += w * (a.u2()[i] + 2.0 * b.u2()[i] + 2.0 * c.u2()[i] + d.u2()[i]);
            }
        };
        comb(y.plus, k1.plus, k2.plus, k3.plus, k4.plus);
        comb(y.minus, k1.minus, k2.minus, k3.minus, k4.minus);
    }

    // Multiply psi_pm by e^{-+ i tau |D|} in place.
    void apply_phase(HalfWavePair& y, double tau) const {
        for (size_t j = 0; j < absxi_.size(); ++j) {
            const cd ph = std::polar(1.0, -tau * absxi_[j]);
            const cd phc = std::conj(ph);
            y.plus.u1()[j] *= ph;
            y.plus.u2()[j] *= ph;
            y.minus.u1()[j] *= phc;
            y.minus.u2()[j] *= phc;
        }
    }

    void project(HalfWavePair& y) const {
        for (size_t j = 0; j < absxi_.size(); ++j) {
            cd v1, v2;
            proj_plus_[j].apply(y.plus.u1()[j], y.plus.u2()[j], v1, v2);
            y.plus.u1()[j] = v1;
            y.plus.u2()[j] = v2;
            proj_minus_[j].apply(y.minus.u1()[j], y.minus.u2()[j], v1, v2);
            y.minus.u1()[j] = v1;
            y.minus.u2()[j] = v2;
        }
    }

    // g_pm(tau, phi) = e^{+- i tau |D|} S_pm(e^{-+ i tau |D|} phi), with
    // S_pm = -i (m beta psi_-+ + Pi_pm (N + F)(t + tau)).
    HalfWavePair source(HalfWavePair phi, double t, double tau) const {
        if (tau != 0.0) apply_phase(phi, tau);  // phi -> psi(t + tau)

        const size_t sz = absxi_.size();
        SpinorField sum = phi.plus;
        accum(sum, phi.minus, 1.0);

        // N(psi,psi,psi) + F, in frequency representation.
        std::vector<cd> n1(sz, cd{0.0}), n2(sz, cd{0.0});
        if (nonlin_) {
            SpinorField nf = nonlinearity_freq(sum);
            n1 = std::move(nf.u1());
            n2 = std::move(nf.u2());
        }
        if (forcing_) {
            SpinorField f = forcing_(t + tau).to(Rep::frequency);
            require_same_grid(f.grid(), grid_, "forcing");
            for (size_t j = 0; j < sz; ++j) {
                n1[j] += f.u1()[j];
                n2[j] += f.u2()[j];
            }
        }

        const cd mi{0.0, -1.0};
        HalfWavePair out{SpinorField(grid_, Rep::frequency), SpinorField(grid_, Rep::frequency)};
        for (size_t j = 0; j < sz; ++j) {
            // mass coupling m beta psi_-+ (beta = diag(1,-1))
            cd p1 = mass_ * phi.minus.u1()[j] + n1[j];
            cd p2 = -mass_ * phi.minus.u2()[j] + n2[j];
            cd m1 = mass_ * phi.plus.u1()[j] + n1[j];
            cd m2 = -mass_ * phi.plus.u2()[j] + n2[j];
            cd v1, v2;
            proj_plus_[j].apply(p1, p2, v1, v2);
            out.plus.u1()[j] = mi * v1;
            out.plus.u2()[j] = mi * v2;
            proj_minus_[j].apply(m1, m2, v1, v2);
            out.minus.u1()[j] = mi * v1;
            out.minus.u2()[j] = mi * v2;
        }
        if (tau != 0.0) {
            // back to the frame at offset zero: multiply by e^{+- i tau |D|}
            apply_phase_inverse(out, tau);
        }
        return out;
    }

    void apply_phase_inverse(HalfWavePair& y, double tau) const {
        for (size_t j = 0; j < absxi_.size(); ++j) {
            const cd ph = std::polar(1.0, tau * absxi_[j]);
            const cd phc = std::conj(ph);
            y.plus.u1()[j] *= ph;
            y.plus.u2()[j] *= ph;
            y.minus.u1()[j] *= phc;
            y.minus.u2()[j] *= phc;
        }
    }

    // N(psi,psi,psi) for a frequency-rep psi, returned in frequency rep with
    // the dealias mask applied.
    SpinorField nonlinearity_freq(const SpinorField& psi_hat) const {
        SpinorField psi = psi_hat.to(Rep::physical);
        std::vector<cd> k0 = bilinear_scalar(dirac::identity, psi, psi);
        std::vector<cd> k1 = bilinear_scalar(dirac::alpha1, psi, psi);
        std::vector<cd> k2 = bilinear_scalar(dirac::alpha2, psi, psi);
        std::vector<cd> k0h, k1h, k2h;
        fft_forward(grid_.n(), k0, k0h);
        fft_forward(grid_.n(), k1, k1h);
        fft_forward(grid_.n(), k2, k2h);
        std::vector<cd> p0h, p1h, p2h;
        potentials_from_bilinears(grid_, k0h, k1h, k2h, p0h, p1h, p2h);
        std::vector<cd> s0, s1, s2;
        fft_inverse(grid_.n(), p0h, s0);
        fft_inverse(grid_.n(), p1h, s1);
        fft_inverse(grid_.n(), p2h, s2);

        SpinorField out(grid_, Rep::physical);
        const double sg = static_cast<double>(sign_);
        for (size_t i = 0; i < s0.size(); ++i) {
            cd v1, v2, w1, w2;
            dirac::alpha1.apply(psi.u1()[i], psi.u2()[i], v1, v2);
            dirac::alpha2.apply(psi.u1()[i], psi.u2()[i], w1, w2);
            out.u1()[i] = sg * (s0[i] * psi.u1()[i] + s1[i] * v1 + s2[i] * w1);
            out.u2()[i] = sg * (s0[i] * psi.u2()[i] + s1[i] * v2 + s2[i] * w2);
        }
        SpinorField hat = out.to(Rep::frequency);
        if (dealias_)
            for (size_t j = 0; j < mask_.size(); ++j) {
                hat.u1()[j] *= mask_[j];
                hat.u2()[j] *= mask_[j];
            }
        return hat;
    }

    TorusGrid grid_;
    double dt_, mass_;
    int sign_;
    bool nonlin_, dealias_;
    std::function<SpinorField(double)> forcing_;
    std::vector<double> absxi_;
    std::vector<Mat2> proj_plus_, proj_minus_;
    std::vector<double> mask_;
};

}  // namespace detail

// The split-equation source term (free flow factored out):
//   rhs_pm = -i ( m beta psi_-+ + Pi_pm N(psi_+ + psi_-, ..., ...) ).
inline HalfWavePair rhs(const HalfWavePair& pair, double mass, int sign = default_sign_convention) {
    const TorusGrid& g = pair.plus.grid();
    detail::Stepper st(g, 1.0, mass, sign, /*nonlin=*/true, /*dealias=*/true, nullptr);
    HalfWavePair y{pair.plus.to(Rep::frequency), pair.minus.to(Rep::frequency)};
    return st.source_at(y, 0.0);
}

/** Integrate the split system with interaction-picture RK4. Frames hold
 * psi = psi_+ + psi_- every `stride` steps (plus the initial frame) in
 * physical representation. Deterministic for a fixed config. Throws
 * BlowUpError at the first non-finite step (rough data near the regularity
 * threshold may legitimately trigger this at coarse resolution). */
inline Trajectory integrate(const SolverConfig& cfg, const SpinorField& psi0_in) {
    cfg.validate();
    TorusGrid g(cfg.n, cfg.extent);
    require_same_grid(g, psi0_in.grid(), "integrate");

    SpinorField psi0 = cfg.dealias ? dealias(psi0_in) : psi0_in;

    // Step-size guard (heuristic, not a proof): dt (m + ||psi0||^2_{H^1/2}) <= 1/2.
    const double h_half = sobolev_norm(psi0, 0.5);
    if (cfg.dt * (cfg.mass + h_half * h_half) > 0.5)
        throw ConfigError("integrate: dt too large for the step-size guard");

    HalfWavePair y = split_initial_data(psi0);
    detail::Stepper st(g, cfg.dt, cfg.mass, cfg.sign_convention, cfg.enable_nonlinearity,
                       cfg.dealias, cfg.forcing);

    Trajectory traj;
    traj.dt = cfg.dt * static_cast<double>(cfg.stride);
    traj.mass = cfg.mass;
    traj.sign_convention = cfg.sign_convention;
    traj.seed = cfg.seed;

    auto record = [&](const HalfWavePair& p) {
        SpinorField sum = p.plus;
        for (size_t i = 0; i < sum.u1().size(); ++i) {
            sum.u1()[i] += p.minus.u1()[i];
            sum.u2()[i] += p.minus.u2()[i];
        }
        traj.frames.push_back(sum.to(Rep::physical));
    };

    record(y);
    const long steps = cfg.steps();
    for (long k = 0; k < steps; ++k) {
        st.step(y, static_cast<double>(k) * cfg.dt);
        if (!std::isfinite(l2_norm(y.plus)) || !std::isfinite(l2_norm(y.minus)))
            throw BlowUpError("integrate: non-finite value", k + 1,
                              static_cast<double>(k + 1) * cfg.dt);
        if ((k + 1) % cfg.stride == 0) record(y);
    }
    return traj;
}

// || psi(t) ||^2_{L2} per frame (the conserved charge of the flow).
inline std::vector<double> charge(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.frames.size());
    for (const auto& f : traj.frames) {
        const double v = l2_norm(f);
        out.push_back(v * v);
    }
    return out;
}

// Max relative charge drift over the trajectory.
inline double charge_drift(const Trajectory& traj) {
    std::vector<double> q = charge(traj);
    if (q.empty() || q.front() == 0.0) return 0.0;
    double worst = 0.0;
    for (double v : q) worst = std::max(worst, std::abs(v - q.front()) / q.front());
    return worst;
}

namespace mms {

// Manufactured solution psi*(t,x) = e^{i(x . (1,0) - omega t)} (1, -i)/sqrt(2):
// the half-wave eigenmode at xi = (1,0) carried at temporal frequency omega.
// With omega = 1 this is the free massless solution and the interaction
// picture reproduces it to machine precision (an exactness oracle); an
// off-characteristic omega leaves a genuinely time-dependent source in the
// rotating frame, which is what a convergence-order study needs.
inline SpinorField exact(const TorusGrid& g, double t, double omega = 1.0) {
    const double r = 1.0 / std::sqrt(2.0);
    const cd ph = std::polar(1.0, -omega * t);
    SpinorField f(g, Rep::frequency);
    const long j = g.index(g.mode_index(1), g.mode_index(0));
    f.u1()[j] = r * ph;
    f.u2()[j] = cd{0.0, -r} * ph;
    return f;
}

// Residual of psi* in the full equation, so that psi* solves
// i dt psi = -i alpha.grad psi + m beta psi + N + F on the discrete operators:
// N(psi*) vanishes (single mode) and -i alpha.grad psi* = psi*, leaving
// F(t) = (omega - 1) psi*(t) - m beta psi*(t).
inline SpinorField forcing(const TorusGrid& g, double t, double m, double omega = 1.0) {
    const double r = 1.0 / std::sqrt(2.0);
    const cd ph = std::polar(1.0, -omega * t);
    SpinorField f(g, Rep::frequency);
    const long j = g.index(g.mode_index(1), g.mode_index(0));
    f.u1()[j] = ((omega - 1.0) - m) * r * ph;
    f.u2()[j] = ((omega - 1.0) + m) * cd{0.0, -r} * ph;
    return f;
}

}  // namespace mms
}  // namespace csd
