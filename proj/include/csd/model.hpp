#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "csd/multiplier.hpp"
#include "csd/spacetime.hpp"
#include "csd/trajectory.hpp"

namespace csd {

/** The currents J^mu = <alpha^mu psi, psi>, real scalar fields in physical
 * representation. J^0 = |psi|^2 >= 0 and |J^i| <= J^0 pointwise (the alpha
 * matrices are Hermitian with eigenvalues +-1). */
struct CurrentFields {
    TorusGrid grid;
    std::vector<double> j0, j1, j2;
};

/** Coulomb-gauge potentials A_0, A_1, A_2: real, zero-mean scalar fields with
 * d1 A_1 + d2 A_2 = 0 exactly in frequency space. */
struct GaugePotentials {
    TorusGrid grid;
    std::vector<double> a0, a1, a2;
};

namespace detail {

// Pointwise bilinear <M psi1, psi2>(x), complex scalar values on the grid.
inline std::vector<cd> bilinear_scalar(const Mat2& m, const SpinorField& p1, const SpinorField& p2) {
    const size_t sz = p1.u1().size();
    std::vector<cd> out(sz);
    for (size_t i = 0; i < sz; ++i) {
        cd v1, v2;
        m.apply(p1.u1()[i], p1.u2()[i], v1, v2);
        out[i] = v1 * std::conj(p2.u1()[i]) + v2 * std::conj(p2.u2()[i]);
    }
    return out;
}

// Frequency-space assembly of the three elliptic solves from the bilinear
// spectra K0 = <psi1,psi2>, K1 = <a1 psi1,psi2>, K2 = <a2 psi1,psi2>:
//   P0 = Delta^{-1}(d1 K2 - d2 K1),  P1 = Delta^{-1} d2 K0,  P2 = -Delta^{-1} d1 K0.
// Zero mode and Nyquist rows are zeroed (Delta^{-1} convention / lattice
// symmetry). With psi1 = psi2 = psi these are the gauge potentials A_mu.
inline void potentials_from_bilinears(const TorusGrid& g, const std::vector<cd>& k0hat,
                                      const std::vector<cd>& k1hat, const std::vector<cd>& k2hat,
                                      std::vector<cd>& p0hat, std::vector<cd>& p1hat,
                                      std::vector<cd>& p2hat) {
    const size_t sz = static_cast<size_t>(g.size());
    p0hat.assign(sz, cd{0.0});
    p1hat.assign(sz, cd{0.0});
    p2hat.assign(sz, cd{0.0});
    const cd I{0.0, 1.0};
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const int k1 = g.mode(i1), k2 = g.mode(i2);
            if ((k1 == 0 && k2 == 0) || g.is_nyquist(k1) || g.is_nyquist(k2)) continue;
            const double x1 = g.freq_of_mode(k1), x2 = g.freq_of_mode(k2);
            const double q = x1 * x1 + x2 * x2;
            const long j = g.index(i1, i2);
            p0hat[j] = I / q * (x2 * k1hat[j] - x1 * k2hat[j]);
            p1hat[j] = -I * x2 / q * k0hat[j];
            p2hat[j] = I * x1 / q * k0hat[j];
        }
}

inline std::vector<double> real_part_checked(const TorusGrid& g, const std::vector<cd>& v,
                                             const char* what, double tol_scale = 1.0) {
    double max_im = 0.0, max_ab = 0.0;
    for (const auto& z : v) {
        max_im = std::max(max_im, std::abs(z.imag()));
        max_ab = std::max(max_ab, std::abs(z));
    }
    if (max_im > 1e-13 * std::max(1.0, max_ab) * tol_scale)
        throw ConsistencyError(std::string(what) + ": imaginary part above tolerance");
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    (void)g;
    return out;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// L2 norm of a real residual field over the symmetric frequency band: the
// spatial mean (torus Delta^{-1} convention) and the asymmetric Nyquist
// row/column (content no symmetric-lattice field can match) are projected out.
inline double l2_symmetric_mean_free(const TorusGrid& g, const std::vector<double>& v) {
    std::vector<cd> c(v.size());
    for (size_t i = 0; i < v.size(); ++i) c[i] = cd{v[i]};
    std::vector<cd> hat;
    fft_forward(g.n(), c, hat);
    double acc = 0.0;
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const int k1 = g.mode(i1), k2 = g.mode(i2);
            if ((k1 == 0 && k2 == 0) || g.is_nyquist(k1) || g.is_nyquist(k2)) continue;
            acc += std::norm(hat[static_cast<size_t>(g.index(i1, i2))]);
        }
    return g.extent() * std::sqrt(acc);
}

inline ScalarField real_to_field(const TorusGrid& g, const std::vector<double>& v) {
    std::vector<cd> c(v.size());
    for (size_t i = 0; i < v.size(); ++i) c[i] = cd{v[i]};
    return ScalarField(g, Rep::physical, std::move(c));
}

}  // namespace detail

// J^mu(x) = <alpha^mu psi(x), psi(x)>. The inner product is Hermitian against
// a Hermitian matrix, so an imaginary part above 1e-13 signals a broken matrix
// table and raises a consistency error.
inline CurrentFields currents(const SpinorField& psi_in) {
    SpinorField psi = psi_in.to(Rep::physical);
    const TorusGrid& g = psi.grid();
    CurrentFields c{g, {}, {}, {}};
    c.j0 = detail::real_part_checked(g, detail::bilinear_scalar(dirac::identity, psi, psi), "currents J0");
    c.j1 = detail::real_part_checked(g, detail::bilinear_scalar(dirac::alpha1, psi, psi), "currents J1");
    c.j2 = detail::real_part_checked(g, detail::bilinear_scalar(dirac::alpha2, psi, psi), "currents J2");
    return c;
}

// Coulomb-gauge potentials slaved to psi:
//   A_0 = Delta^{-1}(d1 J^2 - d2 J^1),  A_1 = Delta^{-1} d2 J^0,  A_2 = -Delta^{-1} d1 J^0.
// The A_0 combination is the one under which the curl equation F_12 = -J^0 and
// the covariant Dirac residual vanish on solutions (see README, conventions).
inline GaugePotentials potentials(const SpinorField& psi_in) {
    SpinorField psi = psi_in.to(Rep::physical);
    const TorusGrid& g = psi.grid();
    std::vector<cd> k0 = detail::bilinear_scalar(dirac::identity, psi, psi);
    std::vector<cd> k1 = detail::bilinear_scalar(dirac::alpha1, psi, psi);
    std::vector<cd> k2 = detail::bilinear_scalar(dirac::alpha2, psi, psi);
    std::vector<cd> k0h, k1h, k2h;
    fft_forward(g.n(), k0, k0h);
    fft_forward(g.n(), k1, k1h);
    fft_forward(g.n(), k2, k2h);
    std::vector<cd> p0h, p1h, p2h;
    detail::potentials_from_bilinears(g, k0h, k1h, k2h, p0h, p1h, p2h);
    std::vector<cd> p0, p1, p2;
    fft_inverse(g.n(), p0h, p0);
    fft_inverse(g.n(), p1h, p1);
    fft_inverse(g.n(), p2h, p2);
    GaugePotentials a{g, {}, {}, {}};
    a.a0 = detail::real_part_checked(g, p0, "potential A0");
    a.a1 = detail::real_part_checked(g, p1, "potential A1");
    a.a2 = detail::real_part_checked(g, p2, "potential A2");
    return a;
}

// F_12 = d1 A_2 - d2 A_1 (spectral derivatives), real field.
inline std::vector<double> curvature_f12(const GaugePotentials& a) {
    const TorusGrid& g = a.grid;
    ScalarField a1 = detail::real_to_field(g, a.a1);
    ScalarField a2 = detail::real_to_field(g, a.a2);
    ScalarField f = apply_multiplier(a2, symbols::derivative(1));
    ScalarField h = apply_multiplier(a1, symbols::derivative(2));
    std::vector<cd> diff(f.values().size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = f[static_cast<long>(i)] - h[static_cast<long>(i)];
    return detail::real_part_checked(g, diff, "curvature F12");
}

// d1 A_1 + d2 A_2, should vanish identically (Coulomb gauge).
inline double coulomb_defect(const GaugePotentials& a) {
    const TorusGrid& g = a.grid;
    ScalarField a1 = detail::real_to_field(g, a.a1);
    ScalarField a2 = detail::real_to_field(g, a.a2);
    ScalarField d1 = apply_multiplier(a1, symbols::derivative(1));
    ScalarField d2 = apply_multiplier(a2, symbols::derivative(2));
    double acc = 0.0;
    for (size_t i = 0; i < d1.values().size(); ++i)
        acc += std::norm(d1[static_cast<long>(i)] + d2[static_cast<long>(i)]);
    return std::sqrt(g.dx() * g.dx() * acc);
}

namespace detail {

// Fourth-order finite-difference weights for d/dt at frame m of M frames
// (centered in the interior, one-sided at the ends). Row: {offset, weight},
// weights to be divided by 12*dt.
inline std::vector<std::pair<long, double>> dt_stencil(long m, long M) {
    if (M < 5) throw ShapeError("time stencil: need at least 5 frames");
    if (m >= 2 && m <= M - 3)
        return {{m - 2, 1.0}, {m - 1, -8.0}, {m + 1, 8.0}, {m + 2, -1.0}};
    if (m == 0) return {{0, -25.0}, {1, 48.0}, {2, -36.0}, {3, 16.0}, {4, -3.0}};
    if (m == 1) return {{0, -3.0}, {1, -10.0}, {2, 18.0}, {3, -6.0}, {4, 1.0}};
    if (m == M - 2)
        return {{M - 1, 3.0}, {M - 2, 10.0}, {M - 3, -18.0}, {M - 4, 6.0}, {M - 5, -1.0}};
    return {{M - 1, 25.0}, {M - 2, -48.0}, {M - 3, 36.0}, {M - 4, -16.0}, {M - 5, 3.0}};
}

}  // namespace detail

struct CsResiduals {
    double mu0, mu1, mu2;
};

/** L2 residuals of the three components of the curl equation
 * (1/2) eps^{mu nu rho} F_{nu rho} + J^mu, with A reconstructed from psi at
 * each frame and d/dt by fourth-order stencils:
 *   mu = 0:  F_12 + J^0
 *   mu = 1: -F_02 + J^1
 *   mu = 2:  F_01 + J^2
 * Each component is measured over the symmetric frequency band: the spatial
 * mean (the zero-mean Delta^{-1} cannot match mean J^mu on the torus) and the
 * asymmetric Nyquist row of the quadratic currents are projected out, both
 * torus discretization artifacts absent on the plane. Returns the maximum
 * over frames.
 */
inline CsResiduals chern_simons_residual(const Trajectory& traj) {
    const long M = traj.n_frames();
    if (M < 5) throw ShapeError("chern_simons_residual: need at least 5 frames");
    const TorusGrid& g = traj.grid();
    const size_t sz = static_cast<size_t>(g.size());

    std::vector<CurrentFields> js;
    std::vector<GaugePotentials> as;
    js.reserve(static_cast<size_t>(M));
    as.reserve(static_cast<size_t>(M));
    for (const auto& f : traj.frames) {
        SpinorField p = f.to(Rep::physical);
        js.push_back(currents(p));
        as.push_back(potentials(p));
    }

    CsResiduals r{0.0, 0.0, 0.0};
    for (long m = 0; m < M; ++m) {
        // mu = 0: algebraic, no time derivative.
        {
            std::vector<double> f12 = curvature_f12(as[static_cast<size_t>(m)]);
            std::vector<double> res(sz);
            for (size_t i = 0; i < sz; ++i) res[i] = f12[i] + js[static_cast<size_t>(m)].j0[i];
            r.mu0 = std::max(r.mu0, detail::l2_symmetric_mean_free(g, res));
        }

        // Time derivatives of A_1, A_2 at this frame.
        std::vector<double> da1(sz, 0.0), da2(sz, 0.0);
        for (auto [idx, w] : detail::dt_stencil(m, M)) {
            const auto& a = as[static_cast<size_t>(idx)];
            for (size_t i = 0; i < sz; ++i) {
                da1[i] += w * a.a1[i];
                da2[i] += w * a.a2[i];
            }
        }
        const double inv = 1.0 / (12.0 * traj.dt);
        for (size_t i = 0; i < sz; ++i) {
            da1[i] *= inv;
            da2[i] *= inv;
        }

        const auto& a = as[static_cast<size_t>(m)];
        ScalarField a0f = detail::real_to_field(g, a.a0);
        ScalarField d1a0 = apply_multiplier(a0f, symbols::derivative(1));
        ScalarField d2a0 = apply_multiplier(a0f, symbols::derivative(2));

        // mu = 1: -F_02 + J^1 = -dt A_2 + d2 A_0 + J^1
        // mu = 2:  F_01 + J^2 =  dt A_1 - d1 A_0 + J^2
        std::vector<double> r1(sz), r2(sz);
        for (size_t i = 0; i < sz; ++i) {
            r1[i] = -da2[i] + d2a0[static_cast<long>(i)].real() + js[static_cast<size_t>(m)].j1[i];
            r2[i] = da1[i] - d1a0[static_cast<long>(i)].real() + js[static_cast<size_t>(m)].j2[i];
        }
        r.mu1 = std::max(r.mu1, detail::l2_symmetric_mean_free(g, r1));
        r.mu2 = std::max(r.mu2, detail::l2_symmetric_mean_free(g, r2));
    }
    return r;
}

/** L2 residual of the covariant Dirac equation
 * i gamma^mu (d_mu - i A_mu) psi - m psi with A reconstructed from psi at each
 * frame. Unlike the curl residuals this diagnostic is sensitive to the sign of
 * the psi-A coupling, so it is the oracle that pins the sign convention of the
 * cubic nonlinearity. Returns the maximum over frames. */
inline double dirac_residual(const Trajectory& traj) {
    const long M = traj.n_frames();
    if (M < 5) throw ShapeError("dirac_residual: need at least 5 frames");
    const TorusGrid& g = traj.grid();
    const size_t sz = static_cast<size_t>(g.size());
    const cd I{0.0, 1.0};

    std::vector<SpinorField> phys;
    phys.reserve(static_cast<size_t>(M));
    for (const auto& f : traj.frames) phys.push_back(f.to(Rep::physical));

    double worst = 0.0;
    for (long m = 0; m < M; ++m) {
        const SpinorField& psi = phys[static_cast<size_t>(m)];
        GaugePotentials a = potentials(psi);

        std::vector<cd> dt1(sz, cd{0.0}), dt2(sz, cd{0.0});
        for (auto [idx, w] : detail::dt_stencil(m, M)) {
            const SpinorField& f = phys[static_cast<size_t>(idx)];
            for (size_t i = 0; i < sz; ++i) {
                dt1[i] += w * f.u1()[i];
                dt2[i] += w * f.u2()[i];
            }
        }
        const double inv = 1.0 / (12.0 * traj.dt);
        for (size_t i = 0; i < sz; ++i) {
            dt1[i] *= inv;
            dt2[i] *= inv;
        }

        SpinorField d1psi = apply_multiplier(psi, symbols::derivative(1));
        SpinorField d2psi = apply_multiplier(psi, symbols::derivative(2));

        SpinorField res(g, Rep::physical);
        for (size_t i = 0; i < sz; ++i) {
            // r = i g0 (dt psi) + g0 A0 psi + i g1 (d1 psi) + g1 A1 psi
            //   + i g2 (d2 psi) + g2 A2 psi - m psi
            cd r1{0.0}, r2{0.0}, v1, v2;
            dirac::gamma0.apply(dt1[i], dt2[i], v1, v2);
            r1 += I * v1;
            r2 += I * v2;
            dirac::gamma0.apply(psi.u1()[i], psi.u2()[i], v1, v2);
            r1 += a.a0[i] * v1;
            r2 += a.a0[i] * v2;
            dirac::gamma1.apply(d1psi.u1()[i], d1psi.u2()[i], v1, v2);
            r1 += I * v1;
            r2 += I * v2;
            dirac::gamma1.apply(psi.u1()[i], psi.u2()[i], v1, v2);
            r1 += a.a1[i] * v1;
            r2 += a.a1[i] * v2;
            dirac::gamma2.apply(d2psi.u1()[i], d2psi.u2()[i], v1, v2);
            r1 += I * v1;
            r2 += I * v2;
            dirac::gamma2.apply(psi.u1()[i], psi.u2()[i], v1, v2);
            r1 += a.a2[i] * v1;
            r2 += a.a2[i] * v2;
            r1 -= traj.mass * psi.u1()[i];
            r2 -= traj.mass * psi.u2()[i];
            res.u1()[i] = r1;
            res.u2()[i] = r2;
        }
        // The dynamics truncate the nonlinear products to the dealias band, so
        // the equation can only be satisfied there; measure the residual on it.
        worst = std::max(worst, l2_norm(dealias(res)));
    }
    return worst;
}

inline constexpr int default_sign_convention = -1;

/** Cubic nonlinearity N(psi1, psi2, psi3) = sign * (P0 + P1 a1 + P2 a2) psi3,
 * where P_mu are the polarized Coulomb potentials built from the bilinears
 * <psi1, psi2>, <a1 psi1, psi2>, <a2 psi1, psi2> (so P_mu[psi,psi] = A_mu).
 * Linear in psi1 and psi3, conjugate-linear in psi2. Output is dealiased.
 * The shipped sign (-1) is the one validated by the covariant Dirac residual.
 */
inline SpinorField nonlinearity(const SpinorField& psi1_in, const SpinorField& psi2_in,
                                const SpinorField& psi3_in, int sign = default_sign_convention) {
    SpinorField p1 = psi1_in.to(Rep::physical);
    SpinorField p2 = psi2_in.to(Rep::physical);
    SpinorField p3 = psi3_in.to(Rep::physical);
    require_same_grid(p1.grid(), p2.grid(), "nonlinearity");
    require_same_grid(p1.grid(), p3.grid(), "nonlinearity");
    const TorusGrid& g = p1.grid();
    const size_t sz = static_cast<size_t>(g.size());

    std::vector<cd> k0 = detail::bilinear_scalar(dirac::identity, p1, p2);
    std::vector<cd> k1 = detail::bilinear_scalar(dirac::alpha1, p1, p2);
    std::vector<cd> k2 = detail::bilinear_scalar(dirac::alpha2, p1, p2);
    std::vector<cd> k0h, k1h, k2h;
    fft_forward(g.n(), k0, k0h);
    fft_forward(g.n(), k1, k1h);
    fft_forward(g.n(), k2, k2h);
    std::vector<cd> p0h, p1h, p2h;
    detail::potentials_from_bilinears(g, k0h, k1h, k2h, p0h, p1h, p2h);
    std::vector<cd> s0, s1, s2;
    fft_inverse(g.n(), p0h, s0);
    fft_inverse(g.n(), p1h, s1);
    fft_inverse(g.n(), p2h, s2);

    SpinorField out(g, Rep::physical);
    const double sg = static_cast<double>(sign);
    for (size_t i = 0; i < sz; ++i) {
        cd v1, v2, w1, w2;
        dirac::alpha1.apply(p3.u1()[i], p3.u2()[i], v1, v2);
        dirac::alpha2.apply(p3.u1()[i], p3.u2()[i], w1, w2);
        out.u1()[i] = sg * (s0[i] * p3.u1()[i] + s1[i] * v1 + s2[i] * w1);
        out.u2()[i] = sg * (s0[i] * p3.u2()[i] + s1[i] * v2 + s2[i] * w2);
    }
    return dealias(out).to(psi3_in.rep());
}

struct QuadrilinearResult {
    cd path_a;  // physical-space integral of <N(psi1,psi2,psi3), psi4>
    cd path_b;  // space-time Fourier quadrilinear sum with the symbol q
};

/** Quadrilinear form J = int <N(psi1,psi2,psi3), psi4> dx dt, evaluated two
 * independent ways. Path B sums over the convolution constraint
 * xi1 - xi2 = xi4 - xi3 = xi0, tau1 - tau2 = tau4 - tau3 with the symbol
 *   q = i sign |xi0|^{-2} [ xi0_2 (<a1 u1,u2><u3,u4> - <u1,u2><a1 u3,u4>)
 *                         - xi0_1 (<a2 u1,u2><u3,u4> - <u1,u2><a2 u3,u4>) ],
 * the Fourier transcription of the implemented N. Spatial convolution is the
 * true (non-wrapping) one and tau convolution is periodic, so the two paths
 * agree to roundoff for dealias-band-limited trajectories. */
inline QuadrilinearResult quadrilinear_form(const Trajectory& t1, const Trajectory& t2,
                                            const Trajectory& t3, const Trajectory& t4,
                                            int sign = default_sign_convention) {
    if (!t1.same_lattice(t2) || !t1.same_lattice(t3) || !t1.same_lattice(t4))
        throw ShapeError("quadrilinear_form: space-time lattice mismatch");
    const TorusGrid& g = t1.grid();
    const long M = t1.n_frames();

    QuadrilinearResult res{cd{0.0}, cd{0.0}};

    // Path A: frame-wise physical-space pairing.
    for (long m = 0; m < M; ++m) {
        SpinorField nf = nonlinearity(t1.frames[static_cast<size_t>(m)], t2.frames[static_cast<size_t>(m)],
                                      t3.frames[static_cast<size_t>(m)], sign)
                             .to(Rep::physical);
        SpinorField p4 = t4.frames[static_cast<size_t>(m)].to(Rep::physical);
        cd acc{0.0};
        for (size_t i = 0; i < nf.u1().size(); ++i)
            acc += nf.u1()[i] * std::conj(p4.u1()[i]) + nf.u2()[i] * std::conj(p4.u2()[i]);
        res.path_a += acc * g.dx() * g.dx() * t1.dt;
    }

    // Path B: space-time spectra and constrained correlation tables.
    SpaceTimeSpectrum s1 = spacetime_transform(t1);
    SpaceTimeSpectrum s2 = spacetime_transform(t2);
    SpaceTimeSpectrum s3 = spacetime_transform(t3);
    SpaceTimeSpectrum s4 = spacetime_transform(t4);

    const int half = g.n() / 2;       // |xi0 component| < n/2 carries nonzero symbol
    const int width = 2 * half - 1;   // xi0 components in [-(n/2-1), n/2-1]
    const size_t cells = static_cast<size_t>(width) * width * static_cast<size_t>(M);
    auto cell = [&](int q1, int q2, long tq) {
        return (static_cast<size_t>(q1 + half - 1) * width + static_cast<size_t>(q2 + half - 1)) *
                   static_cast<size_t>(M) +
               static_cast<size_t>(tq);
    };

    // U_m(xi0,tau0) = sum <M u1(xi1,tau1), u2(xi2,tau2)> over xi1-xi2=xi0,
    // tau1-tau2=tau0 (mod M); V likewise over xi4-xi3=xi0, tau4-tau3=tau0.
    std::array<std::vector<cd>, 3> U, V;
    for (auto& u : U) u.assign(cells, cd{0.0});
    for (auto& v : V) v.assign(cells, cd{0.0});
    const std::array<Mat2, 3> mats{dirac::identity, dirac::alpha1, dirac::alpha2};

    for (long ta = 0; ta < M; ++ta)
        for (long tb = 0; tb < M; ++tb) {
            const long tq = ((ta - tb) % M + M) % M;
            for (int a1 = 0; a1 < g.n(); ++a1)
                for (int a2 = 0; a2 < g.n(); ++a2) {
                    const long ja = g.index(a1, a2);
                    const cd u1a = s1.c1[ta][ja], u2a = s1.c2[ta][ja];
                    if (u1a == cd{0.0} && u2a == cd{0.0}) continue;
                    for (int b1 = 0; b1 < g.n(); ++b1)
                        for (int b2 = 0; b2 < g.n(); ++b2) {
                            // xi1 = mode(a), xi2 = mode(b); psi1 at ta, psi2 at tb.
                            const int q1 = g.mode(a1) - g.mode(b1);
                            const int q2 = g.mode(a2) - g.mode(b2);
                            if (std::abs(q1) >= half || std::abs(q2) >= half || (q1 == 0 && q2 == 0))
                                continue;
                            const long jb = g.index(b1, b2);
                            const cd v1 = s2.c1[tb][jb], v2 = s2.c2[tb][jb];
                            if (v1 == cd{0.0} && v2 == cd{0.0}) continue;
                            const size_t jc = cell(q1, q2, tq);
                            for (int mi = 0; mi < 3; ++mi) {
                                cd m1, m2;
                                mats[static_cast<size_t>(mi)].apply(u1a, u2a, m1, m2);
                                U[static_cast<size_t>(mi)][jc] += m1 * std::conj(v1) + m2 * std::conj(v2);
                            }
                        }
                }
        }

    for (long t3i = 0; t3i < M; ++t3i)
        for (long t4i = 0; t4i < M; ++t4i) {
            const long tq = ((t4i - t3i) % M + M) % M;
            for (int a1 = 0; a1 < g.n(); ++a1)
                for (int a2 = 0; a2 < g.n(); ++a2) {
                    const long ja = g.index(a1, a2);
                    const cd u31 = s3.c1[t3i][ja], u32 = s3.c2[t3i][ja];
                    if (u31 == cd{0.0} && u32 == cd{0.0}) continue;
                    for (int b1 = 0; b1 < g.n(); ++b1)
                        for (int b2 = 0; b2 < g.n(); ++b2) {
                            const int q1 = g.mode(b1) - g.mode(a1);
                            const int q2 = g.mode(b2) - g.mode(a2);
                            if (std::abs(q1) >= half || std::abs(q2) >= half || (q1 == 0 && q2 == 0))
                                continue;
                            const long jb = g.index(b1, b2);
                            const cd v1 = s4.c1[t4i][jb], v2 = s4.c2[t4i][jb];
                            if (v1 == cd{0.0} && v2 == cd{0.0}) continue;
                            const size_t jc = cell(q1, q2, tq);
                            for (int mi = 0; mi < 3; ++mi) {
                                cd m1, m2;
                                mats[static_cast<size_t>(mi)].apply(u31, u32, m1, m2);
                                V[static_cast<size_t>(mi)][jc] += m1 * std::conj(v1) + m2 * std::conj(v2);
                            }
                        }
                }
        }

    const cd I{0.0, 1.0};
    cd acc{0.0};
    for (int q1 = -(half - 1); q1 <= half - 1; ++q1)
        for (int q2 = -(half - 1); q2 <= half - 1; ++q2) {
            if (q1 == 0 && q2 == 0) continue;
            const double x1 = g.freq_of_mode(q1), x2 = g.freq_of_mode(q2);
            const double inv_q = 1.0 / (x1 * x1 + x2 * x2);
            for (long tq = 0; tq < M; ++tq) {
                const size_t jc = cell(q1, q2, tq);
                acc += inv_q * (x2 * (U[1][jc] * V[0][jc] - U[0][jc] * V[1][jc]) -
                                x1 * (U[2][jc] * V[0][jc] - U[0][jc] * V[2][jc]));
            }
        }
    const double P = static_cast<double>(M) * t1.dt;
    res.path_b = static_cast<double>(sign) * I * acc * g.extent() * g.extent() * P;
    return res;
}

// || N(psi,psi,psi) ||_{L2} / || psi ||^3_{H^{1/3}}; scale-invariant probe of
// the trilinear L2 bound. Rejects zero input.
inline double trilinear_l2_ratio(const SpinorField& psi, int sign = default_sign_convention) {
    const double denom = sobolev_norm(psi, 1.0 / 3.0);
    if (denom == 0.0) throw ConfigError("trilinear_l2_ratio: zero input");
    SpinorField nf = nonlinearity(psi, psi, psi, sign);
    return l2_norm(nf.to(Rep::physical)) / (denom * denom * denom);
}

struct RegularityReport {
    double a_h2s;       // max_mu || A_mu ||_{Hdot^{2s}}
    double a_heps;      // max_mu || A_mu ||_{Hdot^{eps}}
    double psi_hs_sq;   // || psi ||^2_{H^s}, for ratio tracking
};

inline RegularityReport potential_regularity_report(const SpinorField& psi, double s, double eps) {
    GaugePotentials a = potentials(psi);
    const TorusGrid& g = a.grid;
    RegularityReport r{0.0, 0.0, 0.0};
    for (const auto* comp : {&a.a0, &a.a1, &a.a2}) {
        ScalarField f = detail::real_to_field(g, *comp);
        r.a_h2s = std::max(r.a_h2s, sobolev_norm(f, 2.0 * s, /*homogeneous=*/true));
        r.a_heps = std::max(r.a_heps, sobolev_norm(f, eps, /*homogeneous=*/true));
    }
    const double hs = sobolev_norm(psi, s);
    r.psi_hs_sq = hs * hs;
    return r;
}

}  // namespace csd
