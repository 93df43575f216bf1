#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "csd/initial_data.hpp"
#include "csd/integrator.hpp"
#include "csd/model.hpp"
#include "support.hpp"

using namespace csd;
using csd::test::random_band_limited;

namespace {

constexpr double pi = std::numbers::pi;

double rel_diff(const SpinorField& a, const SpinorField& b) {
    return l2_norm(a - b) / std::max(1.0, l2_norm(a));
}

bool bitwise_equal(const SpinorField& a, const SpinorField& b) {
    return a.u1() == b.u1() && a.u2() == b.u2();
}

// exp(-i t (alpha . k + m beta)) chi0: closed-form two-level rotation, the
// exact flow of a single spatial mode under the free massive system.
void two_level(double t, double k1, double k2, double m, cd chi1, cd chi2, cd& o1, cd& o2) {
    const double w = std::sqrt(k1 * k1 + k2 * k2 + m * m);
    const Mat2 h = dirac::alpha_dot(k1, k2) + cd(m) * dirac::beta;
    const cd c{std::cos(w * t)};
    const cd s{0.0, w > 0.0 ? -std::sin(w * t) / w : -t};
    Mat2 u{c + s * h.a, s * h.b, s * h.c, c + s * h.d};
    u.apply(chi1, chi2, o1, o2);
}

double fit_order(const std::vector<double>& dts, const std::vector<double>& errs) {
    // least squares slope of log(err) against log(dt)
    const size_t n = dts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(dts[i]), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
}

}  // namespace

TEST_CASE("split initial data", "[integrator]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("zero field splits to zero pair") {
        HalfWavePair p = split_initial_data(SpinorField(g, Rep::physical));
        REQUIRE(l2_norm(p.plus) == 0.0);
        REQUIRE(l2_norm(p.minus) == 0.0);
    }

    SECTION("a + eigenmode lands entirely in the plus component") {
        SpinorField psi0 = eigenmode(g, 1, 0, +1);
        HalfWavePair p = split_initial_data(psi0);
        REQUIRE(rel_diff(psi0.to(Rep::frequency), p.plus) < 1e-13);
        REQUIRE(l2_norm(p.minus) < 1e-13);
    }

    SECTION("components sum back to the data and are projection-compatible") {
        SpinorField psi0 = random_band_limited(g, 5).to(Rep::physical);
        HalfWavePair p = split_initial_data(psi0);
        SpinorField sum = p.plus + p.minus;
        REQUIRE(rel_diff(psi0.to(Rep::frequency), sum) < 1e-12);
        REQUIRE(projection_defect(p) < 1e-12);
    }
}

TEST_CASE("free propagation", "[integrator]") {
    TorusGrid g(16, 2.0 * pi);
    HalfWavePair p = split_initial_data(random_band_limited(g, 9));

    SECTION("t = 0 is the identity") {
        HalfWavePair q = free_propagate(p, 0.0);
        REQUIRE(bitwise_equal(p.plus, q.plus));
        REQUIRE(bitwise_equal(p.minus, q.minus));
    }

    SECTION("single plus mode at t = pi flips sign") {
        HalfWavePair e = split_initial_data(eigenmode(g, 1, 0, +1));
        HalfWavePair q = free_propagate(e, pi);
        REQUIRE(l2_norm(q.plus + e.plus) < 1e-13);  // phase e^{-i pi} = -1
    }

    SECTION("unitary per component") {
        HalfWavePair q = free_propagate(p, 0.37);
        REQUIRE(std::abs(l2_norm(q.plus) - l2_norm(p.plus)) < 1e-13 * l2_norm(p.plus));
        REQUIRE(std::abs(l2_norm(q.minus) - l2_norm(p.minus)) < 1e-13 * l2_norm(p.minus));
    }

    SECTION("composition law") {
        HalfWavePair q1 = free_propagate(free_propagate(p, 0.21), 0.58);
        HalfWavePair q2 = free_propagate(p, 0.79);
        REQUIRE(rel_diff(q1.plus, q2.plus) < 1e-12);
        REQUIRE(rel_diff(q1.minus, q2.minus) < 1e-12);
    }
}

TEST_CASE("split-equation source term", "[integrator]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("massless constant data has zero source") {
        HalfWavePair p = split_initial_data(constant_spinor(g, cd{0.4, 0.1}, cd{-0.7}));
        HalfWavePair r = rhs(p, 0.0);
        REQUIRE(l2_norm(r.plus) < 1e-14);
        REQUIRE(l2_norm(r.minus) < 1e-14);
    }

    SECTION("source components satisfy projection compatibility") {
        HalfWavePair p = split_initial_data(random_band_limited(g, 13));
        HalfWavePair r = rhs(p, 1.0);
        REQUIRE(projection_defect(r) < 1e-12);
    }
}

TEST_CASE("integrate: exactness oracles", "[integrator]") {
    SECTION("free flow is the exact propagator, step by step") {
        TorusGrid g(16, 2.0 * pi);
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 1e-2;
        cfg.T = 0.5;
        cfg.mass = 0.0;
        cfg.enable_nonlinearity = false;
        SpinorField psi0 = dealias(random_band_limited(g, 17)).to(Rep::physical);
        Trajectory tr = integrate(cfg, psi0);

        // bit-for-bit: each recorded frame equals one exact free step of the
        // previous state
        HalfWavePair pair = split_initial_data(dealias(psi0));
        for (long m = 0; m < tr.n_frames(); ++m) {
            SpinorField sum = pair.plus + pair.minus;
            REQUIRE(bitwise_equal(tr.frames[static_cast<size_t>(m)], sum.to(Rep::physical)));
            pair = free_propagate(pair, cfg.dt);
        }

        // and matches the one-shot propagator to 1e-12 at all frames
        HalfWavePair p0 = split_initial_data(dealias(psi0));
        for (long m = 0; m < tr.n_frames(); ++m) {
            HalfWavePair at = free_propagate(p0, cfg.dt * static_cast<double>(m));
            SpinorField sum = at.plus + at.minus;
            REQUIRE(rel_diff(sum.to(Rep::physical), tr.frames[static_cast<size_t>(m)]) < 1e-12);
        }
    }

    SECTION("zero-mode mass oscillation (e^{-imt} c1, e^{imt} c2)") {
        TorusGrid g(8, 2.0 * pi);
        SolverConfig cfg;
        cfg.n = 8;
        cfg.dt = 1e-3;
        cfg.T = 1.0;
        cfg.mass = 1.0;
        const cd c1{0.6, 0.3}, c2{-0.2, 0.8};
        Trajectory tr = integrate(cfg, constant_spinor(g, c1, c2));
        double err = 0.0;
        for (long m = 0; m < tr.n_frames(); ++m) {
            const double t = tr.dt * static_cast<double>(m);
            SpinorField ex = constant_spinor(g, std::polar(1.0, -t) * c1, std::polar(1.0, t) * c2);
            err = std::max(err, max_abs(tr.frames[static_cast<size_t>(m)] - ex));
        }
        REQUIRE(err < 1e-10);
    }

    SECTION("single-mode massive plane wave matches the two-level rotation") {
        TorusGrid g(16, 2.0 * pi);
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 1e-3;
        cfg.T = 1.0;
        cfg.mass = 1.0;
        const cd chi1{0.8}, chi2{0.1, -0.3};
        SpinorField psi0 = plane_wave(g, 1, 0, chi1, 0) + plane_wave(g, 1, 0, chi2, 1);
        Trajectory tr = integrate(cfg, psi0.to(Rep::physical));
        double err = 0.0;
        for (long m = 0; m < tr.n_frames(); ++m) {
            cd o1, o2;
            two_level(tr.dt * static_cast<double>(m), 1.0, 0.0, cfg.mass, chi1, chi2, o1, o2);
            SpinorField ex = plane_wave(g, 1, 0, o1, 0) + plane_wave(g, 1, 0, o2, 1);
            err = std::max(err, max_abs(tr.frames[static_cast<size_t>(m)] - ex.to(Rep::physical)));
        }
        REQUIRE(err < 1e-10);
    }
}

TEST_CASE("integrate: manufactured solution", "[integrator]") {
    TorusGrid g(8, 2.0 * pi);

    SECTION("on-characteristic solution is reproduced to 1e-12") {
        SolverConfig cfg;
        cfg.n = 8;
        cfg.dt = 1e-3;
        cfg.T = 1.0;
        cfg.mass = 1.0;
        cfg.forcing = [&g](double t) { return mms::forcing(g, t, 1.0, 1.0); };
        Trajectory tr = integrate(cfg, mms::exact(g, 0.0, 1.0).to(Rep::physical));
        double err = 0.0;
        for (long m = 0; m < tr.n_frames(); ++m)
            err = std::max(err, l2_norm(tr.frames[static_cast<size_t>(m)] -
                                        mms::exact(g, tr.dt * m, 1.0).to(Rep::physical)));
        REQUIRE(err < 1e-12);
    }

    SECTION("off-characteristic solution converges at fourth order") {
        const double omega = 3.0;
        std::vector<double> dts{4e-3, 2e-3, 1e-3}, errs;
        for (double dt : dts) {
            SolverConfig cfg;
            cfg.n = 8;
            cfg.dt = dt;
            cfg.T = 1.0;
            cfg.mass = 1.0;
            cfg.forcing = [&g, omega](double t) { return mms::forcing(g, t, 1.0, omega); };
            Trajectory tr = integrate(cfg, mms::exact(g, 0.0, omega).to(Rep::physical));
            double err = 0.0;
            for (long m = 0; m < tr.n_frames(); ++m)
                err = std::max(err, l2_norm(tr.frames[static_cast<size_t>(m)] -
                                            mms::exact(g, tr.dt * m, omega).to(Rep::physical)));
            errs.push_back(err);
        }
        const double p = fit_order(dts, errs);
        REQUIRE(p > 3.7);
        REQUIRE(p < 4.3);
    }
}

TEST_CASE("integrate: charge and determinism", "[integrator]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("free flow conserves charge to 1e-13") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 5e-3;
        cfg.T = 0.5;
        cfg.enable_nonlinearity = false;
        Trajectory tr = integrate(cfg, dealias(random_band_limited(g, 23)).to(Rep::physical));
        REQUIRE(charge_drift(tr) < 1e-13);
    }

    SECTION("zero data stays zero") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 5e-3;
        cfg.T = 0.1;
        Trajectory tr = integrate(cfg, SpinorField(g, Rep::physical));
        for (double q : charge(tr)) REQUIRE(q == 0.0);
    }

    SECTION("identical configs give bitwise identical trajectories") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 5e-3;
        cfg.T = 0.2;
        cfg.mass = 1.0;
        SpinorField psi0 = random_band_limited(g, 29, 0.5).to(Rep::physical);
        Trajectory a = integrate(cfg, psi0);
        Trajectory b = integrate(cfg, psi0);
        REQUIRE(a.n_frames() == b.n_frames());
        for (long m = 0; m < a.n_frames(); ++m)
            REQUIRE(bitwise_equal(a.frames[static_cast<size_t>(m)], b.frames[static_cast<size_t>(m)]));
    }

    SECTION("stride records every k-th frame") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 5e-3;
        cfg.T = 0.2;
        cfg.mass = 1.0;
        SpinorField psi0 = random_band_limited(g, 31, 0.5).to(Rep::physical);
        Trajectory full = integrate(cfg, psi0);
        cfg.stride = 4;
        Trajectory sub = integrate(cfg, psi0);
        REQUIRE(sub.n_frames() == (full.n_frames() - 1) / 4 + 1);
        REQUIRE(sub.dt == 4 * cfg.dt);
        for (long m = 0; m < sub.n_frames(); ++m)
            REQUIRE(bitwise_equal(sub.frames[static_cast<size_t>(m)],
                                  full.frames[static_cast<size_t>(4 * m)]));
    }
}

TEST_CASE("integrate: time reversibility of the free flow", "[integrator]") {
    TorusGrid g(16, 2.0 * pi);
    HalfWavePair start = split_initial_data(dealias(random_band_limited(g, 37)));
    detail::Stepper fwd(g, 1e-2, 0.0, -1, /*nonlin=*/false, true, nullptr);
    detail::Stepper bwd(g, -1e-2, 0.0, -1, /*nonlin=*/false, true, nullptr);
    HalfWavePair y = start;
    for (int k = 0; k < 100; ++k) fwd.step(y, 1e-2 * k);
    for (int k = 0; k < 100; ++k) bwd.step(y, 1.0 - 1e-2 * k);
    REQUIRE(rel_diff(start.plus, y.plus) < 1e-12);
    REQUIRE(rel_diff(start.minus, y.minus) < 1e-12);
}

TEST_CASE("integrate: guards and blow-up", "[integrator]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("step-size guard rejects oversized dt") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 0.5;
        cfg.T = 1.0;
        cfg.mass = 1.0;
        SpinorField psi0 = random_band_limited(g, 41, 5.0).to(Rep::physical);
        REQUIRE_THROWS_AS(integrate(cfg, psi0), ConfigError);
    }

    SECTION("invalid configs are rejected") {
        SolverConfig cfg;
        cfg.n = 15;
        REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
        cfg.n = 16;
        cfg.dt = 3e-3;
        cfg.T = 1.0;  // not an integer multiple
        REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
        cfg.dt = 1e-2;
        cfg.stride = 3;  // 100 steps not divisible by 3
        REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    }

    SECTION("non-finite values raise a blow-up error with the step index") {
        SolverConfig cfg;
        cfg.n = 16;
        cfg.dt = 1e-2;
        cfg.T = 0.1;
        // an absurd source overflows the cubic term within a step or two
        cfg.forcing = [&g](double) {
            SpinorField f(g, Rep::frequency);
            f.u1()[g.index(0, 0)] = cd{1e160};
            return f;
        };
        SpinorField psi0 = random_band_limited(g, 43, 0.1).to(Rep::physical);
        try {
            integrate(cfg, psi0);
            FAIL("expected blow-up");
        } catch (const BlowUpError& e) {
            REQUIRE(e.step >= 1);
            REQUIRE(e.t > 0.0);
        }
    }
}

TEST_CASE("integrated trajectories: residual refinement and the sign oracle", "[integrator]") {
    TorusGrid g(32, 2.0 * pi);
    SpinorField psi0 = cd{0.45} * eigenmode(g, 1, 0, +1) +
                       cd{0.45} * (plane_wave(g, 0, 1, cd{0.55, 0.2}, 1) +
                                   plane_wave(g, 1, 1, cd{0.1}, 0));

    auto run = [&](double dt, int sign) {
        SolverConfig cfg;
        cfg.n = 32;
        cfg.dt = dt;
        cfg.T = 0.4;
        cfg.mass = 1.0;
        cfg.sign_convention = sign;
        return integrate(cfg, psi0.to(Rep::physical));
    };

    SECTION("curl residuals drop at fourth order with the shipped sign") {
        CsResiduals coarse = chern_simons_residual(run(8e-3, default_sign_convention));
        CsResiduals fine = chern_simons_residual(run(4e-3, default_sign_convention));
        REQUIRE(coarse.mu1 / fine.mu1 > 12.0);
        REQUIRE(coarse.mu2 / fine.mu2 > 12.0);
    }

    SECTION("covariant Dirac residual distinguishes the sign of N") {
        const double d_coarse = dirac_residual(run(8e-3, default_sign_convention));
        const double d_fine = dirac_residual(run(4e-3, default_sign_convention));
        REQUIRE(d_coarse / d_fine > 12.0);  // shipped sign: converges

        const double w_coarse = dirac_residual(run(8e-3, -default_sign_convention));
        const double w_fine = dirac_residual(run(4e-3, -default_sign_convention));
        REQUIRE(w_fine > 1e-3);             // flipped sign: large and
        REQUIRE(w_fine > 0.5 * w_coarse);   // not decreasing
    }
}
