#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "csd/integrator.hpp"
#include "csd/model.hpp"
#include "support.hpp"

using namespace csd;
using csd::test::random_band_limited;
using csd::test::random_modes_up_to;
using csd::test::random_trajectory;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_diff(const std::vector<double>& v, double ref) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x - ref));
    return m;
}

Trajectory free_single_component_trajectory(const TorusGrid& g, long frames, double dt) {
    // psi0 = e^{i x1} (1, 0): single mode, single component, evolved by the
    // exact free half-wave flow.
    Trajectory t;
    t.dt = dt;
    t.mass = 0.0;
    HalfWavePair pair = split_initial_data(plane_wave(g, 1, 0, cd{1.0}, 0));
    for (long m = 0; m < frames; ++m) {
        HalfWavePair at = free_propagate(pair, static_cast<double>(m) * dt);
        SpinorField sum = at.plus;
        sum += at.minus;
        t.frames.push_back(sum.to(Rep::physical));
    }
    return t;
}

}  // namespace

TEST_CASE("currents of closed-form spinors", "[model]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("(1,0) gives pure charge density") {
        CurrentFields c = currents(constant_spinor(g, cd{1.0}, cd{0.0}));
        REQUIRE(max_abs_diff(c.j0, 1.0) < 1e-14);
        REQUIRE(max_abs_diff(c.j1, 0.0) < 1e-14);
        REQUIRE(max_abs_diff(c.j2, 0.0) < 1e-14);
    }

    SECTION("zero spinor gives zero currents") {
        CurrentFields c = currents(SpinorField(g, Rep::physical));
        REQUIRE(max_abs_diff(c.j0, 0.0) == 0.0);
        REQUIRE(max_abs_diff(c.j2, 0.0) == 0.0);
    }

    SECTION("(1,1)/sqrt(2) is an alpha2 eigenvector") {
        const double r = 1.0 / std::sqrt(2.0);
        CurrentFields c = currents(constant_spinor(g, cd{r}, cd{r}));
        REQUIRE(max_abs_diff(c.j0, 1.0) < 1e-14);
        REQUIRE(max_abs_diff(c.j1, 0.0) < 1e-14);
        REQUIRE(max_abs_diff(c.j2, 1.0) < 1e-14);
    }

    SECTION("cone bound |J^i| <= J^0 pointwise on random fields") {
        for (std::uint64_t seed : {3u, 14u, 15u}) {
            SpinorField psi = random_band_limited(g, seed).to(Rep::physical);
            CurrentFields c = currents(psi);
            for (size_t i = 0; i < c.j0.size(); ++i) {
                REQUIRE(std::abs(c.j1[i]) <= c.j0[i] + 1e-12);
                REQUIRE(std::abs(c.j2[i]) <= c.j0[i] + 1e-12);
            }
        }
    }
}

TEST_CASE("potentials", "[model]") {
    TorusGrid g(32, 2.0 * pi);

    SECTION("single-component plane wave gives vanishing potentials") {
        GaugePotentials a = potentials(plane_wave(g, 1, 0, cd{1.0}, 0).to(Rep::physical));
        REQUIRE(max_abs_diff(a.a0, 0.0) < 1e-14);
        REQUIRE(max_abs_diff(a.a1, 0.0) < 1e-14);
        REQUIRE(max_abs_diff(a.a2, 0.0) < 1e-14);
    }

    SECTION("constant spinor gives vanishing potentials") {
        GaugePotentials a = potentials(constant_spinor(g, cd{0.3, 0.4}, cd{1.0, -0.2}));
        REQUIRE(max_abs_diff(a.a0, 0.0) < 1e-14);
        REQUIRE(max_abs_diff(a.a2, 0.0) < 1e-14);
    }

    SECTION("Coulomb condition, zero mean, curl identity on random fields") {
        for (std::uint64_t seed : {21u, 22u, 23u}) {
            SpinorField psi = random_band_limited(g, seed).to(Rep::physical);
            GaugePotentials a = potentials(psi);
            CurrentFields c = currents(psi);

            REQUIRE(coulomb_defect(a) < 1e-12);
            REQUIRE(std::abs(detail::mean(a.a0)) < 1e-14);
            REQUIRE(std::abs(detail::mean(a.a1)) < 1e-14);
            REQUIRE(std::abs(detail::mean(a.a2)) < 1e-14);

            // F_12 + (J^0 - mean J^0) = 0 over the symmetric band
            std::vector<double> f12 = curvature_f12(a);
            std::vector<double> res(f12.size());
            for (size_t i = 0; i < res.size(); ++i) res[i] = f12[i] + c.j0[i];
            REQUIRE(detail::l2_symmetric_mean_free(g, res) <
                    1e-12 * std::max(1.0, l2_norm(psi)));
        }
    }
}

TEST_CASE("chern-simons residual", "[model]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("rejects short trajectories") {
        Trajectory t = free_single_component_trajectory(g, 4, 0.1);
        REQUIRE_THROWS_AS(chern_simons_residual(t), ShapeError);
    }

    SECTION("exact free plane-wave trajectory is residual-free") {
        Trajectory t = free_single_component_trajectory(g, 9, 0.05);
        CsResiduals r = chern_simons_residual(t);
        REQUIRE(r.mu0 <= 1e-10);
        REQUIRE(r.mu1 <= 1e-10);
        REQUIRE(r.mu2 <= 1e-10);
    }

    SECTION("mu = 0 component is algebraically exact on arbitrary frames") {
        Trajectory t = random_trajectory(g, 5, 0.1, 99);
        CsResiduals r = chern_simons_residual(t);
        REQUIRE(r.mu0 <= 1e-12);
    }
}

TEST_CASE("nonlinearity structure", "[model]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("constant psi1, psi2 give zero") {
        SpinorField c1 = constant_spinor(g, cd{0.7, 0.1}, cd{-0.4});
        SpinorField c2 = constant_spinor(g, cd{0.2}, cd{0.9, 0.3});
        SpinorField p3 = random_band_limited(g, 31).to(Rep::physical);
        REQUIRE(l2_norm(nonlinearity(c1, c2, p3)) < 1e-13);
    }

    SECTION("linearity in slot 1, conjugate linearity in slot 2, linearity in slot 3") {
        SpinorField p1 = random_band_limited(g, 41).to(Rep::physical);
        SpinorField p2 = random_band_limited(g, 42).to(Rep::physical);
        SpinorField p3 = random_band_limited(g, 43).to(Rep::physical);
        const cd c{0.6, -1.1};

        SpinorField lhs1 = nonlinearity(c * p1, p2, p3);
        SpinorField rhs1 = c * nonlinearity(p1, p2, p3);
        REQUIRE(l2_norm(lhs1 - rhs1) < 1e-12 * std::max(1.0, l2_norm(rhs1)));

        SpinorField lhs2 = nonlinearity(p1, c * p2, p3);
        SpinorField rhs2 = std::conj(c) * nonlinearity(p1, p2, p3);
        REQUIRE(l2_norm(lhs2 - rhs2) < 1e-12 * std::max(1.0, l2_norm(rhs2)));

        SpinorField lhs3 = nonlinearity(p1, p2, c * p3);
        SpinorField rhs3 = c * nonlinearity(p1, p2, p3);
        REQUIRE(l2_norm(lhs3 - rhs3) < 1e-12 * std::max(1.0, l2_norm(rhs3)));
    }

    SECTION("single-mode single-component wave is in the kernel") {
        SpinorField psi = plane_wave(g, 1, 0, cd{1.0}, 0).to(Rep::physical);
        REQUIRE(l2_norm(nonlinearity(psi, psi, psi)) < 1e-13);
    }

    SECTION("for psi1 = psi2 = psi the scalar blocks are the gauge potentials") {
        // N(psi,psi,psi) with sign +1 minus (A0 + A1 a1 + A2 a2) psi should vanish.
        SpinorField psi = random_band_limited(g, 44).to(Rep::physical);
        GaugePotentials a = potentials(psi);
        SpinorField nf = nonlinearity(psi, psi, psi, +1).to(Rep::physical);
        SpinorField expect(g, Rep::physical);
        for (size_t i = 0; i < expect.u1().size(); ++i) {
            cd v1, v2, w1, w2;
            dirac::alpha1.apply(psi.u1()[i], psi.u2()[i], v1, v2);
            dirac::alpha2.apply(psi.u1()[i], psi.u2()[i], w1, w2);
            expect.u1()[i] = a.a0[i] * psi.u1()[i] + a.a1[i] * v1 + a.a2[i] * w1;
            expect.u2()[i] = a.a0[i] * psi.u2()[i] + a.a1[i] * v2 + a.a2[i] * w2;
        }
        expect = dealias(expect);
        REQUIRE(l2_norm(nf - expect) < 1e-12 * std::max(1.0, l2_norm(expect)));
    }
}

TEST_CASE("quadrilinear form: two paths agree", "[model]") {
    TorusGrid g(8, 2.0 * pi);
    const long frames = 8;
    const double dt = 0.25;

    SECTION("zero trajectories") {
        Trajectory z;
        z.dt = dt;
        for (long m = 0; m < frames; ++m) z.frames.push_back(SpinorField(g, Rep::physical));
        QuadrilinearResult r = quadrilinear_form(z, z, z, z);
        REQUIRE(std::abs(r.path_a) == 0.0);
        REQUIRE(std::abs(r.path_b) == 0.0);
    }

    SECTION("spatially constant psi1, psi2 give zero (xi0 = 0 excluded)") {
        Trajectory c1, c2, t3, t4;
        c1.dt = c2.dt = t3.dt = t4.dt = dt;
        std::mt19937_64 rng(7);
        for (long m = 0; m < frames; ++m) {
            c1.frames.push_back(constant_spinor(g, cd{0.3, 0.2}, cd{0.1 * m}));
            c2.frames.push_back(constant_spinor(g, cd{-0.5}, cd{0.8, -0.1 * m}));
            t3.frames.push_back(random_band_limited(g, rng()).to(Rep::physical));
            t4.frames.push_back(random_band_limited(g, rng()).to(Rep::physical));
        }
        QuadrilinearResult r = quadrilinear_form(c1, c2, t3, t4);
        REQUIRE(std::abs(r.path_a) < 1e-13);
        REQUIRE(std::abs(r.path_b) < 1e-13);
    }

    SECTION("random band-limited trajectories: mutual Parseval oracle") {
        Trajectory t1 = random_trajectory(g, frames, dt, 101);
        Trajectory t2 = random_trajectory(g, frames, dt, 102);
        Trajectory t3 = random_trajectory(g, frames, dt, 103);
        Trajectory t4 = random_trajectory(g, frames, dt, 104);
        QuadrilinearResult r = quadrilinear_form(t1, t2, t3, t4);
        const double scale = std::max(std::abs(r.path_a), std::abs(r.path_b));
        REQUIRE(scale > 0.0);
        REQUIRE(std::abs(r.path_a - r.path_b) < 1e-9 * scale);
    }

    SECTION("lattice mismatch is rejected") {
        Trajectory t1 = random_trajectory(g, frames, dt, 105);
        Trajectory t2 = random_trajectory(g, frames, dt, 106);
        Trajectory bad = random_trajectory(g, frames, 2.0 * dt, 107);
        REQUIRE_THROWS_AS(quadrilinear_form(t1, t2, t1, bad), ShapeError);
    }
}

TEST_CASE("trilinear L2 ratio", "[model]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("constant spinor gives ratio zero") {
        REQUIRE(trilinear_l2_ratio(constant_spinor(g, cd{1.0}, cd{0.5})) == 0.0);
    }

    SECTION("zero input is rejected") {
        REQUIRE_THROWS_AS(trilinear_l2_ratio(SpinorField(g, Rep::physical)), ConfigError);
    }

    SECTION("scale invariance") {
        SpinorField psi = random_band_limited(g, 51).to(Rep::physical);
        const double r1 = trilinear_l2_ratio(psi);
        const double r2 = trilinear_l2_ratio(cd{3.7, -1.2} * psi);
        REQUIRE(std::abs(r1 - r2) < 1e-10 * r1);
    }
}

TEST_CASE("potential regularity report", "[model]") {
    TorusGrid g(16, 2.0 * pi);

    SECTION("constant and single-mode data give zero potentials") {
        RegularityReport r1 = potential_regularity_report(constant_spinor(g, cd{1.0}, cd{0.0}),
                                                          0.3, 0.01);
        REQUIRE(r1.a_h2s == 0.0);
        REQUIRE(r1.a_heps == 0.0);
        RegularityReport r2 = potential_regularity_report(
            plane_wave(g, 1, 0, cd{1.0}, 0).to(Rep::physical), 0.3, 0.01);
        REQUIRE(r2.a_h2s < 1e-13);
        REQUIRE(r2.a_heps < 1e-13);
    }

    SECTION("ratio to the squared H^s norm is grid-stable for random data") {
        TorusGrid g16(16, 2.0 * pi), g32(32, 2.0 * pi);
        double worst16 = 0.0, worst32 = 0.0;
        for (std::uint64_t seed : {61u, 62u, 63u, 64u}) {
            SpinorField a = random_modes_up_to(g16, 4, seed).to(Rep::physical);
            SpinorField b = random_modes_up_to(g32, 8, seed).to(Rep::physical);
            RegularityReport ra = potential_regularity_report(a, 0.3, 0.01);
            RegularityReport rb = potential_regularity_report(b, 0.3, 0.01);
            worst16 = std::max(worst16, ra.a_h2s / ra.psi_hs_sq);
            worst32 = std::max(worst32, rb.a_h2s / rb.psi_hs_sq);
        }
        REQUIRE(worst32 < 2.0 * std::max(worst16, 1e-12));
    }
}
