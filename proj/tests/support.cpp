#include "support.hpp"

#include <numbers>
#include <random>

#include "csd/multiplier.hpp"

namespace csd::test {

namespace {

cd gauss(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return cd{r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

}  // namespace

SpinorField random_modes_up_to(const TorusGrid& g, int max_mode, std::uint64_t seed,
                               double amplitude) {
    std::mt19937_64 rng(seed);
    SpinorField f(g, Rep::frequency);
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const int k1 = g.mode(i1), k2 = g.mode(i2);
            if (std::abs(k1) > max_mode || std::abs(k2) > max_mode) continue;
            const double w = amplitude / (1.0 + k1 * k1 + k2 * k2);
            const long j = g.index(i1, i2);
            f.u1()[j] = w * gauss(rng);
            f.u2()[j] = w * gauss(rng);
        }
    return f;
}

SpinorField random_band_limited(const TorusGrid& g, std::uint64_t seed, double amplitude) {
    return random_modes_up_to(g, g.dealias_cut(), seed, amplitude);
}

Trajectory random_trajectory(const TorusGrid& g, long m_frames, double dt, std::uint64_t seed,
                             double amplitude) {
    Trajectory t;
    t.dt = dt;
    for (long m = 0; m < m_frames; ++m)
        t.frames.push_back(random_band_limited(g, seed + static_cast<std::uint64_t>(m) * 977u,
                                               amplitude)
                               .to(Rep::physical));
    return t;
}

Trajectory random_trajectory_tau_band(const TorusGrid& g, long m_frames, double dt, int tau_band,
                                      std::uint64_t seed, double amplitude) {
    // Draw a random spectrum on tau modes within the band, then synthesize
    // frames: f_m = sum_tau chat(tau) e^{2 pi i m tau / M}.
    std::vector<SpinorField> coeffs;
    for (int tm = -tau_band; tm <= tau_band; ++tm)
        coeffs.push_back(random_band_limited(
            g, seed + static_cast<std::uint64_t>(tm + tau_band) * 7919u, amplitude));
    Trajectory t;
    t.dt = dt;
    for (long m = 0; m < m_frames; ++m) {
        SpinorField frame(g, Rep::frequency);
        for (int tm = -tau_band; tm <= tau_band; ++tm) {
            const double ph = 2.0 * std::numbers::pi * static_cast<double>(tm) *
                              static_cast<double>(m) / static_cast<double>(m_frames);
            const cd e{std::cos(ph), std::sin(ph)};
            const SpinorField& c = coeffs[static_cast<size_t>(tm + tau_band)];
            for (size_t j = 0; j < frame.u1().size(); ++j) {
                frame.u1()[j] += e * c.u1()[j];
                frame.u2()[j] += e * c.u2()[j];
            }
        }
        t.frames.push_back(frame.to(Rep::physical));
    }
    return t;
}

}  // namespace csd::test
