#pragma once

#include <cstdint>

#include "csd/field.hpp"
#include "csd/trajectory.hpp"

namespace csd::test {

// Random complex field with independent Gaussian coefficients on the dealias
// band (smooth enough for spectral identities, deterministic per seed).
SpinorField random_band_limited(const TorusGrid& g, std::uint64_t seed, double amplitude = 1.0);

// Same, but restricted to |k_i| <= max_mode.
SpinorField random_modes_up_to(const TorusGrid& g, int max_mode, std::uint64_t seed,
                               double amplitude = 1.0);

// Trajectory of M independent random band-limited frames (no dynamics).
Trajectory random_trajectory(const TorusGrid& g, long m_frames, double dt, std::uint64_t seed,
                             double amplitude = 1.0);

// Trajectory with tau content restricted to |tau mode| <= tau_band (synthesized
// from a random space-time spectrum, so time-reversal tests avoid the
// asymmetric tau Nyquist mode).
Trajectory random_trajectory_tau_band(const TorusGrid& g, long m_frames, double dt, int tau_band,
                                      std::uint64_t seed, double amplitude = 1.0);

}  // namespace csd::test
