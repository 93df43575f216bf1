#pragma once

#include <cstdint>
#include <vector>

#include "csd/field.hpp"

namespace csd {

/** Uniformly time-sampled sequence of spinor fields on [0, T].
 *
 * frames[k] is psi(k * dt) with psi = psi_+ + psi_-; dt is the frame spacing
 * (solver step times any recording stride). Metadata records how the
 * trajectory was produced.
 */
struct Trajectory {
    std::vector<SpinorField> frames;
    double dt = 0.0;
    double mass = 0.0;
    int sign_convention = -1;
    std::uint64_t seed = 0;

    double duration() const { return frames.empty() ? 0.0 : dt * (static_cast<double>(frames.size()) - 1.0); }
    const TorusGrid& grid() const { return frames.front().grid(); }
    long n_frames() const { return static_cast<long>(frames.size()); }

    bool same_lattice(const Trajectory& o) const {
        return !frames.empty() && !o.frames.empty() && grid() == o.grid() &&
               frames.size() == o.frames.size() && dt == o.dt;
    }
};

}  // namespace csd
