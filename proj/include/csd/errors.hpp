#pragma once

#include <stdexcept>
#include <string>

namespace csd {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two fields/operators defined on incompatible grids or lattices.
struct ShapeError : Error {
    using Error::Error;
};

// Invalid run/solver configuration.
struct ConfigError : Error {
    using Error::Error;
};

// A quantity that must be real (current, potential) picked up an imaginary
// part above tolerance, or two evaluation paths of the same operator diverged.
struct ConsistencyError : Error {
    using Error::Error;
};

// Non-finite value produced during time integration.
struct BlowUpError : Error {
    BlowUpError(std::string what, long step_index, double time)
        : Error(std::move(what)), step(step_index), t(time) {}
    long step;
    double t;
};

}  // namespace csd
