#pragma once

#include <cmath>
#include <numbers>

#include "csd/errors.hpp"

namespace csd {

/** Uniform n x n grid on the periodic square [0,L)^2.
 *
 * Frequency lattice: xi = (2*pi/L) * k with integer modes
 * k_i in {-n/2+1, ..., n/2}. The single asymmetric mode k_i = n/2 is the
 * Nyquist row/column; derivative-type multipliers zero it so the active
 * lattice stays symmetric, and dealiasing removes it before any nonlinear
 * product.
 */
class TorusGrid {
  public:
    TorusGrid(int n_modes, double extent) : n_(n_modes), extent_(extent) {
        if (n_ <= 0 || n_ % 2 != 0) throw ConfigError("grid size must be a positive even integer");
        if (!(extent_ > 0.0)) throw ConfigError("grid extent must be positive");
    }

    int n() const { return n_; }
    long size() const { return static_cast<long>(n_) * n_; }
    double extent() const { return extent_; }
    double dx() const { return extent_ / n_; }

    // Row-major storage index of the grid/frequency point (i1, i2).
    long index(int i1, int i2) const { return static_cast<long>(i1) * n_ + i2; }

    // Integer mode in (-n/2, n/2] for a storage index along one axis.
    int mode(int i) const { return i <= n_ / 2 ? i : i - n_; }

    // Storage index along one axis for an integer mode in (-n/2, n/2].
    int mode_index(int k) const { return k >= 0 ? k : k + n_; }

    // Physical frequency component xi_i = (2*pi/L) * k.
    double freq(int i) const { return 2.0 * std::numbers::pi / extent_ * mode(i); }

    double freq_of_mode(int k) const { return 2.0 * std::numbers::pi / extent_ * k; }

    bool is_nyquist(int k) const { return k == n_ / 2; }

    // 1/2-rule cutoff for the cubic nonlinearity: keep |k_i| <= n/4.
    int dealias_cut() const { return n_ / 4; }

    bool in_dealias_band(int k1, int k2) const {
        const int c = dealias_cut();
        return std::abs(k1) <= c && std::abs(k2) <= c;
    }

    double x(int i) const { return dx() * i; }

    bool operator==(const TorusGrid& o) const { return n_ == o.n_ && extent_ == o.extent_; }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

  private:
    int n_;
    double extent_;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* where) {
    if (a != b) throw ShapeError(std::string(where) + ": grid mismatch");
}

}  // namespace csd
