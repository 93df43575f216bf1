#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "csd/dirac.hpp"
#include "csd/errors.hpp"
#include "csd/fft.hpp"
#include "csd/grid.hpp"

namespace csd {

enum class Rep { physical, frequency };

/** Complex scalar field on a TorusGrid, tagged with its representation. */
class ScalarField {
  public:
    ScalarField(TorusGrid grid, Rep rep)
        : grid_(grid), rep_(rep), v_(static_cast<size_t>(grid.size()), cd{0.0}) {}
    ScalarField(TorusGrid grid, Rep rep, std::vector<cd> values)
        : grid_(grid), rep_(rep), v_(std::move(values)) {
        if (v_.size() != static_cast<size_t>(grid_.size())) throw ShapeError("scalar field: bad value count");
    }

    const TorusGrid& grid() const { return grid_; }
    Rep rep() const { return rep_; }
    std::vector<cd>& values() { return v_; }
    const std::vector<cd>& values() const { return v_; }
    cd& operator[](long i) { return v_[static_cast<size_t>(i)]; }
    const cd& operator[](long i) const { return v_[static_cast<size_t>(i)]; }

    ScalarField to(Rep target) const {
        if (target == rep_) return *this;
        std::vector<cd> out;
        if (target == Rep::frequency)
            fft_forward(grid_.n(), v_, out);
        else
            fft_inverse(grid_.n(), v_, out);
        return ScalarField(grid_, target, std::move(out));
    }

  private:
    TorusGrid grid_;
    Rep rep_;
    std::vector<cd> v_;
};

/** Two-component complex spinor field psi : T^2 -> C^2. Both components share
 * the grid and the representation tag. */
class SpinorField {
  public:
    SpinorField(TorusGrid grid, Rep rep)
        : grid_(grid), rep_(rep),
          u1_(static_cast<size_t>(grid.size()), cd{0.0}),
          u2_(static_cast<size_t>(grid.size()), cd{0.0}) {}
    SpinorField(TorusGrid grid, Rep rep, std::vector<cd> u1, std::vector<cd> u2)
        : grid_(grid), rep_(rep), u1_(std::move(u1)), u2_(std::move(u2)) {
        if (u1_.size() != static_cast<size_t>(grid_.size()) || u2_.size() != u1_.size())
            throw ShapeError("spinor field: bad component sizes");
    }

    const TorusGrid& grid() const { return grid_; }
    Rep rep() const { return rep_; }
    std::vector<cd>& u1() { return u1_; }
    std::vector<cd>& u2() { return u2_; }
    const std::vector<cd>& u1() const { return u1_; }
    const std::vector<cd>& u2() const { return u2_; }

    SpinorField to(Rep target) const {
        if (target == rep_) return *this;
        std::vector<cd> w1, w2;
        if (target == Rep::frequency) {
            fft_forward(grid_.n(), u1_, w1);
            fft_forward(grid_.n(), u2_, w2);
        } else {
            fft_inverse(grid_.n(), u1_, w1);
            fft_inverse(grid_.n(), u2_, w2);
        }
        return SpinorField(grid_, target, std::move(w1), std::move(w2));
    }

    SpinorField& operator+=(const SpinorField& o) {
        check_compatible(o, "spinor +=");
        for (size_t i = 0; i < u1_.size(); ++i) {
            u1_[i] += o.u1_[i];
            u2_[i] += o.u2_[i];
        }
        return *this;
    }
    SpinorField& operator-=(const SpinorField& o) {
        check_compatible(o, "spinor -=");
        for (size_t i = 0; i < u1_.size(); ++i) {
            u1_[i] -= o.u1_[i];
            u2_[i] -= o.u2_[i];
        }
        return *this;
    }
    SpinorField& operator*=(cd s) {
        for (size_t i = 0; i < u1_.size(); ++i) {
            u1_[i] *= s;
            u2_[i] *= s;
        }
        return *this;
    }
    friend SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
    friend SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
    friend SpinorField operator*(cd s, SpinorField a) { return a *= s; }

    void check_compatible(const SpinorField& o, const char* where) const {
        require_same_grid(grid_, o.grid_, where);
        if (rep_ != o.rep_) throw ShapeError(std::string(where) + ": representation mismatch");
    }

  private:
    TorusGrid grid_;
    Rep rep_;
    std::vector<cd> u1_, u2_;
};

// Discrete L2 norm with the torus measure: sqrt(dx^2 sum |f|^2) in physical
// representation, the Parseval-equal L sqrt(sum |fhat|^2) in frequency.
inline double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    const double scale = f.rep() == Rep::physical ? f.grid().dx() * f.grid().dx()
                                                  : f.grid().extent() * f.grid().extent();
    return std::sqrt(scale * s);
}

inline double l2_norm(const SpinorField& f) {
    double s = 0.0;
    for (const auto& v : f.u1()) s += std::norm(v);
    for (const auto& v : f.u2()) s += std::norm(v);
    const double scale = f.rep() == Rep::physical ? f.grid().dx() * f.grid().dx()
                                                  : f.grid().extent() * f.grid().extent();
    return std::sqrt(scale * s);
}

inline double max_abs(const SpinorField& f) {
    double m = 0.0;
    for (const auto& v : f.u1()) m = std::max(m, std::abs(v));
    for (const auto& v : f.u2()) m = std::max(m, std::abs(v));
    return m;
}

// Single plane-wave spinor mode: value * e^{i x . xi_k} on component comp.
inline SpinorField plane_wave(const TorusGrid& g, int k1, int k2, cd value, int comp) {
    SpinorField f(g, Rep::frequency);
    auto& u = comp == 0 ? f.u1() : f.u2();
    u[static_cast<size_t>(g.index(g.mode_index(k1), g.mode_index(k2)))] = value;
    return f;
}

// Spatially constant spinor field.
inline SpinorField constant_spinor(const TorusGrid& g, cd c1, cd c2) {
    SpinorField f(g, Rep::physical);
    std::fill(f.u1().begin(), f.u1().end(), c1);
    std::fill(f.u2().begin(), f.u2().end(), c2);
    return f;
}

}  // namespace csd
