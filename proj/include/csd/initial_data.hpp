#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csd/multiplier.hpp"

namespace csd {

namespace detail {

inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline double parse_num(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("initial data: bad number '") + s + "' in " + what);
    }
}

}  // namespace detail

// Pi_pm eigenstate at mode k: the normalized projection of (1,0) onto the
// +-|xi_k| eigenspace (never degenerate, the projections are rank one with a
// nonzero first row). eigenmode((1,0), +) is e^{i x1} (1, -i)/sqrt(2).
inline SpinorField eigenmode(const TorusGrid& g, int k1, int k2, int sign) {
    const Mat2 p = dirac::half_wave(g.freq_of_mode(k1), g.freq_of_mode(k2), sign);
    cd v1, v2;
    p.apply(cd{1.0}, cd{0.0}, v1, v2);
    const double r = std::sqrt(std::norm(v1) + std::norm(v2));
    SpinorField f(g, Rep::frequency);
    const long j = g.index(g.mode_index(k1), g.mode_index(k2));
    f.u1()[j] = v1 / r;
    f.u2()[j] = v2 / r;
    return f;
}

/** H^s-typical random data: independent complex Gaussian mode coefficients
 * scaled by <xi>^{-s-1-delta}, delta = 0.01, on the dealias band. The H^s
 * norm stays bounded as n grows while H^{s'} diverges for s' > s + delta
 * (each dyadic shell carries ~|xi| modes, so shell mass scales like
 * <xi>^{2s'-2s-1-2 delta}). Deterministic per seed. */
inline SpinorField random_hs(const TorusGrid& g, double s, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto gauss = [&rng]() {
        // Box-Muller on the raw engine keeps draws identical across libstdc++
        // distribution implementations.
        const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return cd{r * std::cos(2.0 * std::numbers::pi * u2),
                  r * std::sin(2.0 * std::numbers::pi * u2)};
    };
    const double delta = 0.01;
    SpinorField f(g, Rep::frequency);
    for (int i1 = 0; i1 < g.n(); ++i1)
        for (int i2 = 0; i2 < g.n(); ++i2) {
            const int k1 = g.mode(i1), k2 = g.mode(i2);
            if (!g.in_dealias_band(k1, k2)) continue;
            const double x1 = g.freq_of_mode(k1), x2 = g.freq_of_mode(k2);
            const double w = amplitude * std::pow(1.0 + x1 * x1 + x2 * x2, -0.5 * (s + 1.0 + delta));
            const long j = g.index(i1, i2);
            f.u1()[j] = w * gauss() / std::sqrt(2.0);
            f.u2()[j] = w * gauss() / std::sqrt(2.0);
        }
    return f;
}

/** Data generator behind the CLI `--data` specs:
 *   constant(c1,c2) | planewave(k1,k2,comp) | eigenmode(k1,k2,+|-) |
 *   random-hs(s,amplitude)
 * Output is dealiased, physical representation. */
inline SpinorField make_initial_data(const std::string& spec, const TorusGrid& g,
                                     std::uint64_t seed) {
    const auto open = spec.find('(');
    const auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ConfigError("initial data: expected name(args): '" + spec + "'");
    const std::string name = spec.substr(0, open);
    const auto args = detail::split_args(spec.substr(open + 1, close - open - 1));

    SpinorField f(g, Rep::frequency);
    if (name == "constant") {
        if (args.size() != 2) throw ConfigError("constant(c1,c2) takes two numbers");
        f = constant_spinor(g, cd{detail::parse_num(args[0], "constant")},
                            cd{detail::parse_num(args[1], "constant")});
    } else if (name == "planewave") {
        if (args.size() != 3) throw ConfigError("planewave(k1,k2,comp) takes three arguments");
        const int k1 = static_cast<int>(detail::parse_num(args[0], "planewave"));
        const int k2 = static_cast<int>(detail::parse_num(args[1], "planewave"));
        const int comp = static_cast<int>(detail::parse_num(args[2], "planewave"));
        if (comp != 1 && comp != 2) throw ConfigError("planewave: component must be 1 or 2");
        f = plane_wave(g, k1, k2, cd{1.0}, comp - 1);
    } else if (name == "eigenmode") {
        if (args.size() != 3 || (args[2] != "+" && args[2] != "-"))
            throw ConfigError("eigenmode(k1,k2,+|-) takes two numbers and a sign");
        const int k1 = static_cast<int>(detail::parse_num(args[0], "eigenmode"));
        const int k2 = static_cast<int>(detail::parse_num(args[1], "eigenmode"));
        f = eigenmode(g, k1, k2, args[2] == "+" ? +1 : -1);
    } else if (name == "random-hs") {
        if (args.size() != 2) throw ConfigError("random-hs(s,amplitude) takes two numbers");
        f = random_hs(g, detail::parse_num(args[0], "random-hs"),
                      detail::parse_num(args[1], "random-hs"), seed);
    } else {
        throw ConfigError("unknown initial data spec: '" + name + "'");
    }
    return dealias(f).to(Rep::physical);
}

}  // namespace csd
