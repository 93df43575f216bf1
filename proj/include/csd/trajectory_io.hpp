#pragma once

#include <unistd.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "csd/trajectory.hpp"

namespace csd {

// Binary trajectory container:
//   magic "CSDTRAJ1"
//   one text header line of key=value pairs, '\n'-terminated
//     (required keys: n, L, dt, frames, m, sign_convention, endian)
//   payload: frames in order, each frame the two spinor components in
//   row-major order as little-endian 8-byte-real (re, im) pairs.
// Payload length is frames * 2 * n^2 * 16 bytes. Writes go to a temp file in
// the target directory followed by an atomic rename.

inline constexpr char trajectory_magic[9] = "CSDTRAJ1";

static_assert(std::endian::native == std::endian::little,
              "trajectory payload is little-endian; byte swapping not implemented");

namespace detail {

inline std::string header_line(const Trajectory& t,
                               const std::map<std::string, std::string>& extra) {
    std::ostringstream os;
    os.precision(17);
    os << "n=" << t.grid().n() << " L=" << t.grid().extent() << " dt=" << t.dt
       << " frames=" << t.frames.size() << " m=" << t.mass
       << " sign_convention=" << t.sign_convention << " seed=" << t.seed << " endian=LE";
    for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
    os << '\n';
    return os.str();
}

inline std::map<std::string, std::string> parse_header(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("trajectory header: bad token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    for (const char* req : {"n", "L", "dt", "frames", "m", "sign_convention", "endian"})
        if (!kv.count(req)) throw ConfigError(std::string("trajectory header: missing ") + req);
    if (kv["endian"] != "LE") throw ConfigError("trajectory header: unsupported endianness");
    return kv;
}

}  // namespace detail

inline void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                             const std::map<std::string, std::string>& extra_header = {}) {
    if (traj.frames.empty()) throw ConfigError("write_trajectory: empty trajectory");
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
        out.write(trajectory_magic, 8);
        const std::string hdr = detail::header_line(traj, extra_header);
        out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
        for (const auto& frame : traj.frames) {
            SpinorField f = frame.to(Rep::physical);
            for (const auto* comp : {&f.u1(), &f.u2()})
                out.write(reinterpret_cast<const char*>(comp->data()),
                          static_cast<std::streamsize>(comp->size() * sizeof(cd)));
        }
        out.flush();
        if (!out) {
            fs::remove(tmp);
            throw ConfigError("short write: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

inline Trajectory read_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open trajectory: " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, trajectory_magic, 8) != 0)
        throw ConfigError("not a trajectory file: " + path.string());
    std::string header;
    std::getline(in, header);
    auto kv = detail::parse_header(header);

    const int n = std::stoi(kv["n"]);
    const double L = std::stod(kv["L"]);
    const long frames = std::stol(kv["frames"]);
    TorusGrid g(n, L);

    Trajectory t;
    t.dt = std::stod(kv["dt"]);
    t.mass = std::stod(kv["m"]);
    t.sign_convention = std::stoi(kv["sign_convention"]);
    t.seed = kv.count("seed") ? std::stoull(kv["seed"]) : 0;
    for (long k = 0; k < frames; ++k) {
        std::vector<cd> u1(static_cast<size_t>(g.size())), u2(u1.size());
        in.read(reinterpret_cast<char*>(u1.data()),
                static_cast<std::streamsize>(u1.size() * sizeof(cd)));
        in.read(reinterpret_cast<char*>(u2.data()),
                static_cast<std::streamsize>(u2.size() * sizeof(cd)));
        if (!in) throw ConfigError("truncated trajectory payload: " + path.string());
        t.frames.emplace_back(g, Rep::physical, std::move(u1), std::move(u2));
    }
    return t;
}

}  // namespace csd
