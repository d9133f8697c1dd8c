#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "scalesep/field.hpp"

namespace scalesep {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts unsupported");

/// Binary snapshot: 32-byte header (magic "SCSP", version u16, dim u16,
/// n u32, period f64, time f64, reserved u32), then row-major f64 component
/// arrays in physical representation.
inline void write_snapshot(const std::string& path, const VectorField& f, double time) {
    VectorField fp = as_physical(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    const GridSpec& g = f.grid;
    char header[32] = {};
    std::memcpy(header, "SCSP", 4);
    std::uint16_t version = 1, dim = static_cast<std::uint16_t>(g.dim);
    std::uint32_t n = static_cast<std::uint32_t>(g.n_per_axis), reserved = 0;
    double period = g.period;
    std::memcpy(header + 4, &version, 2);
    std::memcpy(header + 6, &dim, 2);
    std::memcpy(header + 8, &n, 4);
    std::memcpy(header + 12, &period, 8);
    std::memcpy(header + 20, &time, 8);
    std::memcpy(header + 28, &reserved, 4);
    out.write(header, 32);
    for (int c = 0; c < fp.ncomp; ++c)
        out.write(reinterpret_cast<const char*>(fp.phys[c].data()),
                  static_cast<std::streamsize>(fp.phys[c].size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_snapshot: short write to " + path);
}

struct Snapshot {
    VectorField field;
    double time = 0.0;
};

inline Snapshot read_snapshot(const std::string& path, double viscosity = 1.0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    char header[32];
    in.read(header, 32);
    if (!in || std::memcmp(header, "SCSP", 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    std::uint16_t version, dim;
    std::uint32_t n;
    double period, time;
    std::memcpy(&version, header + 4, 2);
    std::memcpy(&dim, header + 6, 2);
    std::memcpy(&n, header + 8, 4);
    std::memcpy(&period, header + 12, 8);
    std::memcpy(&time, header + 20, 8);
    if (version != 1) throw std::runtime_error("read_snapshot: unsupported version");
    GridSpec g(static_cast<int>(dim), static_cast<int>(n), period, viscosity);
    Snapshot s;
    s.time = time;
    s.field = VectorField::zeros(g, Representation::physical, g.dim);
    for (int c = 0; c < g.dim; ++c) {
        in.read(reinterpret_cast<char*>(s.field.phys[c].data()),
                static_cast<std::streamsize>(s.field.phys[c].size() * sizeof(double)));
        if (!in) throw std::runtime_error("read_snapshot: truncated data in " + path);
    }
    return s;
}

}  // namespace scalesep
