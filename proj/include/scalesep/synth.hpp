#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/norms.hpp"
#include "scalesep/operators.hpp"

namespace scalesep {

/// Deterministic test-field synthesis. Everything here is seeded explicitly;
/// corpora used for calibration and acceptance reuse these generators with
/// recorded seeds.
namespace synth {

/// White noise in physical space, band-pass filtered to kmin <= |k| <= kmax.
/// Real by construction.
inline VectorField random_band_limited(const GridSpec& g, std::uint64_t seed, double kmin, double kmax,
                                       int ncomp = -1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorField f = VectorField::zeros(g, Representation::physical, ncomp);
    for (auto& comp : f.phys)
        for (auto& v : comp) v = gauss(rng);
    VectorField fs = to_spectral(f);
    GridIndexer indexer(g);
    auto k2 = detail::k_squared(g);
    for (std::size_t i = 0; i < k2.size(); ++i) {
        double kn = std::sqrt(k2[i]);
        if (kn < kmin || kn > kmax)
            for (int c = 0; c < fs.ncomp; ++c) fs.spec[c][i] = {0.0, 0.0};
    }
    return fs;
}

/// Divergence-free random band-limited field (Leray-projected noise).
inline VectorField random_divfree(const GridSpec& g, std::uint64_t seed, double kmin, double kmax) {
    return leray_project(random_band_limited(g, seed, kmin, kmax, g.dim));
}

/// Single Fourier mode: amplitude * cos(k.x + phase) in component `comp`.
inline VectorField pure_mode(const GridSpec& g, const std::array<int, 3>& kmode, int comp,
                             double amplitude = 1.0, double phase = 0.0, int ncomp = -1) {
    VectorField f = VectorField::zeros(g, Representation::physical, ncomp);
    GridIndexer indexer(g);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        double arg = phase;
        for (int a = 0; a < g.dim; ++a) arg += g.k_base() * kmode[a] * g.coord(ix[a]);
        f.phys[comp][i] = amplitude * std::cos(arg);
    }
    return f;
}

/// Periodized Gaussian bump of width sigma centered at `center`, in every
/// requested component (default: first only).
inline VectorField gaussian_bump(const GridSpec& g, const std::array<double, 3>& center, double sigma,
                                 double amplitude = 1.0, int ncomp = 1) {
    VectorField f = VectorField::zeros(g, Representation::physical, ncomp);
    GridIndexer indexer(g);
    const double L = g.period;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        double val = amplitude;
        for (int a = 0; a < g.dim; ++a) {
            double dx = g.coord(ix[a]) - center[a];
            dx -= L * std::round(dx / L);
            double s = 0.0;
            for (int m = -1; m <= 1; ++m) {
                double d = dx + m * L;
                s += std::exp(-d * d / (2.0 * sigma * sigma));
            }
            val *= s;
        }
        f.phys[0][i] = val;
    }
    return f;
}

/// Compactly supported C^inf bump: amplitude * exp(1 - 1/(1 - r^2/R^2)) for
/// r < R (fundamental-domain distance to `center`), 0 outside.
inline VectorField compact_bump(const GridSpec& g, const std::array<double, 3>& center, double radius,
                                double amplitude = 1.0, int ncomp = 1) {
    VectorField f = VectorField::zeros(g, Representation::physical, ncomp);
    GridIndexer indexer(g);
    const double L = g.period;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double dx = g.coord(ix[a]) - center[a];
            dx -= L * std::round(dx / L);
            r2 += dx * dx;
        }
        double q = r2 / (radius * radius);
        f.phys[0][i] = q < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
    }
    return f;
}

/// Smooth random field with compact support in a ball of the given radius:
/// band-limited noise windowed by a compact bump. Used for whole-space
/// surrogate checks (support <= 1/8 of the box keeps periodic images silent).
inline VectorField random_compact(const GridSpec& g, std::uint64_t seed, double radius, double kmax,
                                  int ncomp = -1) {
    VectorField noise = as_physical(random_band_limited(g, seed, 0.0, kmax, ncomp));
    std::array<double, 3> center{g.period / 2, g.period / 2, g.period / 2};
    VectorField window = compact_bump(g, center, radius, 1.0, 1);
    for (int c = 0; c < noise.ncomp; ++c)
        for (std::size_t i = 0; i < noise.phys[c].size(); ++i) noise.phys[c][i] *= window.phys[0][i];
    return noise;
}

/// 2D Taylor-Green vortex (sin x cos y, -cos x sin y); in 3D the classic
/// z-invariant embedding with zero third component.
inline VectorField taylor_green(const GridSpec& g, double amplitude = 1.0) {
    VectorField f = VectorField::zeros(g, Representation::physical, g.dim);
    GridIndexer indexer(g);
    const double kb = g.k_base();
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        double x = kb * g.coord(ix[0]), y = kb * g.coord(ix[1]);
        f.phys[0][i] = amplitude * std::sin(x) * std::cos(y);
        f.phys[1][i] = -amplitude * std::cos(x) * std::sin(y);
    }
    f.divergence_free = true;
    return f;
}

}  // namespace synth
}  // namespace scalesep
