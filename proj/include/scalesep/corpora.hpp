#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "scalesep/band_system.hpp"
#include "scalesep/synth.hpp"

namespace scalesep {

/// Randomized test-field families shared by the lemma harnesses, the
/// calibration sweeps and the acceptance suite. All deterministic in the
/// seed.
namespace corpora {

/// High-band field with a planted low-frequency component worth ~ gamma/4 of
/// its mass: satisfies the (gamma/2, J)-frequency-sparseness hypothesis with
/// margin. Returns nothing if the grid cannot host content above the cut.
inline std::optional<VectorField> freq_sparse_field(const GridSpec& g, std::uint64_t seed, double gamma,
                                                    double J, double p) {
    double kmin = 1.2 * std::pow(2.0, J);
    if (kmin >= 0.9 * g.k_max()) return std::nullopt;
    VectorField high = synth::random_band_limited(g, seed, kmin, g.k_max());
    VectorField low = synth::random_band_limited(g, seed + 0x9e3779b97f4a7c15ull, 1.0, 4.0);
    double hn = lp_norm(high, p).value, ln = lp_norm(low, p).value;
    if (hn <= 0.0 || ln <= 0.0) return std::nullopt;
    return axpy(gamma / 4.0 * hn / ln, low, high);
}

/// Oscillatory field supported on the mode sublattice (m0 Z)^d minus the
/// mean: its averages over cells of n/m0 points per edge (or any divisor)
/// vanish identically, the extremal witness family for the discrete decay
/// lemma.
inline VectorField sublattice_field(const GridSpec& g, std::uint64_t seed, int m0) {
    VectorField noise = synth::random_band_limited(g, seed, 0.0, g.k_max(), g.dim);
    GridIndexer ix(g);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto d = ix.decode(i);
        bool keep = true;
        for (int a = 0; a < g.dim; ++a)
            if (g.mode_index(d[a]) % m0 != 0) keep = false;
        if (!keep)
            for (int c = 0; c < noise.ncomp; ++c) noise.spec[c][i] = {0.0, 0.0};
    }
    for (int c = 0; c < noise.ncomp; ++c) noise.spec[c][0] = {0.0, 0.0};
    return noise;
}

/// Collection of Gaussian bumps with random centers and amplitudes: the
/// physically sparse family for the caloric decay lemma.
inline VectorField multi_bump_field(const GridSpec& g, std::uint64_t seed, int count, double sigma) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> place(0.0, g.period), amp(0.5, 2.0);
    VectorField f = VectorField::zeros(g, Representation::physical, 1);
    for (int b = 0; b < count; ++b) {
        std::array<double, 3> center{place(rng), place(rng), g.dim == 3 ? place(rng) : 0.0};
        f = axpy(1.0, synth::gaussian_bump(g, center, sigma, amp(rng)), f);
    }
    return f;
}

/// Snapshot families for the bilinear-estimate sweep: either steady pairs or
/// heat-decaying trajectories of random divergence-free data.
inline std::vector<VectorField> heat_snapshots(const GridSpec& g, std::uint64_t seed, double kmax,
                                               double tau, std::size_t nodes) {
    VectorField u0 = synth::random_divfree(g, seed, 0.0, kmax);
    std::vector<VectorField> out;
    for (std::size_t i = 0; i < nodes; ++i) {
        double s = tau * static_cast<double>(i) / static_cast<double>(nodes - 1);
        out.push_back(heat_evolve(u0, s, 1.0));
    }
    return out;
}

}  // namespace corpora
}  // namespace scalesep
