#pragma once

#include <complex>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/grid.hpp"

namespace scalesep {

namespace detail {

inline void apply_multiplier(VectorField& f, const std::vector<double>& m) {
    for (int c = 0; c < f.ncomp; ++c)
        for (std::size_t i = 0; i < m.size(); ++i) f.spec[c][i] *= m[i];
}

/// |k|^2 at every spectral bin.
inline std::vector<double> k_squared(const GridSpec& g) {
    std::vector<double> k2(g.point_count(), 0.0);
    GridIndexer indexer(g);
    for (std::size_t i = 0; i < k2.size(); ++i) {
        auto ix = indexer.decode(i);
        double s = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double k = g.wavenumber(ix[a]);
            s += k * k;
        }
        k2[i] = s;
    }
    return k2;
}

}  // namespace detail

/// Leray projection in spectral form: u_hat <- u_hat - k (k . u_hat)/|k|^2.
/// The k = 0 mode (mean flow) passes through unchanged.
inline VectorField leray_project(const VectorField& f) {
    f.require(Representation::spectral, "leray_project");
    const GridSpec& g = f.grid;
    if (f.ncomp != g.dim) throw std::invalid_argument("leray_project: needs a dim-component field");
    VectorField out = f;
    GridIndexer indexer(g);
    const std::size_t total = g.point_count();
    for (std::size_t i = 0; i < total; ++i) {
        auto ix = indexer.decode(i);
        double k[3] = {0, 0, 0};
        double k2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            k[a] = g.wavenumber(ix[a]);
            k2 += k[a] * k[a];
        }
        if (k2 == 0.0) continue;
        std::complex<double> kdotu{0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) kdotu += k[a] * f.spec[a][i];
        for (int a = 0; a < g.dim; ++a) out.spec[a][i] -= k[a] * kdotu / k2;
    }
    out.divergence_free = true;
    return out;
}

/// Max over resolved modes of |k . u_hat(k)|, relative to max |u_hat|.
/// Certifies (or refutes) the divergence-free invariant.
inline double divergence_residual(const VectorField& f) {
    f.require(Representation::spectral, "divergence_residual");
    const GridSpec& g = f.grid;
    GridIndexer indexer(g);
    double worst = 0.0, amax = 0.0;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        std::complex<double> kdotu{0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) {
            kdotu += g.wavenumber(ix[a]) * f.spec[a][i];
            amax = std::max(amax, std::abs(f.spec[a][i]));
        }
        worst = std::max(worst, std::abs(kdotu));
    }
    return amax > 0.0 ? worst / amax : worst;
}

/// Spectral divergence: sum_a i k_a u_hat_a. Returns a 1-component field.
inline VectorField divergence(const VectorField& f) {
    f.require(Representation::spectral, "divergence");
    const GridSpec& g = f.grid;
    if (f.ncomp != g.dim) throw std::invalid_argument("divergence: needs a dim-component field");
    VectorField out = VectorField::zeros(g, Representation::spectral, 1);
    GridIndexer indexer(g);
    const std::complex<double> I{0.0, 1.0};
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        for (int a = 0; a < g.dim; ++a) out.spec[0][i] += I * g.wavenumber(ix[a]) * f.spec[a][i];
    }
    return out;
}

/// Spectral gradient tensor, component layout [c*dim + a] = d_a f_c.
inline VectorField gradient(const VectorField& f) {
    f.require(Representation::spectral, "gradient");
    const GridSpec& g = f.grid;
    VectorField out = VectorField::zeros(g, Representation::spectral, f.ncomp * g.dim);
    GridIndexer indexer(g);
    const std::complex<double> I{0.0, 1.0};
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        for (int a = 0; a < g.dim; ++a) {
            std::complex<double> ika = I * g.wavenumber(ix[a]);
            for (int c = 0; c < f.ncomp; ++c) out.spec[c * g.dim + a][i] = ika * f.spec[c][i];
        }
    }
    return out;
}

/// Spectral Laplacian: multiply by -|k|^2.
inline VectorField laplacian(const VectorField& f) {
    f.require(Representation::spectral, "laplacian");
    VectorField out = f;
    auto k2 = detail::k_squared(f.grid);
    for (int c = 0; c < f.ncomp; ++c)
        for (std::size_t i = 0; i < k2.size(); ++i) out.spec[c][i] *= -k2[i];
    return out;
}

struct DerivativeOps {
    VectorField divergence;  // 1 component
    VectorField gradient;    // ncomp*dim components
    VectorField laplacian;   // ncomp components
};

inline DerivativeOps derivative_ops(const VectorField& f) {
    return DerivativeOps{divergence(f), gradient(f), laplacian(f)};
}

/// 2/3-rule dealiasing mask: zero every mode with any |mode index| > n/3.
inline VectorField dealias_two_thirds(const VectorField& f) {
    f.require(Representation::spectral, "dealias_two_thirds");
    const GridSpec& g = f.grid;
    VectorField out = f;
    GridIndexer indexer(g);
    const int cutoff = g.n_per_axis / 3;
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        bool kill = false;
        for (int a = 0; a < g.dim; ++a)
            if (std::abs(g.mode_index(ix[a])) > cutoff) kill = true;
        if (kill)
            for (int c = 0; c < f.ncomp; ++c) out.spec[c][i] = {0.0, 0.0};
    }
    return out;
}

/// Remove the k = 0 mode (used before homogeneous Besov evaluation).
inline VectorField remove_mean(const VectorField& f) {
    VectorField fs = as_spectral(f);
    for (int c = 0; c < fs.ncomp; ++c) fs.spec[c][0] = {0.0, 0.0};
    return fs;
}

}  // namespace scalesep
