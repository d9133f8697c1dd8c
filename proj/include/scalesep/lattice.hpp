#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/norms.hpp"

namespace scalesep {

/// Cube lattice {Q_i} tiling the torus with edge h. h snaps DOWN to the
/// nearest power-of-two multiple of the grid spacing (n is a power of two,
/// so those are exactly the edges whose cells tile the discrete torus).
/// With origin_centered one cube is centered at the origin.
struct CubeLattice {
    GridSpec grid;
    double h_requested = 0.0;
    double h = 0.0;              // snapped value actually used
    int points_per_edge = 1;     // h / grid spacing
    int cells_per_axis = 1;
    bool origin_centered = true;
    std::vector<int> axis_cell;  // grid bin -> cell index along one axis (shared by all axes)

    std::size_t cell_count() const {
        std::size_t c = 1;
        for (int a = 0; a < grid.dim; ++a) c *= static_cast<std::size_t>(cells_per_axis);
        return c;
    }

    /// Center coordinate of cell c along one axis.
    double cell_center(int c) const {
        return origin_centered ? c * h : c * h + h / 2.0;
    }

    std::size_t cell_of_point(const std::array<int, 3>& ix) const {
        std::size_t r = 0;
        for (int a = 0; a < grid.dim; ++a)
            r = r * cells_per_axis + static_cast<std::size_t>(axis_cell[static_cast<std::size_t>(ix[a])]);
        return r;
    }
};

inline CubeLattice make_cube_lattice(const GridSpec& g, double h, bool origin_centered = true) {
    if (h < g.spacing())
        throw std::invalid_argument("make_cube_lattice: h below grid spacing");
    CubeLattice lat;
    lat.grid = g;
    lat.h_requested = h;
    lat.origin_centered = origin_centered;
    int q = 1;
    while (2 * q <= g.n_per_axis && 2 * q * g.spacing() <= h * (1.0 + 1e-12)) q *= 2;
    lat.points_per_edge = q;
    lat.h = q * g.spacing();
    lat.cells_per_axis = g.n_per_axis / q;
    lat.axis_cell.resize(static_cast<std::size_t>(g.n_per_axis));
    for (int i = 0; i < g.n_per_axis; ++i) {
        int c = origin_centered ? ((2 * i + q) / (2 * q)) % lat.cells_per_axis : i / q;
        lat.axis_cell[static_cast<std::size_t>(i)] = c;
    }
    return lat;
}

/// Cell averages of each component, laid out on the cell lattice
/// (row-major, cells_per_axis per axis).
inline std::vector<std::vector<double>> cell_averages(const CubeLattice& lat, const VectorField& f) {
    f.require(Representation::physical, "cell_averages");
    const GridSpec& g = f.grid;
    GridIndexer indexer(g);
    const std::size_t ncells = lat.cell_count();
    const double inv_pts = 1.0 / std::pow(static_cast<double>(lat.points_per_edge), g.dim);
    std::vector<std::vector<double>> avg(static_cast<std::size_t>(f.ncomp),
                                         std::vector<double>(ncells, 0.0));
    for (int c = 0; c < f.ncomp; ++c) {
        for (std::size_t i = 0; i < g.point_count(); ++i)
            avg[static_cast<std::size_t>(c)][lat.cell_of_point(indexer.decode(i))] += f.phys[c][i];
        for (auto& v : avg[static_cast<std::size_t>(c)]) v *= inv_pts;
    }
    return avg;
}

/// Broadcast cell-lattice values back to grid points.
inline VectorField broadcast_cells(const CubeLattice& lat, const std::vector<std::vector<double>>& cells,
                                   int ncomp) {
    const GridSpec& g = lat.grid;
    GridIndexer indexer(g);
    VectorField out = VectorField::zeros(g, Representation::physical, ncomp);
    for (int c = 0; c < ncomp; ++c)
        for (std::size_t i = 0; i < g.point_count(); ++i)
            out.phys[c][i] = cells[static_cast<std::size_t>(c)][lat.cell_of_point(indexer.decode(i))];
    return out;
}

/// J_h: piecewise-constant cell-average interpolant. Idempotent, linear,
/// preserves constants and means, and is an L^p contraction.
inline VectorField interpolant_jh(const VectorField& f, const CubeLattice& lat) {
    return broadcast_cells(lat, cell_averages(lat, f), f.ncomp);
}

inline VectorField interpolant_jh(const VectorField& f, double h, bool origin_centered = true) {
    return interpolant_jh(as_physical(f), make_cube_lattice(f.grid, h, origin_centered));
}

namespace detail {

/// Per-axis Gaussian cell-coupling kernel: K[dc] over cell displacements,
/// periodized over the torus images.
inline std::vector<double> cell_gauss_kernel(const CubeLattice& lat, double t) {
    const int m = lat.cells_per_axis;
    const double L = lat.grid.period;
    std::vector<double> k(static_cast<std::size_t>(m), 0.0);
    for (int dc = 0; dc < m; ++dc) {
        double d = dc * lat.h;
        if (d >= L / 2) d -= L;
        double s = 0.0;
        for (int img = -1; img <= 1; ++img) {
            double x = d + img * L;
            s += std::exp(-x * x / (4.0 * t));
        }
        k[static_cast<std::size_t>(dc)] = s;
    }
    return k;
}

inline void cell_convolve_axis(std::vector<double>& cells, const std::vector<double>& kernel, int dim,
                               int m, int axis) {
    std::vector<double> line(static_cast<std::size_t>(m)), result(static_cast<std::size_t>(m));
    std::size_t stride = 1;
    for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(m);
    const std::size_t block = stride * static_cast<std::size_t>(m);
    for (std::size_t base = 0; base < cells.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off) {
            for (int i = 0; i < m; ++i) line[static_cast<std::size_t>(i)] = cells[base + off + stride * i];
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int j = 0; j < m; ++j) {
                    int d = i - j;
                    if (d < 0) d += m;
                    acc += kernel[static_cast<std::size_t>(d)] * line[static_cast<std::size_t>(j)];
                }
                result[static_cast<std::size_t>(i)] = acc;
            }
            for (int i = 0; i < m; ++i) cells[base + off + stride * i] = result[static_cast<std::size_t>(i)];
        }
}

}  // namespace detail

/// I_{h,t}: Gaussian-weighted cell sums,
///   I f(x)|_{x in Q_j} = t^{-d/2} sum_i exp(-|x_j - x_i|^2 / 4t) * integral_{Q_i} f.
/// The Gaussian factorizes per axis, so the cell coupling is a separable
/// circular convolution on the cell lattice.
inline VectorField interpolant_iht(const VectorField& f, const CubeLattice& lat, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("interpolant_iht: t must be > 0");
    VectorField fp = as_physical(f);
    auto cells = cell_averages(lat, fp);
    const GridSpec& g = f.grid;
    const double cell_vol = std::pow(lat.h, g.dim);
    auto kernel = detail::cell_gauss_kernel(lat, t);
    const double scale = cell_vol / std::pow(t, g.dim / 2.0);
    for (auto& comp : cells) {
        for (auto& v : comp) v *= scale;  // cell integral * t^{-d/2}
        for (int a = 0; a < g.dim; ++a)
            detail::cell_convolve_axis(comp, kernel, g.dim, lat.cells_per_axis, a);
    }
    return broadcast_cells(lat, cells, f.ncomp);
}

inline VectorField interpolant_iht(const VectorField& f, double h, double t, bool origin_centered = true) {
    return interpolant_iht(f, make_cube_lattice(f.grid, h, origin_centered), t);
}

struct PoincareReport {
    bool vacuous = false;
    double ratio = 0.0;   // ||f - J_h f||_2 / (h ||grad f||_2)
    double h = 0.0;       // snapped edge actually used
};

/// Measured constant of ||f - J_h f||_2 <= C h ||grad f||_2.
inline PoincareReport poincare_check(const VectorField& f, double h) {
    PoincareReport rep;
    CubeLattice lat = make_cube_lattice(f.grid, h);
    rep.h = lat.h;
    VectorField fp = as_physical(f);
    double gnorm = lp_norm(gradient(as_spectral(f)), 2.0).value;
    if (gnorm <= 1e-14 * std::max(1.0, lp_norm(fp, 2.0).value)) {
        rep.vacuous = true;
        return rep;
    }
    VectorField diff = subtract(fp, interpolant_jh(fp, lat));
    rep.ratio = lp_norm(diff, 2.0).value / (lat.h * gnorm);
    return rep;
}

}  // namespace scalesep
