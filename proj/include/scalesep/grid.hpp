#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalesep {

/// Periodic-box discretization: dim axes, n samples per axis, box side
/// `period`, kinematic viscosity `viscosity`.
struct GridSpec {
    int dim = 2;
    int n_per_axis = 64;
    double period = 2.0 * M_PI;
    double viscosity = 1.0;

    GridSpec() = default;
    GridSpec(int dim_, int n, double period_ = 2.0 * M_PI, double nu = 1.0)
        : dim(dim_), n_per_axis(n), period(period_), viscosity(nu) {
        validate();
    }

    void validate() const {
        if (dim != 2 && dim != 3)
            throw std::invalid_argument("GridSpec: dim must be 2 or 3, got " + std::to_string(dim));
        if (n_per_axis < 16 || (n_per_axis & (n_per_axis - 1)) != 0)
            throw std::invalid_argument("GridSpec: n_per_axis must be a power of two >= 16, got " +
                                        std::to_string(n_per_axis));
        if (!(period > 0.0))
            throw std::invalid_argument("GridSpec: period must be positive");
        if (!(viscosity > 0.0))
            throw std::invalid_argument("GridSpec: viscosity must be positive");
    }

    std::size_t point_count() const {
        std::size_t p = 1;
        for (int a = 0; a < dim; ++a) p *= static_cast<std::size_t>(n_per_axis);
        return p;
    }

    double spacing() const { return period / n_per_axis; }
    double cell_volume() const { return std::pow(spacing(), dim); }
    double volume() const { return std::pow(period, dim); }

    /// Fundamental wavenumber 2*pi/L; all resolved wavenumbers are integer
    /// multiples of this.
    double k_base() const { return 2.0 * M_PI / period; }

    /// Signed integer mode index for axis bin i, in [-n/2, n/2).
    int mode_index(int i) const { return i < n_per_axis / 2 ? i : i - n_per_axis; }

    /// Physical wavenumber for axis bin i.
    double wavenumber(int i) const { return k_base() * mode_index(i); }

    /// Largest resolved |k| along one axis.
    double k_max_axis() const { return k_base() * (n_per_axis / 2); }

    /// Largest resolved |k| over the full lattice (box corner).
    double k_max() const { return k_max_axis() * std::sqrt(static_cast<double>(dim)); }

    /// Sample coordinate along one axis for bin i, in [0, L).
    double coord(int i) const { return spacing() * i; }

    /// Coordinate wrapped into the fundamental domain [-L/2, L/2).
    double coord_centered(int i) const {
        double x = coord(i);
        return x >= period / 2 ? x - period : x;
    }

    bool compatible(const GridSpec& o) const {
        return dim == o.dim && n_per_axis == o.n_per_axis && period == o.period;
    }
};

/// Row-major multi-index decode/encode over the grid lattice.
struct GridIndexer {
    int dim;
    int n;

    explicit GridIndexer(const GridSpec& g) : dim(g.dim), n(g.n_per_axis) {}

    std::size_t linear(const std::array<int, 3>& ix) const {
        std::size_t r = 0;
        for (int a = 0; a < dim; ++a) r = r * n + static_cast<std::size_t>(ix[a]);
        return r;
    }

    std::array<int, 3> decode(std::size_t lin) const {
        std::array<int, 3> ix{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(lin % n);
            lin /= n;
        }
        return ix;
    }
};

}  // namespace scalesep
