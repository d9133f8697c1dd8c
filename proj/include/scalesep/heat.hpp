#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/operators.hpp"

namespace scalesep {

enum class HeatPath { spectral_multiplier, gaussian_convolution };

/// A heat-flow instant and the path used to realize it. The two paths must
/// agree to 1e-8 relative L2 for fields supported in the central 1/8 of the
/// box (dual-path invariant).
struct HeatSchedule {
    double t = 0.0;
    HeatPath path = HeatPath::spectral_multiplier;
};

/// Exact semigroup action: multiply u_hat(k) by exp(-nu_eff |k|^2 t).
/// nu_eff = 1 for pure-heat lemma checks, the fluid viscosity for NS.
inline VectorField heat_evolve(const VectorField& f, double t, double nu_eff = 1.0) {
    f.require(Representation::spectral, "heat_evolve");
    if (t < 0.0) throw std::invalid_argument("heat_evolve: t must be >= 0");
    if (!(nu_eff > 0.0)) throw std::invalid_argument("heat_evolve: nu_eff must be > 0");
    if (t == 0.0) return f;
    VectorField out = f;
    auto k2 = detail::k_squared(f.grid);
    for (int c = 0; c < f.ncomp; ++c)
        for (std::size_t i = 0; i < k2.size(); ++i) out.spec[c][i] *= std::exp(-nu_eff * k2[i] * t);
    return out;
}

namespace detail {

/// 1-D periodized heat kernel sampled on an n-point grid of period L,
/// including enough periodic images that the remainder is below underflow.
inline std::vector<double> periodized_heat_kernel_1d(int n, double L, double t) {
    std::vector<double> k(n, 0.0);
    const double h = L / n;
    const double norm = 1.0 / std::sqrt(4.0 * M_PI * t);
    // images out to where the exponent kills the term entirely
    int mmax = static_cast<int>(std::ceil((std::sqrt(4.0 * t * 710.0) + L) / L));
    for (int i = 0; i < n; ++i) {
        double x = i * h;
        if (x >= L / 2) x -= L;
        double s = 0.0;
        for (int m = -mmax; m <= mmax; ++m) {
            double d = x + m * L;
            s += std::exp(-d * d / (4.0 * t));
        }
        k[i] = norm * s;
    }
    return k;
}

/// Direct circular convolution along one axis with quadrature weight h.
inline void convolve_axis(std::vector<double>& data, const std::vector<double>& kernel, int dim, int n,
                          int axis, double h) {
    std::vector<double> line(n), result(n);
    const std::size_t total = data.size();
    // stride of the axis in row-major layout
    std::size_t stride = 1;
    for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
    const std::size_t block = stride * static_cast<std::size_t>(n);
    for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            for (int i = 0; i < n; ++i) line[i] = data[base + off + stride * i];
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) {
                    int d = i - j;
                    if (d < 0) d += n;
                    acc += kernel[d] * line[j];
                }
                result[i] = acc * h;
            }
            for (int i = 0; i < n; ++i) data[base + off + stride * i] = result[i];
        }
    }
}

}  // namespace detail

/// Physical-space heat flow: periodized Gaussian convolution, evaluated as
/// separable per-axis kernel sums on a 2x trigonometrically upsampled grid
/// (rectangle sampling at the native resolution would alias the kernel near
/// Nyquist above the 1e-8 contract). No spectral multiplier is involved, so
/// this is the independent oracle for heat_evolve.
inline VectorField gaussian_convolve_oracle(const VectorField& f, double t) {
    f.require(Representation::physical, "gaussian_convolve_oracle");
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_convolve_oracle: t must be > 0");
    const GridSpec& g = f.grid;
    if (std::sqrt(t) > g.period / 16.0) {
        double tail = std::erfc(g.period / (4.0 * std::sqrt(t)));
        throw std::invalid_argument(
            "gaussian_convolve_oracle: sqrt(t) exceeds box/16; half-box kernel tail mass ~ " +
            std::to_string(tail));
    }
    const int factor = 2;
    VectorField fine = as_physical(upsample(f, factor));
    const int nf = fine.grid.n_per_axis;
    const double hf = fine.grid.spacing();
    auto kernel = detail::periodized_heat_kernel_1d(nf, g.period, t);
    for (int c = 0; c < fine.ncomp; ++c)
        for (int a = 0; a < g.dim; ++a)
            detail::convolve_axis(fine.phys[c], kernel, g.dim, nf, a, hf);
    VectorField out = subsample(fine, factor);
    out.divergence_free = f.divergence_free;
    return out;
}

}  // namespace scalesep
