#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scalesep/grid.hpp"

namespace scalesep {

enum class Representation { physical, spectral };

namespace detail {

/// Process-wide cache of c2c plans keyed by (dim, n, sign). Plans are created
/// with FFTW_UNALIGNED so they can be executed on any buffer via the
/// new-array interface; creation is serialized (FFTW planning is not
/// thread-safe), execution is.
class FftPlanCache {
  public:
    static FftPlanCache& instance() {
        static FftPlanCache cache;
        return cache;
    }

    fftw_plan get(int dim, int n, int sign) {
        std::scoped_lock lock(mutex_);
        auto key = std::make_tuple(dim, n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = 1;
        for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
        std::vector<std::complex<double>> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = dim == 2 ? fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                               : fftw_plan_dft_3d(n, n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("FFTW plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

  private:
    FftPlanCache() = default;
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void fft_inplace(int dim, int n, int sign, std::vector<std::complex<double>>& data) {
    fftw_plan p = FftPlanCache::instance().get(dim, n, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, buf, buf);
}

}  // namespace detail

/// A field on the periodic box in one of two representations. `ncomp` is the
/// number of components: dim for velocity-like fields, 1 for scalars, dim*dim
/// for gradient tensors. Physical data are real samples; spectral data are
/// Fourier-series coefficients (forward transform carries the 1/N^d factor,
/// so a pure mode e^{ikx} has unit coefficient).
struct VectorField {
    GridSpec grid;
    int ncomp = 0;
    Representation representation = Representation::physical;
    bool divergence_free = false;

    std::vector<std::vector<double>> phys;                 // [ncomp][N^d]
    std::vector<std::vector<std::complex<double>>> spec;   // [ncomp][N^d]

    VectorField() = default;

    static VectorField zeros(const GridSpec& g, Representation rep, int ncomp = -1) {
        VectorField f;
        f.grid = g;
        f.ncomp = ncomp < 0 ? g.dim : ncomp;
        f.representation = rep;
        if (rep == Representation::physical)
            f.phys.assign(f.ncomp, std::vector<double>(g.point_count(), 0.0));
        else
            f.spec.assign(f.ncomp, std::vector<std::complex<double>>(g.point_count(), {0.0, 0.0}));
        return f;
    }

    bool is_physical() const { return representation == Representation::physical; }
    bool is_spectral() const { return representation == Representation::spectral; }

    void require(Representation rep, const char* who) const {
        if (representation != rep)
            throw std::invalid_argument(std::string(who) + ": field is in the wrong representation");
    }
};

/// Forward transform. Rejects non-finite samples with the offending location.
inline VectorField to_spectral(const VectorField& f) {
    f.require(Representation::physical, "to_spectral");
    const GridSpec& g = f.grid;
    const std::size_t total = g.point_count();
    VectorField out = VectorField::zeros(g, Representation::spectral, f.ncomp);
    out.divergence_free = f.divergence_free;

    GridIndexer indexer(g);
    const double scale = 1.0 / static_cast<double>(total);
    for (int c = 0; c < f.ncomp; ++c) {
        auto& buf = out.spec[c];
        for (std::size_t i = 0; i < total; ++i) {
            double v = f.phys[c][i];
            if (!std::isfinite(v)) {
                auto ix = indexer.decode(i);
                throw std::invalid_argument("to_spectral: non-finite sample at component " +
                                            std::to_string(c) + ", index (" + std::to_string(ix[0]) + "," +
                                            std::to_string(ix[1]) + "," + std::to_string(ix[2]) + ")");
            }
            buf[i] = {v, 0.0};
        }
        detail::fft_inplace(g.dim, g.n_per_axis, FFTW_FORWARD, buf);
        for (auto& z : buf) z *= scale;
    }
    return out;
}

/// Inverse transform; takes the real part (fields of interest are transforms
/// of real data, so the imaginary residue is roundoff).
inline VectorField to_physical(const VectorField& f) {
    f.require(Representation::spectral, "to_physical");
    const GridSpec& g = f.grid;
    const std::size_t total = g.point_count();
    VectorField out = VectorField::zeros(g, Representation::physical, f.ncomp);
    out.divergence_free = f.divergence_free;

    std::vector<std::complex<double>> buf(total);
    for (int c = 0; c < f.ncomp; ++c) {
        buf = f.spec[c];
        detail::fft_inplace(g.dim, g.n_per_axis, FFTW_BACKWARD, buf);
        for (std::size_t i = 0; i < total; ++i) out.phys[c][i] = buf[i].real();
    }
    return out;
}

inline VectorField as_spectral(const VectorField& f) {
    return f.is_spectral() ? f : to_spectral(f);
}

inline VectorField as_physical(const VectorField& f) {
    return f.is_physical() ? f : to_physical(f);
}

/// Pointwise Euclidean magnitude over components (physical representation).
inline std::vector<double> pointwise_magnitude(const VectorField& f) {
    f.require(Representation::physical, "pointwise_magnitude");
    std::size_t total = f.grid.point_count();
    std::vector<double> mag(total, 0.0);
    for (int c = 0; c < f.ncomp; ++c)
        for (std::size_t i = 0; i < total; ++i) mag[i] += f.phys[c][i] * f.phys[c][i];
    for (auto& m : mag) m = std::sqrt(m);
    return mag;
}

inline VectorField axpy(double a, const VectorField& x, const VectorField& y) {
    if (!x.grid.compatible(y.grid) || x.ncomp != y.ncomp || x.representation != y.representation)
        throw std::invalid_argument("axpy: incompatible fields");
    VectorField out = y;
    if (x.is_physical()) {
        for (int c = 0; c < x.ncomp; ++c)
            for (std::size_t i = 0; i < x.phys[c].size(); ++i) out.phys[c][i] += a * x.phys[c][i];
    } else {
        for (int c = 0; c < x.ncomp; ++c)
            for (std::size_t i = 0; i < x.spec[c].size(); ++i) out.spec[c][i] += a * x.spec[c][i];
    }
    out.divergence_free = x.divergence_free && y.divergence_free;
    return out;
}

inline VectorField scaled(const VectorField& f, double a) {
    VectorField out = f;
    if (f.is_physical())
        for (auto& comp : out.phys)
            for (auto& v : comp) v *= a;
    else
        for (auto& comp : out.spec)
            for (auto& z : comp) z *= a;
    return out;
}

inline VectorField subtract(const VectorField& u, const VectorField& v) { return axpy(-1.0, v, u); }

/// Exact band-limited interpolation onto a grid refined by `factor` (a power
/// of two), via spectral zero padding. The coarse Nyquist coefficient is
/// split evenly between +n/2 and -n/2 on the fine grid so real data stay
/// real and coarse samples are reproduced exactly.
inline VectorField upsample(const VectorField& f, int factor) {
    if (factor < 1 || (factor & (factor - 1)) != 0)
        throw std::invalid_argument("upsample: factor must be a power of two");
    if (factor == 1) return f;
    VectorField fs = as_spectral(f);
    const GridSpec& g = f.grid;
    GridSpec fine(g.dim, g.n_per_axis * factor, g.period, g.viscosity);
    VectorField out = VectorField::zeros(fine, Representation::spectral, f.ncomp);
    out.divergence_free = f.divergence_free;

    const int n = g.n_per_axis;
    const int nf = fine.n_per_axis;
    const std::size_t total = g.point_count();
    GridIndexer indexer(g);
    for (int c = 0; c < f.ncomp; ++c) {
        for (std::size_t i = 0; i < total; ++i) {
            std::complex<double> z = fs.spec[c][i];
            if (z == std::complex<double>(0.0, 0.0)) continue;
            auto ix = indexer.decode(i);
            // Enumerate destination bins: ordinary modes map 1:1, each coarse
            // Nyquist axis splits into two bins at half weight.
            std::vector<std::array<int, 3>> dests{{0, 0, 0}};
            double weight = 1.0;
            for (int a = 0; a < g.dim; ++a) {
                int m = g.mode_index(ix[a]);
                std::vector<std::array<int, 3>> next;
                if (m == -n / 2) {
                    weight *= 0.5;
                    for (auto d : dests) {
                        auto d1 = d; d1[a] = (nf - n / 2);  // -n/2 on fine grid
                        auto d2 = d; d2[a] = n / 2;         // +n/2 on fine grid
                        next.push_back(d1);
                        next.push_back(d2);
                    }
                } else {
                    for (auto d : dests) {
                        auto d1 = d; d1[a] = m >= 0 ? m : nf + m;
                        next.push_back(d1);
                    }
                }
                dests = std::move(next);
            }
            GridIndexer fidx(fine);
            for (const auto& d : dests) out.spec[c][fidx.linear(d)] += weight * z;
        }
    }
    return out;
}

/// Restriction to a grid coarsened by `factor`, by plain subsampling.
/// Exact for fields whose spectrum fits the coarse grid.
inline VectorField subsample(const VectorField& f, int factor) {
    if (factor < 1) throw std::invalid_argument("subsample: bad factor");
    if (factor == 1) return f;
    VectorField fp = as_physical(f);
    const GridSpec& g = f.grid;
    if (g.n_per_axis % factor != 0) throw std::invalid_argument("subsample: factor does not divide n");
    GridSpec coarse(g.dim, g.n_per_axis / factor, g.period, g.viscosity);
    VectorField out = VectorField::zeros(coarse, Representation::physical, f.ncomp);
    out.divergence_free = f.divergence_free;
    GridIndexer ci(coarse), fi(g);
    for (int c = 0; c < f.ncomp; ++c)
        for (std::size_t i = 0; i < coarse.point_count(); ++i) {
            auto ix = ci.decode(i);
            std::array<int, 3> fx{ix[0] * factor, ix[1] * factor, ix[2] * factor};
            out.phys[c][i] = fp.phys[c][fi.linear(fx)];
        }
    return out;
}

}  // namespace scalesep
