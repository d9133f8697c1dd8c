#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scalesep/field.hpp"
#include "scalesep/operators.hpp"

namespace scalesep {

enum class Quadrature { rectangle, grid_max };

struct NormReport {
    double p = 2.0;            // extended real in [1, inf]; infinity() for sup norm
    double value = 0.0;
    Quadrature quadrature = Quadrature::rectangle;
};

inline constexpr double p_inf = std::numeric_limits<double>::infinity();

/// L^p norm of the pointwise Euclidean magnitude. Rectangle rule over grid
/// cells for finite p, grid max for p = inf.
inline NormReport lp_norm(const VectorField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    VectorField fp = as_physical(f);
    auto mag = pointwise_magnitude(fp);
    NormReport r;
    r.p = p;
    if (std::isinf(p)) {
        r.quadrature = Quadrature::grid_max;
        r.value = mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
        return r;
    }
    r.quadrature = Quadrature::rectangle;
    const double dv = f.grid.cell_volume();
    double acc = 0.0;
    if (p == 2.0) {
        for (double m : mag) acc += m * m;
    } else if (p == 1.0) {
        for (double m : mag) acc += m;
    } else {
        for (double m : mag) acc += std::pow(m, p);
    }
    r.value = std::pow(acc * dv, 1.0 / p);
    return r;
}

/// Spectral-side L^2 norm via Parseval: vol * sum |u_hat|^2. Independent of
/// the physical-space rectangle rule only through the transform.
inline double l2_norm_spectral(const VectorField& f) {
    VectorField fs = as_spectral(f);
    double acc = 0.0;
    for (int c = 0; c < fs.ncomp; ++c)
        for (const auto& z : fs.spec[c]) acc += std::norm(z);
    return std::sqrt(acc * f.grid.volume());
}

/// L^2 inner product of two fields (physical rectangle rule).
inline double l2_inner(const VectorField& a, const VectorField& b) {
    VectorField ap = as_physical(a), bp = as_physical(b);
    if (!a.grid.compatible(b.grid) || ap.ncomp != bp.ncomp)
        throw std::invalid_argument("l2_inner: incompatible fields");
    double acc = 0.0;
    for (int c = 0; c < ap.ncomp; ++c)
        for (std::size_t i = 0; i < ap.phys[c].size(); ++i) acc += ap.phys[c][i] * bp.phys[c][i];
    return acc * a.grid.cell_volume();
}

/// Grid max of the gradient's Frobenius magnitude.
inline double grad_sup_norm(const VectorField& f) {
    VectorField fs = as_spectral(f);
    return lp_norm(gradient(fs), p_inf).value;
}

/// min{ ||u||_inf, sqrt(||grad u||_inf) }: the velocity/gradient floor of the
/// predictability criterion.
inline double min_inf_grad(const VectorField& u) {
    double uinf = lp_norm(u, p_inf).value;
    double ginf = grad_sup_norm(u);
    return std::min(uinf, std::sqrt(ginf));
}

}  // namespace scalesep
