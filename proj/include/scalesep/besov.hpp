#pragma once

#include <cmath>
#include <stdexcept>

#include "scalesep/band_system.hpp"
#include "scalesep/norms.hpp"

namespace scalesep {

struct BesovReport {
    double s = 0.0;
    double p = 2.0;
    double value = 0.0;
    int achieving_j = 0;
    bool homogeneous = true;
};

/// sup over resolved bands of 2^{js} ||D_j f||_p. Homogeneous norms drop the
/// mean and use the dotted blocks; inhomogeneous norms add the chi block at
/// j = -1 with weight lambda_{-1}^s = 2^{-s}. Only resolved bands enter the
/// sup; achieving_j makes truncation auditable.
inline BesovReport besov_norm(const BandSystem& bs, const VectorField& f, double s, double p,
                              bool homogeneous) {
    VectorField fs = as_spectral(f);
    BesovReport rep;
    rep.s = s;
    rep.p = p;
    rep.homogeneous = homogeneous;
    rep.achieving_j = bs.j_min;

    if (homogeneous) fs = remove_mean(fs);

    double best = 0.0;
    int best_j = bs.j_min;
    if (!homogeneous) {
        VectorField low = fs;
        detail::apply_multiplier(low, bs.chi_block);
        double v = std::pow(0.5, s) * lp_norm(low, p).value;
        if (v > best) { best = v; best_j = -1; }
    }
    for (int j = std::max(homogeneous ? bs.j_min : 0, bs.j_min); j <= bs.j_max; ++j) {
        VectorField fj = fs;
        detail::apply_multiplier(fj, bs.phi(j));
        for (int c = 0; c < fj.ncomp; ++c) fj.spec[c][0] = {0.0, 0.0};
        double v = std::pow(2.0, j * s) * lp_norm(fj, p).value;
        if (v > best) { best = v; best_j = j; }
    }
    rep.value = best;
    rep.achieving_j = best_j;
    return rep;
}

/// The Besov^{-1}_{inf,inf} estimator used by the persistence trace:
/// sup_j 2^{-j} ||D_j w||_inf.
inline BesovReport besov_minus_one(const BandSystem& bs, const VectorField& w) {
    return besov_norm(bs, w, -1.0, p_inf, true);
}

}  // namespace scalesep
