#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/norms.hpp"
#include "scalesep/operators.hpp"

namespace scalesep {

/// Smooth radial low-pass profile: 1 on |xi| <= 1/2, 0 on |xi| >= 1, with the
/// standard exp(-1/x) transition in between. C^inf in the radius.
inline double chi_profile(double rho) {
    if (rho <= 0.5) return 1.0;
    if (rho >= 1.0) return 0.0;
    auto g = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    double s = 2.0 * rho - 1.0;  // in (0,1) across the transition
    double a = g(1.0 - s), b = g(s);
    return a / (a + b);
}

/// Dyadic filter bank on the grid's resolved wavenumbers. phi_j is supported
/// in the annulus 2^{j-1} <= |xi| <= 2^{j+1}; chi + sum_{j>=0} phi_j = 1.
struct BandSystem {
    GridSpec grid;
    int j_min = 0;   // lowest band with support on the lattice
    int j_max = 0;   // highest band; chi(xi/2^{j_max+1}) = 1 on the lattice
    std::vector<double> k_mag;                 // |xi| per spectral bin
    std::vector<std::vector<double>> filters;  // phi_j per bin, j = j_min..j_max
    std::vector<double> chi_block;             // chi(xi) per bin (the j = -1 block)
    double partition_residual = 0.0;

    const std::vector<double>& phi(int j) const {
        if (j < j_min || j > j_max) throw std::invalid_argument("BandSystem::phi: band out of range");
        return filters[static_cast<std::size_t>(j - j_min)];
    }

    int clamp(int j, bool* clamped = nullptr) const {
        int c = std::clamp(j, j_min, j_max);
        if (clamped) *clamped = (c != j);
        return c;
    }

    double clamp_real(double J, bool* clamped = nullptr) const {
        double c = std::clamp(J, static_cast<double>(j_min), static_cast<double>(j_max) + 1.0);
        if (clamped) *clamped = (c != J);
        return c;
    }
};

inline BandSystem build_band_system(const GridSpec& g) {
    BandSystem bs;
    bs.grid = g;
    bs.k_mag.resize(g.point_count());
    auto k2 = detail::k_squared(g);
    double kmax = 0.0, kmin_nz = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k2.size(); ++i) {
        bs.k_mag[i] = std::sqrt(k2[i]);
        kmax = std::max(kmax, bs.k_mag[i]);
        if (bs.k_mag[i] > 0.0) kmin_nz = std::min(kmin_nz, bs.k_mag[i]);
    }

    // Band j touches the lattice iff its annulus (2^{j-1}, 2^{j+1}) meets
    // [kmin_nz, kmax]; j_max additionally closes the telescoping sum.
    bs.j_min = static_cast<int>(std::floor(std::log2(kmin_nz))) - 1;
    bs.j_max = static_cast<int>(std::ceil(std::log2(kmax)));
    while (true) {
        const double s = std::pow(2.0, bs.j_min);
        bool any = false;
        for (double k : bs.k_mag)
            if (k > 0.0 && chi_profile(k / (2.0 * s)) - chi_profile(k / s) > 0.0) any = true;
        if (any || bs.j_min >= bs.j_max) break;
        ++bs.j_min;
    }

    if (bs.j_max - bs.j_min + 1 < 4)
        throw std::invalid_argument("build_band_system: grid too coarse to host >= 4 dyadic bands");

    bs.chi_block.resize(bs.k_mag.size());
    for (std::size_t i = 0; i < bs.k_mag.size(); ++i) bs.chi_block[i] = chi_profile(bs.k_mag[i]);

    bs.filters.assign(static_cast<std::size_t>(bs.j_max - bs.j_min + 1), {});
    for (int j = bs.j_min; j <= bs.j_max; ++j) {
        auto& arr = bs.filters[static_cast<std::size_t>(j - bs.j_min)];
        arr.resize(bs.k_mag.size());
        const double s = std::pow(2.0, j);
        for (std::size_t i = 0; i < bs.k_mag.size(); ++i)
            arr[i] = chi_profile(bs.k_mag[i] / (2.0 * s)) - chi_profile(bs.k_mag[i] / s);
    }

    // Partition-of-unity certificate: chi + sum_{j >= 0} phi_j == 1 at every
    // resolved wavenumber.
    double worst = 0.0;
    for (std::size_t i = 0; i < bs.k_mag.size(); ++i) {
        double s = bs.chi_block[i];
        for (int j = std::max(0, bs.j_min); j <= bs.j_max; ++j)
            s += bs.filters[static_cast<std::size_t>(j - bs.j_min)][i];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    bs.partition_residual = worst;
    if (worst > 1e-12)
        throw std::runtime_error("build_band_system: partition-of-unity residual " + std::to_string(worst));
    return bs;
}

/// Band selectors. BelowStrict(J) is the multiplier chi(xi/2^J), which equals
/// Delta_{<J} at integer J and extends it to real J; Delta_{<=J} at integer J
/// is BelowStrict(J+1). AtOrAbove is the exact spectral complement.
struct SelectEq { int j; };
struct SelectBelowStrict { double J; };
struct SelectAtOrAbove { double J; };
struct SelectBandRange { int j_lo; int j_hi; };  // inclusive sum of phi_j
using BandSelector = std::variant<SelectEq, SelectBelowStrict, SelectAtOrAbove, SelectBandRange>;

namespace detail {

inline std::vector<double> lowpass_multiplier(const BandSystem& bs, double J) {
    std::vector<double> m(bs.k_mag.size());
    const double s = std::pow(2.0, J);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = chi_profile(bs.k_mag[i] / s);
    return m;
}

}  // namespace detail

inline VectorField band_project(const BandSystem& bs, const VectorField& f, const BandSelector& sel,
                                bool* clamped = nullptr) {
    f.require(Representation::spectral, "band_project");
    if (!f.grid.compatible(bs.grid)) throw std::invalid_argument("band_project: grid mismatch");
    VectorField out = f;
    if (clamped) *clamped = false;
    if (std::holds_alternative<SelectEq>(sel)) {
        int j = bs.clamp(std::get<SelectEq>(sel).j, clamped);
        detail::apply_multiplier(out, bs.phi(j));
        // homogeneous blocks leave the mean alone
        for (int c = 0; c < out.ncomp; ++c) out.spec[c][0] = {0.0, 0.0};
    } else if (std::holds_alternative<SelectBelowStrict>(sel)) {
        double J = bs.clamp_real(std::get<SelectBelowStrict>(sel).J, clamped);
        detail::apply_multiplier(out, detail::lowpass_multiplier(bs, J));
    } else if (std::holds_alternative<SelectAtOrAbove>(sel)) {
        double J = bs.clamp_real(std::get<SelectAtOrAbove>(sel).J, clamped);
        auto m = detail::lowpass_multiplier(bs, J);
        for (auto& v : m) v = 1.0 - v;
        detail::apply_multiplier(out, m);
    } else {
        auto r = std::get<SelectBandRange>(sel);
        bool c1 = false, c2 = false;
        int lo = bs.clamp(r.j_lo, &c1), hi = bs.clamp(r.j_hi, &c2);
        if (clamped) *clamped = c1 || c2;
        // sum_{lo<=j<=hi} phi_j telescopes to chi(xi/2^{hi+1}) - chi(xi/2^{lo})
        auto m = detail::lowpass_multiplier(bs, hi + 1.0);
        auto mlo = detail::lowpass_multiplier(bs, lo);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] -= mlo[i];
        detail::apply_multiplier(out, m);
    }
    out.divergence_free = f.divergence_free;
    return out;
}

struct BernsteinReport {
    bool vacuous = false;
    double gradient_ratio = 0.0;  // ||grad D_j f||_p / (2^j ||D_j f||_p)
    double norm_ratio = 0.0;      // ||D_j f||_p / (2^{j d (1/q - 1/p)} ||D_j f||_q)
};

/// Measured Bernstein ratios on band j. Both are bounded by the calibrated
/// K_bern over randomized sweeps (gradient ratio <= 2 by the support
/// property, up to grid quantization).
inline BernsteinReport bernstein_check(const BandSystem& bs, const VectorField& f, int j, double p,
                                       double q) {
    if (q > p) throw std::invalid_argument("bernstein_check: requires q <= p");
    BernsteinReport rep;
    VectorField fj = band_project(bs, as_spectral(f), SelectEq{j});
    double np = lp_norm(fj, p).value;
    double nq = lp_norm(fj, q).value;
    double scale_ref = lp_norm(f, p).value;
    if (np <= 1e-14 * std::max(1.0, scale_ref)) {
        rep.vacuous = true;
        return rep;
    }
    const double l = std::pow(2.0, j);
    rep.gradient_ratio = lp_norm(gradient(fj), p).value / (l * np);
    const int d = f.grid.dim;
    const double expo = d * (1.0 / q - 1.0 / p);  // 1/inf = 0
    rep.norm_ratio = np / (std::pow(l, expo) * nq);
    return rep;
}

}  // namespace scalesep
