#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scalesep/band_system.hpp"
#include "scalesep/besov.hpp"
#include "scalesep/field.hpp"
#include "scalesep/lattice.hpp"
#include "scalesep/norms.hpp"
#include "scalesep/synth.hpp"

namespace scalesep {

namespace detail {

/// Fundamental-domain distance of each grid point to the origin.
inline std::vector<double> radius_field(const GridSpec& g) {
    GridIndexer indexer(g);
    std::vector<double> r(g.point_count());
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto ix = indexer.decode(i);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double d = g.coord_centered(ix[a]);
            r2 += d * d;
        }
        r[i] = std::sqrt(r2);
    }
    return r;
}

inline double masked_lp(const VectorField& fp, const std::vector<char>& mask, double p) {
    auto mag = pointwise_magnitude(fp);
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < mag.size(); ++i)
            if (mask[i]) m = std::max(m, mag[i]);
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < mag.size(); ++i)
        if (mask[i]) acc += std::pow(mag[i], p);
    return std::pow(acc * fp.grid.cell_volume(), 1.0 / p);
}

}  // namespace detail

/// Inner-ball to complement L^p ratio of the error at radius eta^{-1} sqrt(t)
/// (the algebraic uniqueness-criterion quantity). A vanishing complement is
/// reported as +inf.
inline double annulus_ratio(const VectorField& w, double t, double eta, double p) {
    VectorField wp = as_physical(w);
    const GridSpec& g = w.grid;
    double radius = std::sqrt(t) / eta;
    if (!(radius < g.period / 2.0))
        throw std::invalid_argument("annulus_ratio: ball radius must fit the fundamental domain");
    auto r = detail::radius_field(g);
    std::vector<char> inner(r.size()), outer(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        inner[i] = r[i] <= radius ? 1 : 0;
        outer[i] = !inner[i];
    }
    double num = detail::masked_lp(wp, inner, p);
    double den = detail::masked_lp(wp, outer, p);
    double wnorm = lp_norm(wp, p).value;
    if (den <= 1e-14 * wnorm) return std::numeric_limits<double>::infinity();
    return num / den;
}

struct EnvelopeReport {
    double weighted_sup = 0.0;  // sup |w| (b|x| + sqrt t)^{a+1} / sqrt(t)^a
    bool a3_holds = false;      // weighted_sup < c3
    double upper_sup = 0.0;     // sup |w| (|x| + sqrt t)^4 / t^{3/2}
};

/// Algebraic envelope diagnostics: the lower-bound condition (which no true
/// error field may satisfy at positive separation) and the upper-bound
/// envelope constant.
inline EnvelopeReport algebraic_envelope_check(const VectorField& w, double t, double a, double b,
                                               double c3) {
    if (!(t > 0.0) || !(b > 0.0) || !(c3 > 0.0) || a < 0.0 || a > 3.0)
        throw std::invalid_argument("algebraic_envelope_check: bad parameters");
    VectorField wp = as_physical(w);
    auto mag = pointwise_magnitude(wp);
    auto r = detail::radius_field(w.grid);
    const double st = std::sqrt(t);
    EnvelopeReport rep;
    for (std::size_t i = 0; i < mag.size(); ++i) {
        rep.weighted_sup = std::max(rep.weighted_sup,
                                    mag[i] * std::pow(b * r[i] + st, a + 1.0) / std::pow(st, a));
        rep.upper_sup = std::max(rep.upper_sup,
                                 mag[i] * std::pow(r[i] + st, 4.0) / std::pow(t, 1.5));
    }
    rep.a3_holds = rep.weighted_sup < c3;
    return rep;
}

struct TypeIReport {
    double a1_value = 0.0;   // sup over the q grid of the Type I quantity
    double achieving_q = 0.0;
    double a1p_value = 0.0;  // centered form: sup (|u|+|v|)(|x| + sqrt t)
};

/// Empirical c1: the Type I supremum over a q grid (Lebesgue plus critical
/// Besov terms, with the paper's three-dimensional scaling exponents) and
/// the centered pointwise form.
inline TypeIReport typeI_diagnostics(const BandSystem& bs, const VectorField& u, const VectorField& v,
                                     double t, const std::vector<double>& q_grid) {
    TypeIReport rep;
    VectorField up = as_physical(u), vp = as_physical(v);
    for (double q : q_grid) {
        if (!(q > 3.0)) throw std::invalid_argument("typeI_diagnostics: q grid must lie in (3, inf]");
        double lebesgue = std::pow(t, 0.5 - 1.5 / q) * (lp_norm(up, q).value + lp_norm(vp, q).value);
        double s = -1.0 + 3.0 / q;
        double besov = besov_norm(bs, u, s, q, true).value + besov_norm(bs, v, s, q, true).value;
        double total = lebesgue + besov;
        if (total > rep.a1_value) {
            rep.a1_value = total;
            rep.achieving_q = q;
        }
    }
    auto mu = pointwise_magnitude(up);
    auto mv = pointwise_magnitude(vp);
    auto r = detail::radius_field(u.grid);
    const double st = std::sqrt(t);
    for (std::size_t i = 0; i < mu.size(); ++i)
        rep.a1p_value = std::max(rep.a1p_value, (mu[i] + mv[i]) * (r[i] + st));
    return rep;
}

/// Experiment constants feeding the frequency/lattice scale formulas. c2 is
/// the running infimum of the measured (A2) quantity; the rest come from the
/// calibration ledger or run metadata.
struct ScaleFormulaConstants {
    double c1 = 1.0;
    double c2 = 1.0;
    double c_tilde_p = 1.0;
    double C_B = 1.0;
    double eps2 = 0.05;
    double eps3 = 0.1;
    double theta_j3 = 0.25;  // suppressed constant in the J3 selection rule
};

namespace detail {

/// The common factor D = (4 c~_p M0^{2p/(3-p)} + t)^{1/2 - 3/(2p)} and the
/// theorem's gamma and inverse scale, with the p = inf limits handled.
struct FrequencyScales {
    double D = 0.0;
    double gamma = 0.0;
    double inv_scale = 0.0;  // 2^{J2} or 1/h
};

inline FrequencyScales theorem_scales(double M0, double t, double p, const ScaleFormulaConstants& k) {
    FrequencyScales s;
    double mpow = std::isinf(p) ? std::pow(M0, -2.0) : std::pow(M0, 2.0 * p / (3.0 - p));
    double expo = std::isinf(p) ? 0.5 : 0.5 - 1.5 / p;
    s.D = std::pow(4.0 * k.c_tilde_p * mpow + t, expo);
    s.gamma = k.c2 / (4.0 * M0 * s.D);
    double inner = k.c2 / (4.0 * M0 * M0 * k.C_B * s.D);
    double pexp = std::isinf(p) ? -1.0 : p / (3.0 - p);
    s.inv_scale = (1.0 / s.gamma) * std::pow(inner, pexp);
    return s;
}

}  // namespace detail

struct BandRatioReport {
    double M0 = 0.0;
    // Thm "high/low must not be small" scale
    std::optional<double> J1;
    double ratio_J1 = 0.0;        // ||w_{>=J1}||_p / ||w_{<J1}||_p, vs eps2
    // Thm "low frequencies active" scale
    std::optional<double> J2;
    double gamma = 0.0;
    double ratio_J2 = 0.0;        // ||w_{>=J2}||_p / ||w_{<J2}||_p, vs gamma
    // finite band
    std::optional<double> J3;
    double finite_band_fraction = 0.0;  // ||w_{J3..J2}||_p / ||w||_p
    bool unresolved = false;
};

/// Frequency-scale diagnostics: J1 from the proof's selection inequality
/// C_B c1 2^{J1+2} + C_B c1 eps2 t^{-1/2} < (1/3) t^{-1/2}; J2 and gamma from
/// the displayed low-frequency formulas; J3 from the Besov smallness rule.
inline BandRatioReport band_ratio_diagnostics(const BandSystem& bs, const VectorField& w, double u_lp,
                                              double v_lp, double t, double p,
                                              const ScaleFormulaConstants& k) {
    if (!(p > 3.0)) throw std::invalid_argument("band_ratio_diagnostics: theorems require p in (3, inf]");
    BandRatioReport rep;
    VectorField ws = as_spectral(w);
    double wnorm = lp_norm(ws, p).value;
    if (wnorm <= 0.0) throw std::invalid_argument("band_ratio_diagnostics: zero error field");
    rep.M0 = 2.0 * std::max(u_lp, v_lp);

    auto ratio_at = [&](double J) {
        VectorField lo = band_project(bs, ws, SelectBelowStrict{J});
        VectorField hi = band_project(bs, ws, SelectAtOrAbove{J});
        double lon = lp_norm(lo, p).value;
        return lon > 0.0 ? lp_norm(hi, p).value / lon : std::numeric_limits<double>::infinity();
    };

    // J1: largest integer satisfying the proof inequality (needs eps2 small
    // enough that the right side is positive)
    double rhs = (1.0 / 3.0 - k.C_B * k.c1 * k.eps2) / std::sqrt(t) / (4.0 * k.C_B * k.c1);
    if (rhs > 0.0) {
        double J1 = std::floor(std::log2(rhs));
        if (J1 >= bs.j_min && J1 <= bs.j_max) {
            rep.J1 = J1;
            rep.ratio_J1 = ratio_at(J1);
        } else {
            rep.unresolved = true;
        }
    } else {
        rep.unresolved = true;
    }

    auto scales = detail::theorem_scales(rep.M0, t, p, k);
    rep.gamma = scales.gamma;
    double J2 = std::log2(scales.inv_scale);
    if (J2 >= bs.j_min && J2 <= bs.j_max) {
        rep.J2 = J2;
        rep.ratio_J2 = ratio_at(J2);
    } else {
        rep.unresolved = true;
    }

    // J3: largest integer with 2 c1 2^{(J3+1)(1-3/p)} <= theta t^{3/(2p)-1/2}
    double one_minus = std::isinf(p) ? 1.0 : 1.0 - 3.0 / p;
    double target = k.theta_j3 * std::pow(t, std::isinf(p) ? -0.5 : 1.5 / p - 0.5);
    double J3 = std::floor(std::log2(target / (2.0 * k.c1)) / one_minus - 1.0);
    if (rep.J2 && J3 < *rep.J2 && J3 >= bs.j_min) {
        rep.J3 = J3;
        VectorField band = band_project(
            bs, ws, SelectBandRange{static_cast<int>(J3), static_cast<int>(std::floor(*rep.J2))});
        rep.finite_band_fraction = lp_norm(band, p).value / wnorm;
    } else {
        rep.unresolved = true;
    }
    return rep;
}

struct LatticeRatioReport {
    double M0 = 0.0;
    double h_bar = 0.0;           // snapped
    double detail_ratio = 0.0;    // ||w - J_{h_bar} w||_p / ||w||_p, vs eps3
    double gamma = 0.0;
    double h = 0.0;               // snapped
    double coarse_ratio = 0.0;    // ||J_h w||_p / ||w||_p, vs gamma/2
    bool unresolved = false;
};

/// Discrete-scale diagnostics: h_bar(t) from the uniqueness criterion (it
/// depends on ||w(t)||_p) and h from the large-scales-active formula.
inline LatticeRatioReport lattice_ratio_diagnostics(const VectorField& w, double u_lp, double v_lp,
                                                    double t, double p, const ScaleFormulaConstants& k) {
    if (!(p > 3.0))
        throw std::invalid_argument("lattice_ratio_diagnostics: theorems require p in (3, inf]");
    LatticeRatioReport rep;
    VectorField wp = as_physical(w);
    const GridSpec& g = w.grid;
    double wnorm = lp_norm(wp, p).value;
    if (wnorm <= 0.0) throw std::invalid_argument("lattice_ratio_diagnostics: zero error field");
    rep.M0 = 2.0 * std::max(u_lp, v_lp);

    double wexp = std::isinf(p) ? -0.5 : 1.5 / p - 0.5;
    double h_bar = std::max(2.0 * (k.c1 - k.eps3) / k.eps3 * std::sqrt(t),
                            std::pow(std::pow(t, 0.75) * std::pow(t, wexp) / (k.eps3 * wnorm), 2.0 / 3.0));
    if (h_bar < g.spacing() || h_bar > g.period) {
        rep.unresolved = true;
    } else {
        CubeLattice lat = make_cube_lattice(g, h_bar);
        rep.h_bar = lat.h;
        rep.detail_ratio = lp_norm(subtract(wp, interpolant_jh(wp, lat)), p).value / wnorm;
    }

    auto scales = detail::theorem_scales(rep.M0, t, p, k);
    rep.gamma = scales.gamma;
    double h = 1.0 / scales.inv_scale;
    if (h < g.spacing() || h > g.period) {
        rep.unresolved = true;
    } else {
        CubeLattice lat = make_cube_lattice(g, h);
        rep.h = lat.h;
        rep.coarse_ratio = lp_norm(interpolant_jh(wp, lat), p).value / wnorm;
    }
    return rep;
}

struct BesovTracePoint {
    double time = 0.0;
    double value = 0.0;        // ||w||_{B^{-1}_{inf,inf}} estimate
    double running_inf = 0.0;
};

/// Per-time homogeneous Besov^{-1}_{inf,inf} estimate with its running
/// infimum (the persistence quantity of the remark after the frequency
/// theorem).
inline std::vector<BesovTracePoint> besov_minus_one_trace(const BandSystem& bs,
                                                          const std::vector<double>& times,
                                                          const std::vector<VectorField>& w_snaps) {
    std::vector<BesovTracePoint> out;
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w_snaps.size(); ++i) {
        BesovTracePoint pt;
        pt.time = times[i];
        pt.value = besov_minus_one(bs, w_snaps[i]).value;
        running = std::min(running, pt.value);
        pt.running_inf = running;
        out.push_back(pt);
    }
    return out;
}

struct SsBandCell {
    int J = 0;
    int m = 0;            // t = 4^{-m}
    double ratio = 0.0;   // ||Delta_{<J} w(t)||_inf / (2^{4J} t^{3/2})
    bool resolvable = true;
};

struct SsBandReport {
    double sup_ratio = 0.0;  // empirical proposition constant
    std::vector<SsBandCell> cells;
};

/// Synthesize a band-limited profile W with ||D_j W||_inf <= 2^{4j} on
/// bands [j_lo, j_hi] (a homogeneous Besov^{-4} surrogate), normalized
/// iteratively against filter overlap.
inline VectorField make_ss_profile(const GridSpec& g, const BandSystem& bs, int j_lo, int j_hi,
                                   std::uint64_t seed) {
    VectorField W = VectorField::zeros(g, Representation::spectral, g.dim);
    for (int j = j_lo; j <= j_hi; ++j) {
        VectorField piece = band_project(bs, synth::random_divfree(g, seed + static_cast<std::uint64_t>(j),
                                                                   0.0, g.k_max()),
                                         SelectEq{j});
        double amp = lp_norm(piece, p_inf).value;
        if (amp <= 0.0) continue;
        W = axpy(std::pow(16.0, j) / amp, piece, W);
    }
    // rescale down until every block obeys its cap (neighbor overlap can
    // push a block slightly over)
    for (int pass = 0; pass < 8; ++pass) {
        double worst = 0.0;
        for (int j = bs.j_min; j <= bs.j_max; ++j) {
            double blk = lp_norm(band_project(bs, W, SelectEq{j}), p_inf).value;
            worst = std::max(worst, blk / std::pow(16.0, j));
        }
        if (worst <= 1.0) break;
        W = scaled(W, 1.0 / worst);
    }
    return W;
}

/// Realize w(x,t) = t^{-1/2} W(x / sqrt t) at t = 4^{-m} by integer spectral
/// rescaling (mode k of W lands on mode 2^m k).
inline VectorField self_similar_rescale(const VectorField& W, int m) {
    VectorField Ws = as_spectral(W);
    const GridSpec& g = W.grid;
    VectorField out = VectorField::zeros(g, Representation::spectral, W.ncomp);
    GridIndexer indexer(g);
    const int n = g.n_per_axis;
    const int f = 1 << m;
    const double amp = std::pow(2.0, m);  // t^{-1/2} with t = 4^{-m}
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        auto ix = indexer.decode(i);
        std::array<int, 3> dst{0, 0, 0};
        bool ok = true;
        for (int a = 0; a < g.dim; ++a) {
            int mode = g.mode_index(ix[a]) * f;
            if (mode < -n / 2 || mode >= n / 2) {
                ok = false;
                break;
            }
            dst[a] = mode >= 0 ? mode : n + mode;
        }
        if (!ok) continue;
        std::size_t di = indexer.linear(dst);
        for (int c = 0; c < W.ncomp; ++c) {
            auto z = Ws.spec[c][i];
            if (z != std::complex<double>(0.0, 0.0)) out.spec[c][di] += amp * z;
        }
    }
    return out;
}

/// Measure sup over a (J, t) grid of ||Delta_{<J} w(t)||_inf / (2^{4J} t^{3/2})
/// for the self-similar surrogate. Cells where the rescaled profile leaves
/// the resolvable range are flagged, not counted.
inline SsBandReport ss_band_decay_check(const BandSystem& bs, const VectorField& W, int profile_j_hi,
                                        const std::vector<int>& J_list, const std::vector<int>& m_list) {
    SsBandReport rep;
    const GridSpec& g = W.grid;
    for (int m : m_list) {
        bool resolvable = std::pow(2.0, profile_j_hi + 1 + m) <= g.k_max_axis();
        VectorField w;
        if (resolvable) w = self_similar_rescale(W, m);
        for (int J : J_list) {
            SsBandCell cell;
            cell.J = J;
            cell.m = m;
            cell.resolvable = resolvable;
            if (resolvable) {
                double t = std::pow(4.0, -m);
                VectorField low = band_project(bs, w, SelectBelowStrict{static_cast<double>(J)});
                for (int c = 0; c < low.ncomp; ++c) low.spec[c][0] = {0.0, 0.0};
                cell.ratio = lp_norm(low, p_inf).value / (std::pow(16.0, J) * std::pow(t, 1.5));
                rep.sup_ratio = std::max(rep.sup_ratio, cell.ratio);
            }
            rep.cells.push_back(cell);
        }
    }
    return rep;
}

}  // namespace scalesep
