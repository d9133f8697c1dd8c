#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "scalesep/calibration.hpp"
#include "scalesep/corpora.hpp"
#include "scalesep/duhamel.hpp"
#include "scalesep/freq_sparseness.hpp"
#include "scalesep/lattice.hpp"
#include "scalesep/phys_sparseness.hpp"
#include "scalesep/tsai.hpp"

namespace scalesep {

struct SweepStat {
    int cases = 0;
    int applicable = 0;
    int passes = 0;
    int fails = 0;
    int inconclusive = 0;
    double min_margin = std::numeric_limits<double>::infinity();

    void absorb(VerdictStatus status, double margin) {
        ++cases;
        switch (status) {
            case VerdictStatus::pass:
                ++applicable;
                ++passes;
                min_margin = std::min(min_margin, margin);
                break;
            case VerdictStatus::fail:
                ++applicable;
                ++fails;
                min_margin = std::min(min_margin, margin);
                break;
            case VerdictStatus::not_applicable:
                break;
            case VerdictStatus::inconclusive:
                ++inconclusive;
                break;
        }
    }
};

/// Randomized sweeps behind both the calibrate command and verify-lemmas.
/// Counts are parameters so calibration can run them against candidate
/// constants and verification re-runs them against the ledger.
namespace sweeps {

/// Lemma: frequency sparseness implies caloric decay. Fields are built to
/// satisfy the beta <= gamma/2 hypothesis at the cut selected by kappa.
inline SweepStat freq_lemma(const GridSpec& g, const BandSystem& bs, const std::vector<double>& gammas,
                            const std::vector<double>& ps, int trials, double kappa,
                            std::uint64_t seed) {
    SweepStat stat;
    const double J_target = 4.0;
    for (double gamma : gammas) {
        double t = std::pow(kappa / (gamma * std::pow(2.0, J_target)), 2);
        for (double p : ps)
            for (int trial = 0; trial < trials; ++trial) {
                auto f = corpora::freq_sparse_field(g, seed + 1000 * trial + 7, gamma, J_target, p);
                if (!f) continue;
                auto v = lemma_frequency_decay_verify(bs, *f, gamma, t, p, kappa);
                stat.absorb(v.status, v.margin);
            }
    }
    return stat;
}

/// Lemma: small cell averages imply caloric decay. The sublattice family
/// vanishes exactly under J_h at the snapped h.
inline SweepStat disc_lemma(const GridSpec& g, const std::vector<double>& gammas,
                            const std::vector<double>& ps, int trials, double kappa,
                            std::uint64_t seed) {
    SweepStat stat;
    for (double gamma : gammas)
        for (int q : {4, 8}) {
            double h = q * g.spacing();
            double t = std::pow(h / (kappa * gamma), 2);
            int m0 = g.n_per_axis / q;
            for (double p : ps)
                for (int trial = 0; trial < trials; ++trial) {
                    VectorField f = corpora::sublattice_field(g, seed + 2000 * trial + 13, m0);
                    if (lp_norm(f, p).value <= 0.0) continue;
                    auto v = lemma_discrete_decay_verify(f, gamma, t, p, kappa);
                    stat.absorb(v.status, v.margin);
                }
        }
    return stat;
}

/// Lemma: physical sparseness under the explicit heat schedule implies
/// caloric decay.
inline SweepStat caloric_lemma(const GridSpec& g, const std::vector<double>& gammas, int trials,
                               double C0, std::uint64_t seed, double t = 0.15) {
    SweepStat stat;
    for (double gamma : gammas) {
        auto sched = SparsityDecaySchedule::make(gamma, p_inf, g.dim, C0);
        double sigma = sched.ell_bar * std::sqrt(t) / 14.0;
        if (sigma < g.spacing()) continue;
        for (int trial = 0; trial < trials; ++trial) {
            VectorField f = corpora::multi_bump_field(g, seed + 3000 * trial + 17, 3, sigma);
            auto v = caloric_sparse_decay_verify(f, gamma, t, p_inf, C0);
            stat.absorb(v.status, v.margin);
        }
    }
    return stat;
}

struct BernsteinSweep {
    double max_gradient_ratio = 0.0;
    double max_norm_ratio = 0.0;
    int cases = 0;
};

inline BernsteinSweep bernstein(const GridSpec& g, const BandSystem& bs, int trials,
                                std::uint64_t seed) {
    BernsteinSweep out;
    for (int trial = 0; trial < trials; ++trial) {
        VectorField f = synth::random_band_limited(g, seed + trial, 0.0, g.k_max());
        for (int j = 1; j <= std::min(4, bs.j_max); ++j)
            for (auto [p, q] : {std::pair{2.0, 2.0}, {p_inf, p_inf}, {p_inf, 2.0}, {4.0, 2.0}}) {
                auto rep = bernstein_check(bs, f, j, p, q);
                if (rep.vacuous) continue;
                ++out.cases;
                out.max_gradient_ratio = std::max(out.max_gradient_ratio, rep.gradient_ratio);
                out.max_norm_ratio = std::max(out.max_norm_ratio, rep.norm_ratio);
            }
    }
    return out;
}

inline double poincare_max(const GridSpec& g, int trials, std::uint64_t seed) {
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        VectorField f = as_physical(
            synth::random_band_limited(g, seed + trial, 0.0, g.n_per_axis / 8.0, 1));
        for (int q : {2, 4, 8, 16}) {
            auto rep = poincare_check(f, q * g.spacing());
            if (!rep.vacuous) worst = std::max(worst, rep.ratio);
        }
    }
    return worst;
}

/// Envelope constant of ||I_{h,t} f||_p <= K ||J_h f||_p over the lemma's
/// regime h <= sqrt(t).
inline double iht_envelope_max(const GridSpec& g, int trials, std::uint64_t seed) {
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        VectorField f = as_physical(synth::random_band_limited(g, seed + trial, 0.0, 8.0));
        for (int q : {2, 4}) {
            CubeLattice lat = make_cube_lattice(g, q * g.spacing());
            for (double t : {lat.h * lat.h, 4.0 * lat.h * lat.h, 16.0 * lat.h * lat.h}) {
                VectorField If = interpolant_iht(f, lat, t);
                VectorField Jf = interpolant_jh(f, lat);
                for (double p : {2.0, p_inf}) {
                    double jn = lp_norm(Jf, p).value;
                    if (jn > 0.0) worst = std::max(worst, lp_norm(If, p).value / jn);
                }
            }
        }
    }
    return worst;
}

inline double bilinear_max(std::uint64_t seed, int trials = 4) {
    double worst = 0.0;
    GridSpec g2(2, 64);
    for (int trial = 0; trial < trials; ++trial) {
        for (double tau : {0.1, 0.4}) {
            auto us = corpora::heat_snapshots(g2, seed + 10 * trial, 8.0, tau, 17);
            auto vs = corpora::heat_snapshots(g2, seed + 10 * trial + 5, 8.0, tau, 17);
            for (auto [p, q] : {std::pair{2.0, 2.0}, {4.0, 4.0}, {p_inf, p_inf}}) {
                auto rep = bilinear_estimate_check(us, vs, tau, p, q);
                if (!rep.vacuous) worst = std::max(worst, rep.ratio);
            }
        }
    }
    GridSpec g3(3, 16);
    for (int trial = 0; trial < std::max(1, trials / 2); ++trial) {
        auto us = corpora::heat_snapshots(g3, seed + 100 * trial, 4.0, 0.2, 9);
        auto vs = corpora::heat_snapshots(g3, seed + 100 * trial + 50, 4.0, 0.2, 9);
        for (auto [p, q] : {std::pair{p_inf, 6.0}, {p_inf, p_inf}}) {
            auto rep = bilinear_estimate_check(us, vs, 0.2, p, q);
            if (!rep.vacuous) worst = std::max(worst, rep.ratio);
        }
    }
    return worst;
}

inline double tsai_max() {
    double worst = 0.0;
    for (double a : {2.0, 2.5, 3.0, 3.5, 4.0})
        for (double b : {2.0, 2.5, 3.0, 3.5, 4.0}) {
            if (a + b <= 3.0) continue;
            for (double x : {0.0, 2.0, 8.0, 32.0}) worst = std::max(worst, tsai_phi(x, a, b).ratio);
        }
    return worst;
}

}  // namespace sweeps

struct LemmaSuiteOptions {
    std::uint64_t seed = 20260810;
    int freq_trials = 100;
    int disc_trials = 30;
    int caloric_trials = 25;
    int bernstein_trials = 200;
    std::vector<double> gammas = {0.05, 0.1, 0.2};
    std::vector<double> ps = {2.0, p_inf};
};

struct LemmaSuiteReport {
    SweepStat freq, disc, caloric;
    sweeps::BernsteinSweep bernstein;
    double poincare_max = 0.0;
    double iht_envelope_max = 0.0;
    double bilinear_max = 0.0;
    double tsai_max = 0.0;

    bool zero_counterexamples() const { return freq.fails + disc.fails + caloric.fails == 0; }

    bool within_ledger(const CalibrationConstants& cal) const {
        return zero_counterexamples() && bernstein.max_gradient_ratio <= cal.K_bern.value &&
               bernstein.max_norm_ratio <= cal.K_bern.value && poincare_max <= cal.C_poinc.value &&
               iht_envelope_max <= cal.K_I.value && bilinear_max <= cal.C_B.value &&
               tsai_max <= cal.C_tsai.value;
    }
};

inline LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& opt, const CalibrationConstants& cal) {
    LemmaSuiteReport rep;
    GridSpec g64(2, 64);
    GridSpec g128(2, 128);
    BandSystem bs64 = build_band_system(g64);

    rep.freq = sweeps::freq_lemma(g64, bs64, opt.gammas, opt.ps, opt.freq_trials,
                                  cal.kappa_freq.value, opt.seed);
    rep.disc = sweeps::disc_lemma(g64, opt.gammas, opt.ps, opt.disc_trials, cal.kappa_disc.value,
                                  opt.seed + 1);
    std::vector<double> caloric_gammas;
    for (double gamma : opt.gammas)
        if (gamma >= 0.1) caloric_gammas.push_back(gamma);  // finer bumps than the grid otherwise
    rep.caloric = sweeps::caloric_lemma(g128, caloric_gammas, opt.caloric_trials, cal.C0.value,
                                        opt.seed + 2);

    // 3D spot checks keep the dimension-generic claims honest
    GridSpec g3(3, 32);
    BandSystem bs3 = build_band_system(g3);
    auto freq3 = sweeps::freq_lemma(g3, bs3, {0.2}, {2.0}, std::max(3, opt.freq_trials / 20),
                                    cal.kappa_freq.value, opt.seed + 3);
    auto disc3 = sweeps::disc_lemma(g3, {0.2}, {2.0}, std::max(2, opt.disc_trials / 10),
                                    cal.kappa_disc.value, opt.seed + 4);
    rep.freq.cases += freq3.cases;
    rep.freq.applicable += freq3.applicable;
    rep.freq.passes += freq3.passes;
    rep.freq.fails += freq3.fails;
    rep.disc.cases += disc3.cases;
    rep.disc.applicable += disc3.applicable;
    rep.disc.passes += disc3.passes;
    rep.disc.fails += disc3.fails;

    rep.bernstein = sweeps::bernstein(g64, bs64, opt.bernstein_trials, opt.seed + 5);
    rep.poincare_max = sweeps::poincare_max(g64, 12, opt.seed + 6);
    rep.iht_envelope_max = std::max(sweeps::iht_envelope_max(GridSpec(2, 64), 6, opt.seed + 7),
                                    sweeps::iht_envelope_max(GridSpec(3, 32), 3, opt.seed + 8));
    rep.bilinear_max = sweeps::bilinear_max(opt.seed + 9);
    rep.tsai_max = sweeps::tsai_max();
    return rep;
}

}  // namespace scalesep
