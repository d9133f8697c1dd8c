#pragma once

#include <cmath>
#include <stdexcept>

#include "scalesep/band_system.hpp"
#include "scalesep/heat.hpp"
#include "scalesep/norms.hpp"
#include "scalesep/verdict.hpp"

namespace scalesep {

/// beta_measured = ||Delta_{<J} f||_p / ||f||_p. J may be non-integer (the
/// scaled low-pass profile interpolates the dyadic cut).
inline double frequency_sparseness(const BandSystem& bs, const VectorField& f, double p, double J) {
    double denom = lp_norm(f, p).value;
    if (denom <= 0.0) throw std::invalid_argument("frequency_sparseness: zero field");
    VectorField low = band_project(bs, as_spectral(f), SelectBelowStrict{J});
    return lp_norm(low, p).value / denom;
}

struct FrequencyDecayVerdict {
    VerdictStatus status = VerdictStatus::inconclusive;
    double J = 0.0;             // selected cut: ceil(log2(kappa_freq / (gamma sqrt(t))))
    double beta_measured = 0.0;
    double lhs = 0.0;           // ||e^{t Lap} f||_p
    double rhs = 0.0;           // gamma ||f||_p
    double margin = 0.0;        // rhs - lhs
};

/// Frequency-sparseness decay harness: with J chosen so 2^J ~ gamma^{-1}
/// t^{-1/2} (proportionality kappa_freq, calibrated), a (gamma/2, J)-sparse
/// field must satisfy ||e^{t Lap} f||_p <= gamma ||f||_p.
inline FrequencyDecayVerdict lemma_frequency_decay_verify(const BandSystem& bs, const VectorField& f,
                                                          double gamma, double t, double p,
                                                          double kappa_freq) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("lemma_frequency_decay_verify: gamma in (0,1)");
    if (!(t > 0.0)) throw std::invalid_argument("lemma_frequency_decay_verify: t > 0");
    FrequencyDecayVerdict v;
    // the tiny slack keeps an exactly-dyadic cut from rounding up a level
    v.J = std::ceil(std::log2(kappa_freq / (gamma * std::sqrt(t))) - 1e-9);
    if (v.J < bs.j_min || v.J > bs.j_max) {
        v.status = VerdictStatus::inconclusive;
        return v;
    }
    double fnorm = lp_norm(f, p).value;
    if (fnorm <= 0.0) throw std::invalid_argument("lemma_frequency_decay_verify: zero field");
    v.beta_measured = frequency_sparseness(bs, f, p, v.J);
    if (v.beta_measured > gamma / 2.0) {
        v.status = VerdictStatus::not_applicable;
        return v;
    }
    VectorField evolved = heat_evolve(as_spectral(f), t, 1.0);
    v.lhs = lp_norm(evolved, p).value;
    v.rhs = gamma * fnorm;
    v.margin = v.rhs - v.lhs;
    v.status = v.margin >= 0.0 ? VerdictStatus::pass : VerdictStatus::fail;
    return v;
}

}  // namespace scalesep
