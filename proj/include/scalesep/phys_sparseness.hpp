#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/heat.hpp"
#include "scalesep/lattice.hpp"
#include "scalesep/norms.hpp"
#include "scalesep/verdict.hpp"

namespace scalesep {

/// Measured (epsilon, beta, ell)-sparseness data for a field. The set S is
/// the canonical super-level set used by the proofs; the certificate is
/// valid iff the complement holds strictly less than beta of the L^p mass
/// and no probe ball sees S at density above epsilon.
struct SparsenessCertificate {
    double epsilon = 1.0;                 // density bound the certificate is checked against
    double beta = 0.0;
    double ell = 0.0;
    double lambda_star = 0.0;             // level-set threshold actually used
    double set_volume_fraction_max = 0.0; // measured sup over probe balls
    double complement_norm_ratio = 0.0;   // measured ||f||_{L^p(S^c)} / ||f||_p
    bool valid() const {
        return complement_norm_ratio < beta && set_volume_fraction_max <= epsilon;
    }
};

namespace detail {

/// Max over probe balls (centered at every grid point) of the S density:
/// a circular convolution of the S indicator with the ball indicator,
/// evaluated spectrally and rounded back to exact integer counts.
inline double max_ball_density(const GridSpec& g, const std::vector<char>& in_set, double ell) {
    const std::size_t total = g.point_count();
    GridIndexer indexer(g);
    std::vector<std::complex<double>> ball(total), ind(total);
    std::size_t ball_points = 0;
    for (std::size_t i = 0; i < total; ++i) {
        auto ix = indexer.decode(i);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            // distance of bin ix[a] from bin 0 in the fundamental domain
            double d = g.coord(ix[a]);
            if (d >= g.period / 2) d -= g.period;
            r2 += d * d;
        }
        bool inside = r2 <= ell * ell;
        ball[i] = {inside ? 1.0 : 0.0, 0.0};
        if (inside) ++ball_points;
        ind[i] = {in_set[i] ? 1.0 : 0.0, 0.0};
    }
    if (ball_points == 0) return 0.0;
    fft_inplace(g.dim, g.n_per_axis, FFTW_FORWARD, ball);
    fft_inplace(g.dim, g.n_per_axis, FFTW_FORWARD, ind);
    for (std::size_t i = 0; i < total; ++i) ball[i] *= ind[i];
    fft_inplace(g.dim, g.n_per_axis, FFTW_BACKWARD, ball);
    const double scale = 1.0 / static_cast<double>(total);
    double worst = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double count = std::round(ball[i].real() * scale);
        worst = std::max(worst, count);
    }
    return worst / static_cast<double>(ball_points);
}

}  // namespace detail

/// Construct the canonical sparseness certificate: S = {|f| >= lambda*} with
/// lambda* the largest threshold whose complement still holds < beta of the
/// L^p mass, then scan probe balls of radius ell at every grid point.
inline SparsenessCertificate physical_sparseness(const VectorField& f, double p, double beta, double ell,
                                                 double epsilon_bound = 1.0) {
    VectorField fp = as_physical(f);
    const GridSpec& g = f.grid;
    auto mag = pointwise_magnitude(fp);
    double fnorm = lp_norm(fp, p).value;
    if (fnorm <= 0.0) throw std::invalid_argument("physical_sparseness: zero field");

    SparsenessCertificate cert;
    cert.beta = beta;
    cert.ell = ell;
    cert.epsilon = epsilon_bound;

    if (std::isinf(p)) {
        cert.lambda_star = beta * fnorm;
    } else {
        // sort magnitudes ascending; take the largest lambda with
        // sum_{|f|<lambda} |f|^p h^d < (beta ||f||_p)^p
        std::vector<double> sorted = mag;
        std::sort(sorted.begin(), sorted.end());
        const double budget = std::pow(beta * fnorm, p) / g.cell_volume();
        double acc = 0.0;
        double lambda = sorted.empty() ? 0.0 : sorted.back();
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            double next = acc + std::pow(sorted[i], p);
            if (next >= budget) {
                lambda = sorted[i];
                break;
            }
            acc = next;
        }
        cert.lambda_star = lambda;
    }

    std::vector<char> in_set(mag.size());
    for (std::size_t i = 0; i < mag.size(); ++i) in_set[i] = mag[i] >= cert.lambda_star ? 1 : 0;

    // complement norm
    if (std::isinf(p)) {
        double worst = 0.0;
        for (std::size_t i = 0; i < mag.size(); ++i)
            if (!in_set[i]) worst = std::max(worst, mag[i]);
        cert.complement_norm_ratio = worst / fnorm;
    } else {
        double acc = 0.0;
        for (std::size_t i = 0; i < mag.size(); ++i)
            if (!in_set[i]) acc += std::pow(mag[i], p);
        cert.complement_norm_ratio = std::pow(acc * g.cell_volume(), 1.0 / p) / fnorm;
    }

    cert.set_volume_fraction_max = detail::max_ball_density(g, in_set, ell);
    return cert;
}

/// Parameter schedule of the caloric decay lemma, explicit heat-kernel case:
///   ell_bar^2 >= C0 ln(C0/gamma),  beta <= ||G||_1^{-1} gamma/3,
///   eps^{1-1/p} <= C0^{-1} ||G||_inf^{-1} gamma / ell_bar^d,
/// with G the heat kernel profile (||G||_1 = 1, ||G||_inf = (4 pi)^{-d/2}).
struct SparsityDecaySchedule {
    double gamma = 0.0;
    double ell_bar = 0.0;
    double beta_max = 0.0;
    double epsilon_max = 0.0;
    double C0 = 0.0;

    static SparsityDecaySchedule make(double gamma, double p, int dim, double C0) {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("SparsityDecaySchedule: gamma in (0,1)");
        if (!(C0 > 1.0) || C0 <= gamma)
            throw std::invalid_argument("SparsityDecaySchedule: need C0 > 1 and C0 > gamma");
        SparsityDecaySchedule s;
        s.gamma = gamma;
        s.C0 = C0;
        s.ell_bar = std::sqrt(C0 * std::log(C0 / gamma));
        s.beta_max = gamma / 3.0;
        const double g_inf = std::pow(4.0 * M_PI, -dim / 2.0);
        double rhs = (1.0 / C0) * (1.0 / g_inf) * gamma / std::pow(s.ell_bar, dim);
        double expo = 1.0 - 1.0 / p;  // p = inf -> 1
        s.epsilon_max = std::min(std::pow(rhs, 1.0 / expo), 1.0);
        return s;
    }
};

struct CaloricDecayVerdict {
    VerdictStatus status = VerdictStatus::not_applicable;
    SparsityDecaySchedule schedule;
    SparsenessCertificate certificate;
    double lhs = 0.0;    // ||e^{t Lap} f||_p
    double rhs = 0.0;    // gamma ||f||_p
    double margin = 0.0;
};

/// Lemma "physical sparseness implies caloric decay": a field certified
/// (eps, beta, ell_bar sqrt(t))-sparse under the schedule must lose the
/// prescribed fraction of its L^p size under e^{t Lap}.
inline CaloricDecayVerdict caloric_sparse_decay_verify(const VectorField& f, double gamma, double t,
                                                       double p, double C0) {
    if (!(t > 0.0)) throw std::invalid_argument("caloric_sparse_decay_verify: t > 0");
    CaloricDecayVerdict v;
    v.schedule = SparsityDecaySchedule::make(gamma, p, f.grid.dim, C0);
    v.certificate = physical_sparseness(f, p, v.schedule.beta_max, v.schedule.ell_bar * std::sqrt(t),
                                        v.schedule.epsilon_max);
    if (!v.certificate.valid()) {
        v.status = VerdictStatus::not_applicable;
        return v;
    }
    double fnorm = lp_norm(f, p).value;
    v.lhs = lp_norm(heat_evolve(as_spectral(f), t, 1.0), p).value;
    v.rhs = gamma * fnorm;
    v.margin = v.rhs - v.lhs;
    v.status = v.margin >= 0.0 ? VerdictStatus::pass : VerdictStatus::fail;
    return v;
}

struct DiscreteDecayVerdict {
    VerdictStatus status = VerdictStatus::inconclusive;
    double h = 0.0;           // snapped lattice edge
    double jh_ratio = 0.0;    // ||J_h f||_p / ||f||_p
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double gauss_tail_sum = 0.0;  // sum_i (h^d / t^{d/2}) e^{-|x_i|^2/(4t)}
};

/// Lemma "small cell averages imply caloric decay": with h = kappa_disc *
/// gamma * sqrt(t) (snapped), ||J_h f||_p <= (gamma/2)||f||_p forces
/// ||e^{t Lap} f||_p <= gamma ||f||_p. The Gaussian cell-tail sum entering
/// the proof's Young-inequality step is measured alongside.
inline DiscreteDecayVerdict lemma_discrete_decay_verify(const VectorField& f, double gamma, double t,
                                                        double p, double kappa_disc) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("lemma_discrete_decay_verify: gamma in (0,1)");
    if (!(t > 0.0)) throw std::invalid_argument("lemma_discrete_decay_verify: t > 0");
    DiscreteDecayVerdict v;
    const GridSpec& g = f.grid;
    double h_raw = kappa_disc * gamma * std::sqrt(t);
    if (h_raw < g.spacing()) {
        v.status = VerdictStatus::inconclusive;
        return v;
    }
    CubeLattice lat = make_cube_lattice(g, h_raw);
    v.h = lat.h;

    {
        // sum over cell centers factorizes per axis
        auto kernel = detail::cell_gauss_kernel(lat, t);
        double axis_sum = 0.0;
        for (double k : kernel) axis_sum += k;
        v.gauss_tail_sum = std::pow(lat.h, g.dim) * std::pow(axis_sum, g.dim) / std::pow(t, g.dim / 2.0);
    }

    VectorField fp = as_physical(f);
    double fnorm = lp_norm(fp, p).value;
    if (fnorm <= 0.0) throw std::invalid_argument("lemma_discrete_decay_verify: zero field");
    v.jh_ratio = lp_norm(interpolant_jh(fp, lat), p).value / fnorm;
    if (v.jh_ratio > gamma / 2.0) {
        v.status = VerdictStatus::not_applicable;
        return v;
    }
    v.lhs = lp_norm(heat_evolve(as_spectral(f), t, 1.0), p).value;
    v.rhs = gamma * fnorm;
    v.margin = v.rhs - v.lhs;
    v.status = v.margin >= 0.0 ? VerdictStatus::pass : VerdictStatus::fail;
    return v;
}

}  // namespace scalesep
