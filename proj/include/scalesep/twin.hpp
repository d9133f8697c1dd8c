#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "scalesep/band_system.hpp"
#include "scalesep/solver.hpp"
#include "scalesep/synth.hpp"

namespace scalesep {

/// Band-localized random divergence-free perturbation of L2 size delta0.
struct PerturbationSpec {
    double delta0 = 0.0;
    int band_j0 = 2;
    std::uint64_t seed = 1;
};

inline VectorField make_perturbation(const GridSpec& g, const BandSystem& bs, const PerturbationSpec& ps) {
    if (ps.delta0 == 0.0) return VectorField::zeros(g, Representation::spectral, g.dim);
    VectorField noise = synth::random_divfree(g, ps.seed, 0.0, g.k_max());
    VectorField banded = band_project(bs, noise, SelectEq{ps.band_j0});
    banded = leray_project(banded);
    double n2 = l2_norm_spectral(banded);
    if (n2 <= 0.0) throw std::invalid_argument("make_perturbation: band carries no energy on this grid");
    return scaled(banded, ps.delta0 / n2);
}

/// Paired trajectories u (from u0) and v (from u0 + delta), sharing grid,
/// config and snapshot cadence. The error field w = u - v is recomputed from
/// the two states at snapshot times, never integrated on its own.
struct TwinRun {
    Trajectory traj_u;
    Trajectory traj_v;
    PerturbationSpec perturbation;
    std::vector<double> times;
    std::vector<double> error_energy;             // E_Delta = ||w||_2^2 per snapshot
    std::vector<VectorField> error_snapshots;     // spectral w; empty if not stored
    std::map<double, std::vector<double>> u_lp;   // per diagnostic p: ||u||_p series
    std::map<double, std::vector<double>> v_lp;
};

struct TwinOptions {
    bool store_error_snapshots = true;
    bool store_traj_snapshots = false;
    std::vector<double> lp_grid = {2.0, p_inf};  // norms recorded for both flows
};

/// Lockstep twin integration. Memory stays bounded when snapshot storage is
/// off, which is what large-grid campaigns use.
inline TwinRun run_twin(const VectorField& u0, const BandSystem& bs, const PerturbationSpec& ps,
                        SolverConfig cfg, const TwinOptions& opt = {}) {
    TwinRun tr;
    tr.perturbation = ps;
    cfg.store_snapshots = opt.store_traj_snapshots;

    VectorField u0s = as_spectral(u0);
    if (divergence_residual(u0s) > 1e-10) u0s = leray_project(u0s);
    VectorField v0s = axpy(1.0, make_perturbation(u0s.grid, bs, ps), u0s);

    for (double p : opt.lp_grid) {
        tr.u_lp[p] = {};
        tr.v_lp[p] = {};
    }

    Stepper stepper(u0s.grid, cfg);
    TrajectoryScalars s0 = probe_scalars(u0s);
    cfg.validate(u0s.grid, std::max(s0.max_speed, probe_scalars(v0s).max_speed));

    tr.traj_u.grid = u0s.grid;
    tr.traj_v.grid = u0s.grid;
    VectorField ustate = u0s, vstate = v0s;
    ustate.divergence_free = vstate.divergence_free = true;

    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.traj_u.times.push_back(t);
        tr.traj_v.times.push_back(t);
        tr.traj_u.scalars.push_back(probe_scalars(ustate));
        tr.traj_v.scalars.push_back(probe_scalars(vstate));
        if (opt.store_traj_snapshots) {
            tr.traj_u.snapshots.push_back(ustate);
            tr.traj_v.snapshots.push_back(vstate);
        }
        VectorField w = subtract(ustate, vstate);
        double l2 = l2_norm_spectral(w);
        tr.error_energy.push_back(l2 * l2);
        VectorField wp = to_physical(w);
        for (double p : opt.lp_grid) {
            tr.u_lp[p].push_back(lp_norm(to_physical(ustate), p).value);
            tr.v_lp[p].push_back(lp_norm(to_physical(vstate), p).value);
        }
        if (opt.store_error_snapshots) tr.error_snapshots.push_back(w);
    };

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    record(0.0);
    for (std::size_t istep = 1; istep <= n_steps; ++istep) {
        ustate = stepper.step(ustate, istep);
        vstate = stepper.step(vstate, istep);
        if (istep % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || istep == n_steps)
            record(istep * cfg.dt);
    }
    return tr;
}

struct ErrorEnergySeries {
    std::vector<double> times;
    std::vector<double> error_energy;   // E_Delta(t)
    std::vector<double> comparator;     // (gamma/2)(||u||_2^2 + ||v||_2^2)(t)
    std::vector<bool> predictable;      // E_Delta < comparator
};

/// E_Delta per snapshot plus the de-correlation comparator at level gamma
/// (gamma = 1 benchmarks against fully uncorrelated flows).
inline ErrorEnergySeries error_energy_trace(const TwinRun& tr, double gamma = 1.0) {
    ErrorEnergySeries s;
    s.times = tr.times;
    s.error_energy = tr.error_energy;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        double eu = 2.0 * tr.traj_u.scalars[i].energy;
        double ev = 2.0 * tr.traj_v.scalars[i].energy;
        s.comparator.push_back(0.5 * gamma * (eu + ev));
        s.predictable.push_back(s.error_energy[i] < s.comparator.back());
    }
    return s;
}

/// Frozen-advection error dynamics: dw/dt = Lap w - P div(u (x) w + w (x) u)
/// with a steady background u and unit viscosity. This linear flow satisfies
/// the exact w-energy identity assumed by the predictability criterion, so
/// it is the clean test bed for the monitor.
inline std::vector<VectorField> frozen_advection_run(const VectorField& w0, const VectorField& u_frozen,
                                                     double dt, std::size_t n_steps, int stride,
                                                     std::vector<double>* times_out = nullptr) {
    VectorField w = as_spectral(w0);
    VectorField uf = as_spectral(u_frozen);
    const GridSpec& g = w.grid;
    const int d = g.dim;
    if (g.viscosity != 1.0)
        throw std::invalid_argument("frozen_advection_run: grid viscosity must be 1");

    auto k2 = detail::k_squared(g);
    std::vector<double> e_half(k2.size()), e_full(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) {
        e_half[i] = std::exp(-k2[i] * dt / 2.0);
        e_full[i] = e_half[i] * e_half[i];
    }
    VectorField up = to_physical(uf);

    auto rhs = [&](const VectorField& ws) {
        VectorField wp = to_physical(ws);
        VectorField T = VectorField::zeros(g, Representation::physical, d * d);
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a) {
                auto& dst = T.phys[c * d + a];
                for (std::size_t i = 0; i < g.point_count(); ++i)
                    dst[i] = up.phys[c][i] * wp.phys[a][i] + wp.phys[c][i] * up.phys[a][i];
            }
        VectorField Ts = to_spectral(T);
        VectorField out = VectorField::zeros(g, Representation::spectral, d);
        GridIndexer indexer(g);
        const std::complex<double> I{0.0, 1.0};
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            auto ix = indexer.decode(i);
            for (int c = 0; c < d; ++c) {
                std::complex<double> acc{0.0, 0.0};
                for (int a = 0; a < d; ++a) acc += g.wavenumber(ix[a]) * Ts.spec[c * d + a][i];
                out.spec[c][i] = -I * acc;
            }
        }
        return leray_project(out);
    };

    std::vector<VectorField> snaps;
    snaps.push_back(w);
    if (times_out) times_out->push_back(0.0);
    for (std::size_t istep = 1; istep <= n_steps; ++istep) {
        VectorField k1 = rhs(w);
        VectorField w1 = axpy(dt / 2.0, k1, w);
        detail::apply_multiplier(w1, e_half);
        VectorField k2s = rhs(w1);
        VectorField wh = w;
        detail::apply_multiplier(wh, e_half);
        VectorField w2 = axpy(dt / 2.0, k2s, wh);
        VectorField k3 = rhs(w2);
        VectorField k3e = k3;
        detail::apply_multiplier(k3e, e_half);
        VectorField wf = w;
        detail::apply_multiplier(wf, e_full);
        VectorField w3 = axpy(dt, k3e, wf);
        VectorField k4 = rhs(w3);
        VectorField out = wf;
        VectorField k1e = k1;
        detail::apply_multiplier(k1e, e_full);
        out = axpy(dt / 6.0, k1e, out);
        VectorField k2e = k2s;
        detail::apply_multiplier(k2e, e_half);
        out = axpy(dt / 3.0, k2e, out);
        detail::apply_multiplier(k3, e_half);
        out = axpy(dt / 3.0, k3, out);
        out = axpy(dt / 6.0, k4, out);
        w = out;
        if (istep % static_cast<std::size_t>(stride) == 0) {
            snaps.push_back(w);
            if (times_out) times_out->push_back(istep * dt);
        }
    }
    return snaps;
}

}  // namespace scalesep
