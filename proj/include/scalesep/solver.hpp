#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalesep/field.hpp"
#include "scalesep/heat.hpp"
#include "scalesep/norms.hpp"
#include "scalesep/operators.hpp"

namespace scalesep {

enum class Dealias { two_thirds, none };

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Dealias dealias = Dealias::two_thirds;
    double cfl_max = 0.5;
    double cfl_stability = 2.8;  // RK4 imaginary-axis margin for the viscous bound
    int snapshot_stride = 1;
    bool nonlinear = true;       // off: pure heat flow (shared multiplier)
    bool store_snapshots = true;

    void validate(const GridSpec& g, double max_speed0) const {
        if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("SolverConfig: dt, t_end > 0");
        if (snapshot_stride < 1) throw std::invalid_argument("SolverConfig: snapshot_stride >= 1");
        double kmax = g.k_max_axis();
        if (dt > cfl_stability / (g.viscosity * kmax * kmax))
            throw std::invalid_argument("SolverConfig: dt violates the viscous stability bound");
        if (max_speed0 > 0.0 && dt > cfl_max * g.spacing() / max_speed0)
            throw std::invalid_argument("SolverConfig: dt violates the advective CFL bound for u0");
    }
};

struct SolverAbort : std::runtime_error {
    std::size_t step_index;
    SolverAbort(const std::string& what, std::size_t step) : std::runtime_error(what), step_index(step) {}
};

struct TrajectoryScalars {
    double energy = 0.0;        // 1/2 ||u||_2^2
    double dissipation = 0.0;   // nu ||grad u||_2^2
    double max_speed = 0.0;
    double min_inf_grad = 0.0;
};

struct Trajectory {
    GridSpec grid;
    std::vector<double> times;
    std::vector<VectorField> snapshots;      // spectral; empty when not stored
    std::vector<TrajectoryScalars> scalars;
    bool projected_initial_data = false;
};

namespace detail {

inline std::size_t sym_index(int c, int a, int dim) {
    if (c > a) std::swap(c, a);
    // packed upper triangle, row-major
    std::size_t idx = 0;
    for (int r = 0; r < c; ++r) idx += static_cast<std::size_t>(dim - r);
    return idx + static_cast<std::size_t>(a - c);
}

}  // namespace detail

/// One integrating-factor RK4 stepper instance: caches the exact viscous
/// multipliers for dt and dt/2 and the dealiasing mask.
class Stepper {
  public:
    Stepper(const GridSpec& g, const SolverConfig& cfg) : grid_(g), cfg_(cfg) {
        auto k2 = detail::k_squared(g);
        e_half_.resize(k2.size());
        e_full_.resize(k2.size());
        for (std::size_t i = 0; i < k2.size(); ++i) {
            e_half_[i] = std::exp(-g.viscosity * k2[i] * (cfg.dt / 2.0));
            // same expression as heat_evolve so the heat-only path is
            // bit-identical to the semigroup
            e_full_[i] = std::exp(-g.viscosity * k2[i] * cfg.dt);
        }
        if (cfg.dealias == Dealias::two_thirds) {
            mask_.assign(k2.size(), 1.0);
            GridIndexer indexer(g);
            const int cutoff = g.n_per_axis / 3;
            for (std::size_t i = 0; i < k2.size(); ++i) {
                auto ix = indexer.decode(i);
                for (int a = 0; a < g.dim; ++a)
                    if (std::abs(g.mode_index(ix[a])) > cutoff) mask_[i] = 0.0;
            }
        }
    }

    /// -P div(u (x) u), evaluated pseudo-spectrally with dealiasing.
    /// Reports the grid max speed seen while forming the product.
    VectorField nonlinear_term(const VectorField& us, double* max_speed = nullptr) const {
        const GridSpec& g = grid_;
        const int d = g.dim;
        VectorField up = to_physical(us);
        if (max_speed) {
            double m2 = 0.0;
            for (std::size_t i = 0; i < g.point_count(); ++i) {
                double s = 0.0;
                for (int c = 0; c < d; ++c) s += up.phys[c][i] * up.phys[c][i];
                m2 = std::max(m2, s);
            }
            *max_speed = std::sqrt(m2);
        }
        const int nsym = d * (d + 1) / 2;
        VectorField T = VectorField::zeros(g, Representation::physical, nsym);
        for (int c = 0; c < d; ++c)
            for (int a = c; a < d; ++a) {
                auto& dst = T.phys[detail::sym_index(c, a, d)];
                for (std::size_t i = 0; i < g.point_count(); ++i) dst[i] = up.phys[c][i] * up.phys[a][i];
            }
        VectorField Ts = to_spectral(T);
        VectorField rhs = VectorField::zeros(g, Representation::spectral, d);
        GridIndexer indexer(g);
        const std::complex<double> I{0.0, 1.0};
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            auto ix = indexer.decode(i);
            for (int c = 0; c < d; ++c) {
                std::complex<double> acc{0.0, 0.0};
                for (int a = 0; a < d; ++a)
                    acc += g.wavenumber(ix[a]) * Ts.spec[detail::sym_index(c, a, d)][i];
                rhs.spec[c][i] = -I * acc;
            }
        }
        rhs = leray_project(rhs);
        if (!mask_.empty()) detail::apply_multiplier(rhs, mask_);
        return rhs;
    }

    /// Classical RK4 on the integrating-factor variable; the linear part is
    /// advanced by the exact multiplier, so with the nonlinearity disabled a
    /// step is exact heat evolution.
    VectorField step(const VectorField& state, std::size_t step_index = 0) const {
        state.require(Representation::spectral, "Stepper::step");
        if (!cfg_.nonlinear) {
            VectorField out = state;
            detail::apply_multiplier(out, e_full_);
            return out;
        }
        const double dt = cfg_.dt;
        double speed = 0.0;
        VectorField k1 = nonlinear_term(state, &speed);
        if (speed * dt > cfg_.cfl_max * grid_.spacing())
            throw SolverAbort("CFL violation: max|u| dt / h = " +
                                  std::to_string(speed * dt / grid_.spacing()),
                              step_index);

        VectorField u1 = axpy(dt / 2.0, k1, state);
        detail::apply_multiplier(u1, e_half_);
        VectorField k2 = nonlinear_term(u1);

        VectorField uh = state;
        detail::apply_multiplier(uh, e_half_);
        VectorField u2 = axpy(dt / 2.0, k2, uh);
        VectorField k3 = nonlinear_term(u2);

        VectorField k3e = k3;
        detail::apply_multiplier(k3e, e_half_);
        VectorField uf = state;
        detail::apply_multiplier(uf, e_full_);
        VectorField u3 = axpy(dt, k3e, uf);
        VectorField k4 = nonlinear_term(u3);

        // u_{n+1} = E2 u_n + dt/6 (E2 k1 + 2 E k2 + 2 E k3 + k4)
        VectorField out = uf;
        VectorField k1e = k1;
        detail::apply_multiplier(k1e, e_full_);
        out = axpy(dt / 6.0, k1e, out);
        VectorField k2e = k2;
        detail::apply_multiplier(k2e, e_half_);
        out = axpy(dt / 3.0, k2e, out);
        detail::apply_multiplier(k3, e_half_);
        out = axpy(dt / 3.0, k3, out);
        out = axpy(dt / 6.0, k4, out);
        out.divergence_free = true;

        for (int c = 0; c < grid_.dim; ++c)
            for (const auto& z : out.spec[c])
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    throw SolverAbort("non-finite state", step_index);
        return out;
    }

  private:
    GridSpec grid_;
    SolverConfig cfg_;
    std::vector<double> e_half_, e_full_, mask_;
};

inline VectorField step(const VectorField& state, const SolverConfig& cfg) {
    return Stepper(state.grid, cfg).step(state);
}

inline TrajectoryScalars probe_scalars(const VectorField& us) {
    TrajectoryScalars s;
    VectorField up = to_physical(us);
    double l2 = l2_norm_spectral(us);
    s.energy = 0.5 * l2 * l2;
    double gn = lp_norm(gradient(us), 2.0).value;
    s.dissipation = us.grid.viscosity * gn * gn;
    s.max_speed = lp_norm(up, p_inf).value;
    double ginf = lp_norm(gradient(us), p_inf).value;
    s.min_inf_grad = std::min(s.max_speed, std::sqrt(ginf));
    return s;
}

using SnapshotProbe = std::function<void(std::size_t snap_index, double time, const VectorField& u_spec)>;

/// Integrate u0 to t_end, sampling scalars (and optionally snapshots) every
/// snapshot_stride steps. Deterministic for fixed (u0, cfg).
inline Trajectory run(const VectorField& u0, const SolverConfig& cfg, const SnapshotProbe& probe = {}) {
    VectorField state = as_spectral(u0);
    Trajectory traj;
    traj.grid = state.grid;
    if (divergence_residual(state) > 1e-10) {
        state = leray_project(state);
        traj.projected_initial_data = true;
    }
    state.divergence_free = true;

    TrajectoryScalars s0 = probe_scalars(state);
    cfg.validate(state.grid, s0.max_speed);

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    Stepper stepper(state.grid, cfg);

    auto record = [&](std::size_t snap, double t, const VectorField& u) {
        traj.times.push_back(t);
        traj.scalars.push_back(probe_scalars(u));
        if (cfg.store_snapshots) traj.snapshots.push_back(u);
        if (probe) probe(snap, t, u);
    };
    record(0, 0.0, state);
    std::size_t snap = 1;
    for (std::size_t istep = 1; istep <= n_steps; ++istep) {
        try {
            state = stepper.step(state, istep);
        } catch (const SolverAbort&) {
            throw;
        } catch (const std::exception& e) {
            throw SolverAbort(std::string("aborted: ") + e.what(), istep);
        }
        if (istep % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || istep == n_steps)
            record(snap++, istep * cfg.dt, state);
    }
    return traj;
}

/// Max relative residual of the unforced balance d/dt(1/2 ||u||_2^2) =
/// -nu ||grad u||_2^2, centered differences at interior snapshots.
inline double energy_balance_check(const Trajectory& traj) {
    if (traj.times.size() < 3) throw std::invalid_argument("energy_balance_check: need >= 3 snapshots");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
        double dEdt = (traj.scalars[i + 1].energy - traj.scalars[i - 1].energy) /
                      (traj.times[i + 1] - traj.times[i - 1]);
        double diss = traj.scalars[i].dissipation;
        if (diss <= 0.0) continue;
        worst = std::max(worst, std::abs(dEdt + diss) / diss);
    }
    return worst;
}

}  // namespace scalesep
