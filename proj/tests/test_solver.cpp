#include <catch2/catch_amalgamated.hpp>

#include "scalesep/heat.hpp"
#include "scalesep/solver.hpp"
#include "scalesep/synth.hpp"

using namespace scalesep;

namespace {

double rel_l2_diff(const VectorField& a, const VectorField& b) {
    VectorField d = subtract(as_physical(a), as_physical(b));
    double denom = lp_norm(a, 2.0).value;
    return denom > 0.0 ? lp_norm(d, 2.0).value / denom : lp_norm(d, 2.0).value;
}

}  // namespace

TEST_CASE("step") {
    GridSpec g(2, 64, 2.0 * M_PI, 0.1);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    SECTION("zero stays zero") {
        VectorField z = VectorField::zeros(g, Representation::spectral);
        CHECK(lp_norm(step(z, cfg), p_inf).value == 0.0);
    }
    SECTION("nonlinearity disabled: one step is exact heat evolution, bitwise") {
        cfg.nonlinear = false;
        VectorField f = leray_project(synth::random_divfree(g, 50, 0.0, 20.0));
        VectorField s = step(f, cfg);
        VectorField e = heat_evolve(f, cfg.dt, g.viscosity);
        for (int c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < g.point_count(); ++i)
                CHECK(s.spec[c][i] == e.spec[c][i]);
    }
    SECTION("Taylor-Green: the nonlinear term is a pure gradient, one step is exact") {
        VectorField u0 = to_spectral(synth::taylor_green(g));
        VectorField s = step(u0, cfg);
        VectorField expect = heat_evolve(u0, cfg.dt, g.viscosity);
        CHECK(rel_l2_diff(s, expect) <= 1e-12);
        CHECK(divergence_residual(s) <= 1e-10);
    }
    SECTION("runtime CFL violation aborts with the step index") {
        SolverConfig bad = cfg;
        bad.cfl_max = 1e-9;
        VectorField u0 = to_spectral(synth::taylor_green(g));
        try {
            Stepper(g, bad).step(u0, 7);
            FAIL("expected SolverAbort");
        } catch (const SolverAbort& e) {
            CHECK(e.step_index == 7);
            CHECK(std::string(e.what()).find("CFL") != std::string::npos);
        }
    }
    SECTION("viscous stability bound enforced at construction") {
        SolverConfig bad = cfg;
        bad.dt = 1.0;
        CHECK_THROWS_AS(bad.validate(g, 0.0), std::invalid_argument);
    }
    SECTION("viscosity must be positive at the type level") {
        CHECK_THROWS_AS(GridSpec(2, 64, 2.0 * M_PI, 0.0), std::invalid_argument);
    }
}

TEST_CASE("run") {
    SECTION("zero data, zero trajectory") {
        GridSpec g(2, 32, 2.0 * M_PI, 0.1);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.01;
        Trajectory traj = run(VectorField::zeros(g, Representation::spectral), cfg);
        for (const auto& s : traj.scalars) CHECK(s.energy == 0.0);
    }
    SECTION("Taylor-Green energy follows pi^2 e^{-4 nu t} to 1e-6") {
        GridSpec g(2, 64, 2.0 * M_PI, 0.1);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        cfg.snapshot_stride = 100;
        cfg.store_snapshots = false;
        Trajectory traj = run(to_spectral(synth::taylor_green(g)), cfg);
        REQUIRE(traj.times.size() == 11);
        CHECK(traj.scalars[0].energy == Catch::Approx(M_PI * M_PI).epsilon(1e-10));
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            double expect = M_PI * M_PI * std::exp(-4.0 * 0.1 * traj.times[i]);
            CHECK(std::abs(traj.scalars[i].energy - expect) <= 1e-6 * expect);
        }
    }
    SECTION("divergence-free certificate preserved along the trajectory") {
        GridSpec g(2, 64, 2.0 * M_PI, 0.05);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.02;
        cfg.snapshot_stride = 5;
        VectorField u0 = scaled(synth::random_divfree(g, 60, 0.0, 8.0), 0.2);
        Trajectory traj = run(u0, cfg);
        for (const auto& s : traj.snapshots) CHECK(divergence_residual(s) <= 1e-10);
    }
    SECTION("non-divergence-free data is projected with a recorded warning") {
        GridSpec g(2, 32, 2.0 * M_PI, 0.1);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.002;
        VectorField raw = synth::random_band_limited(g, 61, 0.0, 6.0);
        Trajectory traj = run(raw, cfg);
        CHECK(traj.projected_initial_data);
        CHECK(divergence_residual(traj.snapshots.front()) <= 1e-10);
    }
}

TEST_CASE("energy_balance_check") {
    SECTION("heat-only single mode: residual at the FD truncation floor") {
        GridSpec g(2, 64, 2.0 * M_PI, 0.1);
        SolverConfig cfg;
        cfg.dt = 5e-4;
        cfg.t_end = 0.05;
        cfg.nonlinear = false;
        cfg.store_snapshots = false;
        VectorField u0 = to_spectral(synth::pure_mode(g, {0, 1, 0}, 0));
        Trajectory traj = run(u0, cfg);
        CHECK(energy_balance_check(traj) <= 1e-8);
    }
    SECTION("Taylor-Green: residual well inside 1e-6") {
        GridSpec g(2, 64, 2.0 * M_PI, 0.1);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.05;
        cfg.store_snapshots = false;
        Trajectory traj = run(to_spectral(synth::taylor_green(g)), cfg);
        CHECK(energy_balance_check(traj) <= 1e-6);
    }
    SECTION("random data: residual <= 1e-4 and shrinks under dt refinement") {
        GridSpec g(2, 64, 2.0 * M_PI, 0.1);
        VectorField u0 = scaled(synth::random_divfree(g, 62, 0.0, 4.0), 0.3);
        auto residual_at = [&](double dt) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_end = 0.04;
            cfg.store_snapshots = false;
            return energy_balance_check(run(u0, cfg));
        };
        double r1 = residual_at(2e-3);
        double r2 = residual_at(1e-3);
        CHECK(r1 <= 1e-4);
        CHECK(r2 <= r1 / 2.5);  // centered-difference floor is O(dt^2)
    }
    SECTION("needs at least 3 snapshots") {
        Trajectory traj;
        traj.times = {0.0, 1.0};
        traj.scalars.resize(2);
        CHECK_THROWS_AS(energy_balance_check(traj), std::invalid_argument);
    }
}

TEST_CASE("nonlinear time accuracy: dt halving gains ~16x against a fine reference") {
    // perturbed Taylor-Green so the nonlinear residual path is genuinely
    // active (pure Taylor-Green is integrated exactly: its nonlinear term is
    // a gradient, annihilated by the projection, so no order is measurable
    // there)
    GridSpec g(2, 32, 2.0 * M_PI, 0.02);
    VectorField u0 = axpy(1.0, synth::random_divfree(g, 63, 0.0, 8.0),
                          to_spectral(synth::taylor_green(g)));
    u0 = leray_project(u0);
    auto solve_at = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.5;
        cfg.snapshot_stride = static_cast<int>(std::llround(0.5 / dt));
        cfg.store_snapshots = true;
        return run(u0, cfg).snapshots.back();
    };
    VectorField ref = solve_at(6.25e-4);
    double e1 = rel_l2_diff(solve_at(2e-2), ref);
    double e2 = rel_l2_diff(solve_at(1e-2), ref);
    CHECK(e1 > 1e-8);        // genuinely in the resolved-error regime
    CHECK(e1 / e2 >= 8.0);   // measured ~16x
}
