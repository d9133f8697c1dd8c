#include <catch2/catch_amalgamated.hpp>

#include "scalesep/lattice.hpp"
#include "scalesep/phys_sparseness.hpp"
#include "scalesep/synth.hpp"

using namespace scalesep;

TEST_CASE("lattice snapping") {
    GridSpec g(2, 64);
    SECTION("h snaps down to a torus-tiling multiple of the spacing") {
        CubeLattice lat = make_cube_lattice(g, 0.9 * M_PI);
        CHECK(lat.h == Catch::Approx(M_PI / 2.0));
        CHECK(lat.points_per_edge == 16);
        CHECK(lat.h_requested == Catch::Approx(0.9 * M_PI));
        CHECK(lat.cells_per_axis == 4);
    }
    SECTION("h below the grid spacing is rejected") {
        CHECK_THROWS_AS(make_cube_lattice(g, 0.5 * g.spacing()), std::invalid_argument);
    }
    SECTION("every grid point lands in exactly one cell") {
        CubeLattice lat = make_cube_lattice(g, M_PI / 4, true);
        std::vector<int> counts(lat.cell_count(), 0);
        GridIndexer ix(g);
        for (std::size_t i = 0; i < g.point_count(); ++i) ++counts[lat.cell_of_point(ix.decode(i))];
        for (int c : counts) CHECK(c == lat.points_per_edge * lat.points_per_edge);
    }
}

TEST_CASE("interpolant_jh") {
    GridSpec g(2, 64);
    SECTION("constants are preserved exactly") {
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[0]) v = -2.5;
        VectorField jf = interpolant_jh(f, M_PI / 2);
        for (std::size_t i = 0; i < g.point_count(); ++i) CHECK(jf.phys[0][i] == -2.5);
    }
    SECTION("sin x1 with aligned h = pi gives cell averages +-2/pi") {
        VectorField f = synth::pure_mode(g, {1, 0, 0}, 0, 1.0, -M_PI / 2);  // sin x1
        VectorField jf = interpolant_jh(f, make_cube_lattice(g, M_PI, /*origin_centered=*/false));
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            lo = std::min(lo, jf.phys[0][i]);
            hi = std::max(hi, jf.phys[0][i]);
        }
        CHECK(hi == Catch::Approx(2.0 / M_PI).epsilon(1e-3));
        CHECK(lo == Catch::Approx(-2.0 / M_PI).epsilon(1e-3));
    }
    SECTION("means are preserved") {
        VectorField f = as_physical(synth::random_band_limited(g, 12, 0.0, 20.0));
        VectorField jf = interpolant_jh(f, 3.0 * g.spacing());  // snaps to 2 h_grid
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            m0 += f.phys[0][i];
            m1 += jf.phys[0][i];
        }
        CHECK(m0 == Catch::Approx(m1).margin(1e-12 * g.point_count()));
    }
    SECTION("idempotent and an L^p contraction") {
        VectorField f = as_physical(synth::random_band_limited(g, 13, 0.0, 20.0));
        CubeLattice lat = make_cube_lattice(g, M_PI / 4);
        VectorField once = interpolant_jh(f, lat);
        VectorField twice = interpolant_jh(once, lat);
        double worst = 0.0;
        for (int c = 0; c < f.ncomp; ++c)
            for (std::size_t i = 0; i < g.point_count(); ++i)
                worst = std::max(worst, std::abs(once.phys[c][i] - twice.phys[c][i]));
        CHECK(worst <= 1e-14);
        for (double p : {1.0, 2.0, p_inf})
            CHECK(lp_norm(once, p).value <= lp_norm(f, p).value * (1.0 + 1e-12));
    }
}

TEST_CASE("interpolant_iht") {
    GridSpec g(2, 32);
    const double t = 0.03;
    SECTION("single occupied cell reproduces the t^{-d/2} cell integral") {
        CubeLattice lat = make_cube_lattice(g, 8.0 * g.spacing());
        VectorField f = VectorField::zeros(g, Representation::physical);
        GridIndexer ix(g);
        for (std::size_t i = 0; i < g.point_count(); ++i)
            if (lat.cell_of_point(ix.decode(i)) == 0) f.phys[0][i] = 1.0;
        VectorField If = interpolant_iht(f, lat, t);
        double cell_integral = std::pow(lat.h, 2);  // average 1 over one cell
        for (std::size_t i = 0; i < g.point_count(); ++i)
            if (lat.cell_of_point(ix.decode(i)) == 0)
                CHECK(If.phys[0][i] == Catch::Approx(cell_integral / t).epsilon(1e-8));
    }
    SECTION("constant field matches the brute-force double sum") {
        CubeLattice lat = make_cube_lattice(g, 4.0 * g.spacing());
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[0]) v = 1.7;
        for (auto& v : f.phys[1]) v = -0.4;
        VectorField If = interpolant_iht(f, lat, t);

        const int m = lat.cells_per_axis;
        const double L = g.period;
        auto weight = [&](int dj0, int dj1) {
            double acc = 0.0;
            for (int i0 = -1; i0 <= 1; ++i0)
                for (int i1 = -1; i1 <= 1; ++i1) {
                    double dx = dj0 * lat.h + i0 * L;
                    double dy = dj1 * lat.h + i1 * L;
                    acc += std::exp(-(dx * dx + dy * dy) / (4.0 * t));
                }
            return acc;
        };
        for (int c = 0; c < 2; ++c) {
            double cellint = f.phys[c][0] * lat.h * lat.h;
            double expect = 0.0;
            for (int j0 = 0; j0 < m; ++j0)
                for (int j1 = 0; j1 < m; ++j1) {
                    int d0 = j0 > m / 2 ? j0 - m : j0;
                    int d1 = j1 > m / 2 ? j1 - m : j1;
                    expect += weight(d0, d1) * cellint / t;
                }
            CHECK(If.phys[c][0] == Catch::Approx(expect).epsilon(1e-9));
        }
    }
    SECTION("envelope: ||I_{h,t} f||_p stays within a fixed multiple of ||J_h f||_p") {
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            VectorField f = as_physical(synth::random_band_limited(g, 400 + trial, 0.0, 8.0));
            for (double hfac : {2.0, 4.0}) {
                CubeLattice lat = make_cube_lattice(g, hfac * g.spacing());
                for (double tt : {lat.h * lat.h, 4.0 * lat.h * lat.h}) {
                    VectorField If = interpolant_iht(f, lat, tt);
                    VectorField Jf = interpolant_jh(f, lat);
                    for (double p : {2.0, p_inf}) {
                        double jn = lp_norm(Jf, p).value;
                        if (jn <= 0.0) continue;
                        worst = std::max(worst, lp_norm(If, p).value / jn);
                    }
                }
            }
        }
        CHECK(worst > 1.0);
        CHECK(worst < 60.0);  // (4 pi)^{d/2} ~ 12.6 in 2D plus sampling slack
    }
    SECTION("h below the grid spacing is rejected") {
        VectorField f = VectorField::zeros(g, Representation::physical);
        CHECK_THROWS_AS(interpolant_iht(f, 0.5 * g.spacing(), 0.1), std::invalid_argument);
    }
}

TEST_CASE("physical_sparseness") {
    SECTION("compactly supported blob: tiny density, tiny complement") {
        GridSpec g(2, 64);
        VectorField f = synth::compact_bump(g, {M_PI, M_PI, 0.0}, 0.3, 1.0);
        auto cert = physical_sparseness(f, p_inf, 0.1, 2.0, 0.2);
        CHECK(cert.complement_norm_ratio < 0.1);
        CHECK(cert.set_volume_fraction_max < 0.05);
        CHECK(cert.set_volume_fraction_max > 0.0);
        CHECK(cert.valid());
    }
    SECTION("constant field is never sparse") {
        GridSpec g(2, 32);
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[0]) v = 1.0;
        auto cert = physical_sparseness(f, p_inf, 0.5, 1.0, 0.9);
        CHECK(cert.set_volume_fraction_max == 1.0);
        CHECK(!cert.valid());
    }
    SECTION("zero field rejected") {
        GridSpec g(2, 32);
        VectorField f = VectorField::zeros(g, Representation::physical);
        CHECK_THROWS_AS(physical_sparseness(f, 2.0, 0.5, 1.0), std::invalid_argument);
    }
    SECTION("matches an exhaustive level-set scan") {
        GridSpec g(2, 32);
        VectorField f = synth::gaussian_bump(g, {2.0, 4.0, 0.0}, 0.5, 3.0);
        const double p = 2.0, beta = 0.3, ell = 1.2;
        auto cert = physical_sparseness(f, p, beta, ell, 1.0);

        // oracle: direct threshold scan plus direct ball loop
        auto mag = pointwise_magnitude(f);
        double fnorm = lp_norm(f, p).value;
        std::vector<double> sorted = mag;
        std::sort(sorted.begin(), sorted.end());
        double budget = std::pow(beta * fnorm, p) / g.cell_volume();
        double acc = 0.0, lambda = sorted.back();
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            double next = acc + sorted[i] * sorted[i];
            if (next >= budget) {
                lambda = sorted[i];
                break;
            }
            acc = next;
        }
        CHECK(cert.lambda_star == Catch::Approx(lambda));

        GridIndexer ix(g);
        const int n = g.n_per_axis;
        auto dist = [&](int a, int b) {
            double d = g.coord((a - b + n) % n);
            if (d >= g.period / 2) d -= g.period;
            return d;
        };
        double worst = 0.0;
        for (int c0 = 0; c0 < n; ++c0)
            for (int c1 = 0; c1 < n; ++c1) {
                std::size_t inside = 0, in_set = 0;
                for (int i0 = 0; i0 < n; ++i0)
                    for (int i1 = 0; i1 < n; ++i1) {
                        double dx = dist(i0, c0), dy = dist(i1, c1);
                        if (dx * dx + dy * dy <= ell * ell) {
                            ++inside;
                            if (mag[ix.linear({i0, i1, 0})] >= lambda) ++in_set;
                        }
                    }
                worst = std::max(worst, static_cast<double>(in_set) / inside);
            }
        CHECK(cert.set_volume_fraction_max == Catch::Approx(worst).margin(1e-12));
    }
}

TEST_CASE("poincare_check") {
    GridSpec g(2, 64);
    SECTION("constant field is vacuous") {
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[0]) v = 5.0;
        CHECK(poincare_check(f, M_PI / 4).vacuous);
    }
    SECTION("sin x1 under h-refinement stays below the cell constant") {
        VectorField f = synth::pure_mode(g, {1, 0, 0}, 0, 1.0, -M_PI / 2);
        double prev = 1e300;
        for (double h : {M_PI / 2, M_PI / 4, M_PI / 8}) {
            auto rep = poincare_check(f, h);
            REQUIRE(!rep.vacuous);
            CHECK(rep.ratio < 0.5);
            CHECK(rep.ratio < prev * 1.05);
            prev = rep.ratio;
        }
    }
    SECTION("oscillatory mode: ratio is the h-independent constant ~ 1/sqrt(12)") {
        VectorField f = synth::pure_mode(g, {2, 0, 0}, 0);
        auto rep = poincare_check(f, M_PI / 8);
        CHECK(rep.ratio > 0.2);
        CHECK(rep.ratio < 0.4);
    }
}

TEST_CASE("lemma_discrete_decay_verify") {
    GridSpec g(2, 64);
    SECTION("pure oscillation with wavelength dividing h: exact closed form") {
        // h = kappa gamma sqrt(t) = pi/2 holds 4 periods of the k=16 mode
        const double gamma = 0.4, kappa = 4.0;
        const double t = std::pow(M_PI / 2.0 / (kappa * gamma), 2);
        VectorField f = synth::pure_mode(g, {16, 0, 0}, 0);
        auto v = lemma_discrete_decay_verify(f, gamma, t, p_inf, kappa);
        REQUIRE(v.status == VerdictStatus::pass);
        CHECK(v.h == Catch::Approx(M_PI / 2.0));
        CHECK(v.jh_ratio <= 1e-12);
        CHECK(v.lhs == Catch::Approx(std::exp(-256.0 * t)).margin(1e-12));
        CHECK(v.gauss_tail_sum > 1.0);
    }
    SECTION("constant field: precondition unmet") {
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[0]) v = 1.0;
        auto v = lemma_discrete_decay_verify(f, 0.2, 0.25, p_inf, 4.0);
        CHECK(v.status == VerdictStatus::not_applicable);
    }
    SECTION("snapped h below the grid spacing is inconclusive") {
        VectorField f = synth::pure_mode(g, {16, 0, 0}, 0);
        auto v = lemma_discrete_decay_verify(f, 0.2, 1e-6, p_inf, 1.0);
        CHECK(v.status == VerdictStatus::inconclusive);
    }
    SECTION("randomized oscillatory corpus: zero counterexamples") {
        // modes on the 16 Z sublattice have exactly vanishing averages over
        // cells of edge 4 h_grid
        const double gamma = 0.2, kappa = 4.0;
        const double t = 0.25;
        int passes = 0;
        for (int trial = 0; trial < 20; ++trial) {
            VectorField base = synth::random_band_limited(GridSpec(2, 16), 600 + trial, 1.0, 2.0);
            VectorField f = VectorField::zeros(g, Representation::spectral, 2);
            GridIndexer gi(g), ci(base.grid);
            for (std::size_t i = 0; i < base.grid.point_count(); ++i) {
                auto d = ci.decode(i);
                std::array<int, 3> dst{0, 0, 0};
                bool ok = true;
                for (int a = 0; a < 2; ++a) {
                    int mode = base.grid.mode_index(d[a]) * 16;
                    if (mode < -32 || mode >= 32) ok = false;
                    dst[a] = mode >= 0 ? mode : g.n_per_axis + mode;
                }
                if (!ok) continue;
                for (int c = 0; c < 2; ++c) f.spec[c][gi.linear(dst)] = base.spec[c][i];
            }
            for (int c = 0; c < 2; ++c) f.spec[c][0] = {0.0, 0.0};
            if (lp_norm(f, 2.0).value <= 0.0) continue;
            auto v = lemma_discrete_decay_verify(f, gamma, t, 2.0, kappa);
            CHECK(v.status != VerdictStatus::fail);
            if (v.status == VerdictStatus::pass) ++passes;
        }
        CHECK(passes >= 15);
    }
}
