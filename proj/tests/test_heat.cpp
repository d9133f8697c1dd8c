#include <catch2/catch_amalgamated.hpp>

#include "scalesep/duhamel.hpp"
#include "scalesep/heat.hpp"
#include "scalesep/phys_sparseness.hpp"
#include "scalesep/synth.hpp"
#include "scalesep/tsai.hpp"

using namespace scalesep;

namespace {

double rel_l2_diff(const VectorField& a, const VectorField& b) {
    VectorField d = subtract(as_physical(a), as_physical(b));
    double denom = lp_norm(a, 2.0).value;
    return denom > 0.0 ? lp_norm(d, 2.0).value / denom : lp_norm(d, 2.0).value;
}

}  // namespace

TEST_CASE("heat_evolve") {
    GridSpec g(2, 64);
    SECTION("Laplacian eigenfunction decays by e^{-t}") {
        VectorField f = to_spectral(synth::pure_mode(g, {1, 0, 0}, 0, 1.0, -M_PI / 2));
        VectorField e = heat_evolve(f, 0.5, 1.0);
        VectorField expect = scaled(f, std::exp(-0.5));
        CHECK(rel_l2_diff(e, expect) <= 1e-12);
        CHECK(std::exp(-0.5) == Catch::Approx(0.60653).epsilon(1e-4));
    }
    SECTION("t = 0 is the identity") {
        VectorField f = synth::random_band_limited(g, 4, 0.0, 20.0);
        CHECK(rel_l2_diff(heat_evolve(f, 0.0), f) == 0.0);
    }
    SECTION("semigroup composition is exact") {
        VectorField f = synth::random_band_limited(g, 8, 0.0, 20.0);
        VectorField two = heat_evolve(heat_evolve(f, 0.03), 0.07);
        VectorField one = heat_evolve(f, 0.10);
        double worst = 0.0;
        for (int c = 0; c < f.ncomp; ++c)
            for (std::size_t i = 0; i < g.point_count(); ++i)
                worst = std::max(worst, std::abs(two.spec[c][i] - one.spec[c][i]));
        CHECK(worst <= 1e-12);
    }
    SECTION("contraction in L^2 and L^inf") {
        for (int trial = 0; trial < 10; ++trial) {
            VectorField f = synth::random_band_limited(g, 300 + trial, 0.0, 20.0);
            VectorField e = heat_evolve(f, 0.02);
            for (double p : {2.0, p_inf})
                CHECK(lp_norm(e, p).value <= lp_norm(f, p).value * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("gaussian_convolve_oracle") {
    GridSpec g(2, 64);
    SECTION("single-cell impulse spreads into the sampled heat kernel") {
        const double t = 0.05;
        VectorField f = VectorField::zeros(g, Representation::physical);
        GridIndexer ix(g);
        std::size_t i0 = ix.linear({32, 32, 0});
        f.phys[0][i0] = 1.0;
        VectorField e = gaussian_convolve_oracle(f, t);
        const double mass = g.cell_volume();
        double worst = 0.0;
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            auto d = ix.decode(i);
            double r2 = 0.0;
            for (int a = 0; a < 2; ++a) {
                double dx = g.coord(d[a]) - g.coord(32);
                dx -= g.period * std::round(dx / g.period);
                r2 += dx * dx;
            }
            double expect = mass / (4.0 * M_PI * t) * std::exp(-r2 / (4.0 * t));
            worst = std::max(worst, std::abs(e.phys[0][i] - expect));
        }
        CHECK(worst <= 1e-8 * (mass / (4.0 * M_PI * t)));
    }
    SECTION("constant fields are fixed points (unit kernel mass)") {
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[1]) v = 2.0;
        VectorField e = gaussian_convolve_oracle(f, 0.05);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.point_count(); ++i)
            worst = std::max(worst, std::abs(e.phys[1][i] - 2.0));
        CHECK(worst <= 1e-10);
    }
    SECTION("dual-path agreement on compact random bumps") {
        for (int trial = 0; trial < 5; ++trial) {
            VectorField f = synth::random_compact(g, 700 + trial, g.period / 8.0, 16.0);
            for (double t : {0.01, 0.05}) {
                VectorField a = gaussian_convolve_oracle(f, t);
                VectorField b = to_physical(heat_evolve(to_spectral(f), t, 1.0));
                CHECK(rel_l2_diff(a, b) <= 1e-8);
            }
        }
    }
    SECTION("excessive sqrt(t) is rejected with a tail estimate") {
        VectorField f = VectorField::zeros(g, Representation::physical);
        CHECK_THROWS_WITH(gaussian_convolve_oracle(f, std::pow(g.period / 8.0, 2)),
                          Catch::Matchers::ContainsSubstring("tail"));
    }
}

TEST_CASE("caloric_sparse_decay_verify") {
    SECTION("tight bump passes schedule and decay") {
        GridSpec g(2, 128);
        const double gamma = 0.2, t = 0.15, C0 = 4.0;
        auto sched = SparsityDecaySchedule::make(gamma, p_inf, 2, C0);
        double sigma = sched.ell_bar * std::sqrt(t) / 12.0;
        VectorField f = synth::gaussian_bump(g, {M_PI, M_PI, 0.0}, sigma, 1.0);
        auto v = caloric_sparse_decay_verify(f, gamma, t, p_inf, C0);
        REQUIRE(v.status == VerdictStatus::pass);
        CHECK(v.certificate.valid());
        CHECK(v.margin > 0.0);
    }
    SECTION("constant field is never applicable") {
        GridSpec g(2, 64);
        VectorField f = VectorField::zeros(g, Representation::physical);
        for (auto& v : f.phys[0]) v = 1.0;
        auto v = caloric_sparse_decay_verify(f, 0.2, 0.1, p_inf, 4.0);
        CHECK(v.status == VerdictStatus::not_applicable);
    }
    SECTION("small randomized multi-bump corpus: zero counterexamples") {
        GridSpec g(2, 128);
        const double gamma = 0.2, t = 0.15, C0 = 4.0;
        auto sched = SparsityDecaySchedule::make(gamma, p_inf, 2, C0);
        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> place(0.0, g.period), amp(0.5, 2.0);
        int applicable = 0;
        for (int trial = 0; trial < 10; ++trial) {
            VectorField f = VectorField::zeros(g, Representation::physical, 1);
            for (int b = 0; b < 3; ++b) {
                double sigma = sched.ell_bar * std::sqrt(t) / 14.0;
                VectorField bump = synth::gaussian_bump(g, {place(rng), place(rng), 0.0}, sigma, amp(rng));
                f = axpy(1.0, bump, f);
            }
            auto v = caloric_sparse_decay_verify(f, gamma, t, p_inf, C0);
            CHECK(v.status != VerdictStatus::fail);
            if (v.status == VerdictStatus::pass) ++applicable;
        }
        CHECK(applicable >= 5);
    }
}

TEST_CASE("duhamel_bilinear") {
    GridSpec g(2, 32);
    const double tau = 0.2;
    SECTION("zero inputs give zero") {
        std::vector<VectorField> z(5, VectorField::zeros(g, Representation::spectral));
        VectorField B = duhamel_bilinear(z, z, tau);
        CHECK(lp_norm(B, p_inf).value == 0.0);
    }
    SECTION("symmetric in its arguments to roundoff") {
        std::vector<VectorField> us, vs;
        for (int i = 0; i < 5; ++i) {
            us.push_back(synth::random_divfree(g, 40 + i, 0.0, 8.0));
            vs.push_back(synth::random_divfree(g, 80 + i, 0.0, 8.0));
        }
        VectorField a = duhamel_bilinear(us, vs, tau);
        VectorField b = duhamel_bilinear(vs, us, tau);
        CHECK(rel_l2_diff(a, b) <= 1e-13);
    }
    SECTION("fewer than 3 nodes rejected") {
        std::vector<VectorField> z(2, VectorField::zeros(g, Representation::spectral));
        CHECK_THROWS_AS(duhamel_bilinear(z, z, tau), std::invalid_argument);
    }
    SECTION("steady single-mode inputs match the closed form") {
        VectorField u = leray_project(to_spectral(synth::pure_mode(g, {0, 2, 0}, 0)));
        VectorField v = leray_project(to_spectral(synth::pure_mode(g, {3, 0, 0}, 1)));
        std::vector<VectorField> us(33, u), vs(33, v);
        VectorField B = duhamel_bilinear(us, vs, tau);

        // closed form: per mode, -1/2 (1 - e^{-|k|^2 tau}) / |k|^2 * [P div T]
        VectorField Ts = to_spectral(detail::sym_tensor(u, v));
        VectorField N = detail::projected_divergence(Ts);
        VectorField expect = N;
        GridIndexer ix(g);
        for (std::size_t i = 0; i < g.point_count(); ++i) {
            auto d = ix.decode(i);
            double k2 = 0.0;
            for (int a = 0; a < 2; ++a) {
                double k = g.wavenumber(d[a]);
                k2 += k * k;
            }
            double factor = k2 > 0.0 ? (1.0 - std::exp(-k2 * tau)) / k2 : tau;
            for (int c = 0; c < 2; ++c) expect.spec[c][i] = -0.5 * factor * N.spec[c][i];
        }
        // trapezoid on 33 nodes: error O(ds^2) ~ (ds^2/12) k^4 tau
        CHECK(rel_l2_diff(B, expect) <= 2e-3);

        // Richardson-extrapolated refinement locks the quadrature order
        std::vector<VectorField> us2(65, u), vs2(65, v);
        std::vector<VectorField> us4(129, u), vs4(129, v);
        VectorField B2 = duhamel_bilinear(us2, vs2, tau);
        VectorField B4 = duhamel_bilinear(us4, vs4, tau);
        VectorField rich = axpy(-1.0 / 3.0, B2, scaled(B4, 4.0 / 3.0));
        CHECK(rel_l2_diff(rich, expect) <= 2e-9);
        // and the refinement is second order: halving ds gains ~4x
        CHECK(rel_l2_diff(B2, expect) <= 0.3 * rel_l2_diff(B, expect));
    }
}

TEST_CASE("bilinear_estimate_check") {
    GridSpec g(2, 32);
    SECTION("zero fields flagged vacuous") {
        std::vector<VectorField> z(5, VectorField::zeros(g, Representation::spectral));
        auto rep = bilinear_estimate_check(z, z, 0.2, 2.0, 2.0);
        CHECK(rep.vacuous);
    }
    SECTION("p = q: kernel exponent 1/2, ratio bounded") {
        std::vector<VectorField> us, vs;
        for (int i = 0; i < 9; ++i) {
            us.push_back(synth::random_divfree(g, 140 + i, 0.0, 8.0));
            vs.push_back(synth::random_divfree(g, 180 + i, 0.0, 8.0));
        }
        auto rep = bilinear_estimate_check(us, vs, 0.2, 2.0, 2.0);
        CHECK(rep.exponent == Catch::Approx(0.5));
        CHECK(!rep.vacuous);
        CHECK(rep.ratio > 0.0);
        CHECK(rep.ratio < 5.0);
    }
    SECTION("3D, p = inf, q = 6: exponent 3/4") {
        GridSpec g3(3, 16);
        std::vector<VectorField> us, vs;
        for (int i = 0; i < 5; ++i) {
            us.push_back(synth::random_divfree(g3, 240 + i, 0.0, 4.0));
            vs.push_back(synth::random_divfree(g3, 280 + i, 0.0, 4.0));
        }
        auto rep = bilinear_estimate_check(us, vs, 0.2, p_inf, 6.0);
        CHECK(rep.exponent == Catch::Approx(0.75));
        CHECK(rep.ratio < 10.0);
    }
    SECTION("divergent exponent configuration rejected") {
        GridSpec g3(3, 16);
        std::vector<VectorField> z(3, VectorField::zeros(g3, Representation::spectral));
        CHECK_THROWS_AS(bilinear_estimate_check(z, z, 0.2, 2.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("tsai_phi") {
    SECTION("a = b = 4 at the origin: finite, positive") {
        auto rep = tsai_phi(0.0, 4.0, 4.0);
        CHECK(rep.value > 0.0);
        CHECK(std::isfinite(rep.value));
        CHECK(rep.ratio > 0.0);
    }
    SECTION("symmetry phi(x, a, b) = phi(x, b, a)") {
        auto ab = tsai_phi(2.0, 2.5, 3.5);
        auto ba = tsai_phi(2.0, 3.5, 2.5);
        CHECK(ab.value == Catch::Approx(ba.value).epsilon(1e-4));
    }
    SECTION("a = 3 activates the log factor; ratio stays bounded") {
        double prev_ratio = 0.0;
        for (double x : {0.0, 2.0, 8.0, 32.0}) {
            auto rep = tsai_phi(x, 3.0, 4.0);
            CHECK(std::isfinite(rep.ratio));
            CHECK(rep.ratio > 0.0);
            CHECK(rep.ratio < 50.0);
            prev_ratio = std::max(prev_ratio, rep.ratio);
        }
        CHECK(prev_ratio > 0.01);
    }
    SECTION("phi decreases in |x|") {
        double prev = 1e300;
        for (double x : {0.0, 2.0, 8.0, 32.0}) {
            auto rep = tsai_phi(x, 4.0, 4.0);
            CHECK(rep.value < prev);
            prev = rep.value;
        }
    }
    SECTION("parameters outside the admissible region rejected") {
        CHECK_THROWS_AS(tsai_phi(0.0, 1.0, 1.0), std::invalid_argument);  // a + b <= 3
        CHECK_THROWS_AS(tsai_phi(0.0, 5.5, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(tsai_phi(-1.0, 4.0, 4.0), std::invalid_argument);
    }
}
