#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace scalesep {

namespace detail {

/// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                               double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

/// Tolerance relative to a 17-point bootstrap estimate of the panel mass.
inline double integrate_rel(const std::function<double(double)>& f, double a, double b, double rel_tol,
                            int depth = 20) {
    if (!(b > a)) return 0.0;
    double coarse = 0.0;
    const int nb = 16;
    for (int i = 0; i <= nb; ++i) {
        double x = a + (b - a) * i / nb;
        double w = (i == 0 || i == nb) ? 0.5 : 1.0;
        coarse += w * std::abs(f(x));
    }
    coarse *= (b - a) / nb;
    double tol = std::max(rel_tol * coarse, 1e-14);
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// A(lo, hi; c, a) = integral_lo^hi rho (rho + c)^{-a} drho, closed form
/// (the angular part of the spatial convolution).
inline double radial_inner(double lo, double hi, double c, double a) {
    auto F = [&](double rho) {
        double s = rho + c;
        if (std::abs(a - 1.0) < 1e-9) return s - c * std::log(s);
        if (std::abs(a - 2.0) < 1e-9) return std::log(s) + c / s;
        return std::pow(s, 2.0 - a) / (2.0 - a) - c * std::pow(s, 1.0 - a) / (1.0 - a);
    };
    return F(hi) - F(lo);
}

}  // namespace detail

struct TsaiReport {
    double value = 0.0;
    double bound = 0.0;   // R^{-a} + R^{-b} + R^{3-a-b} [1 + (1_{a=3}+1_{b=3}) ln R]
    double ratio = 0.0;
};

/// The space-time convolution
///   phi(x, a, b) = int_0^1 int_{R^3} (|x-y| + sqrt(1-t))^{-a} (|y| + sqrt t)^{-b} dy dt.
/// The angular integral is closed-form; the radial integral is adaptive with
/// panel splits at the kernel scales and at r = |x|, and the far field is
/// folded in exactly through the inversion r = R_t / tau^q (the integrand
/// decays like r^{2-a-b}, so q is chosen to flatten the image integrand).
/// The time integral uses power substitutions at both endpoints strong
/// enough to absorb the t^{(3-b)/2} and (1-t)^{(3-a)/2} edge behavior
/// across the whole admissible (a, b) box.
inline TsaiReport tsai_phi(double x_mag, double a, double b) {
    if (!(a > 0.0 && a < 5.0 && b > 0.0 && b < 5.0 && a + b > 3.0))
        throw std::invalid_argument("tsai_phi: need a, b in (0,5) with a + b > 3");
    if (x_mag < 0.0) throw std::invalid_argument("tsai_phi: |x| >= 0");

    const double X = x_mag;

    auto spatial = [&](double st, double c) {
        auto radial = [&](double r) {
            if (r <= 0.0) return 0.0;
            double g = std::pow(r + st, -b);
            if (X > 1e-12)
                return r * g * detail::radial_inner(std::abs(X - r), X + r, c, a) / X;
            return 2.0 * r * r * g * std::pow(r + c, -a);
        };
        const double R_t = std::max(4.0, 2.0 * (X + st + c));
        std::vector<double> pts{0.0, R_t};
        auto push = [&](double v) {
            if (v > 0.0 && v < R_t) pts.push_back(v);
        };
        push(st);
        push(st + c);
        push(X);
        push(2.0 * X + 1.0);
        std::sort(pts.begin(), pts.end());
        double val = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            val += detail::integrate_rel(radial, pts[i], pts[i + 1], 1e-7);
        // far field, inverted exactly onto tau in (0,1]
        const double q = std::min(20.0, std::ceil(2.0 / (a + b - 3.0)));
        auto far = [&](double tau) {
            if (tau <= 0.0) return 0.0;
            double r = R_t / std::pow(tau, q);
            return q * R_t * radial(r) * std::pow(tau, -q - 1.0);
        };
        val += detail::integrate_rel(far, 0.0, 1.0, 1e-7);
        return 2.0 * M_PI * val;
    };

    // time integral: halves [0,1/2] and [1/2,1] with t = u^m (resp.
    // 1 - t = v^m); m flattens the edge exponent of the half in question
    auto half = [&](double edge_param, bool lower_half) {
        double m = std::max(2.0, 4.0 / (5.0 - edge_param));
        double u_hi = std::pow(0.5, 1.0 / m);
        auto f = [&](double u) {
            if (u <= 0.0) return 0.0;
            double t = std::pow(u, m);
            double st = std::sqrt(t), c = std::sqrt(1.0 - t);
            double jac = m * std::pow(u, m - 1.0);
            return jac * (lower_half ? spatial(st, c) : spatial(c, st));
        };
        return detail::integrate_rel(f, 0.0, u_hi, 1e-5, 14);
    };
    double value = half(b, true) + half(a, false);

    TsaiReport rep;
    rep.value = value;
    const double R = x_mag + 2.0;
    double logfac = 1.0;
    if (std::abs(a - 3.0) < 1e-12) logfac += std::log(R);
    if (std::abs(b - 3.0) < 1e-12) logfac += std::log(R);
    rep.bound = std::pow(R, -a) + std::pow(R, -b) + std::pow(R, 3.0 - a - b) * logfac;
    rep.ratio = rep.value / rep.bound;
    return rep;
}

}  // namespace scalesep
