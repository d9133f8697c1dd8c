#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace scalesep {

namespace detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double sse = std::numeric_limits<double>::infinity();
    std::size_t n = 0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                             std::size_t hi) {
    LineFit f;
    f.n = hi - lo;
    if (f.n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double n = static_cast<double>(f.n);
    double den = n * sxx - sx * sx;
    if (den == 0.0) return f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double sse = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        double e = y[i] - (f.slope * x[i] + f.intercept);
        sse += e * e;
    }
    f.sse = sse;
    f.r2 = ss_tot > 0.0 ? 1.0 - sse / ss_tot : 1.0;
    return f;
}

}  // namespace detail

struct GrowthFit {
    // early window: log-linear fit ln E = ln E0 + L t
    double lyapunov_L = 0.0;
    double lyapunov_r2 = 0.0;
    // late window: linear fit E = a + r t
    double linear_rate = 0.0;
    double linear_r2 = 0.0;
    // late window log-log fit: E ~ t^alpha
    double power_exponent = 0.0;
    double power_r2 = 0.0;
    std::size_t breakpoint = 0;   // first index of the late window
    std::size_t n_samples = 0;
    bool degenerate = false;      // nonpositive values blocked the log fits
};

/// Two-regime fit of an error-energy series: exponential early, linear late,
/// with the breakpoint chosen by segmented regression (total SSE of the
/// early log-linear fit plus the late linear fit, each window at least
/// min_window samples). The power exponent is a log-log fit on the late
/// window. Noisy series come back with low R^2, never silently.
inline GrowthFit fit_growth_regimes(const std::vector<double>& times, const std::vector<double>& values,
                                    std::size_t min_window = 16) {
    if (times.size() != values.size()) throw std::invalid_argument("fit_growth_regimes: size mismatch");
    const std::size_t n = times.size();
    if (n < min_window) throw std::invalid_argument("fit_growth_regimes: need >= min_window samples");

    GrowthFit out;
    out.n_samples = n;

    std::vector<double> logv(n);
    bool log_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] > 0.0)
            logv[i] = std::log(values[i]);
        else {
            logv[i] = 0.0;
            log_ok = false;
        }
    }
    out.degenerate = !log_ok;

    std::size_t best_k = n >= 2 * min_window ? min_window : n;
    if (log_ok && n >= 2 * min_window) {
        double best_sse = std::numeric_limits<double>::infinity();
        // normalize the two objectives so neither scale dominates
        auto whole_log = detail::least_squares(times, logv, 0, n);
        auto whole_lin = detail::least_squares(times, values, 0, n);
        double s_log = std::max(whole_log.sse, 1e-300);
        double s_lin = std::max(whole_lin.sse, 1e-300);
        for (std::size_t k = min_window; k + min_window <= n; ++k) {
            auto e = detail::least_squares(times, logv, 0, k);
            auto l = detail::least_squares(times, values, k, n);
            double sse = e.sse / s_log + l.sse / s_lin;
            if (sse < best_sse) {
                best_sse = sse;
                best_k = k;
            }
        }
    }
    out.breakpoint = best_k;

    if (log_ok) {
        auto e = detail::least_squares(times, logv, 0, best_k);
        out.lyapunov_L = e.slope;
        out.lyapunov_r2 = e.r2;
    }
    std::size_t late_lo = best_k < n ? best_k : 0;
    auto l = detail::least_squares(times, values, late_lo, n);
    out.linear_rate = l.slope;
    out.linear_r2 = l.r2;

    // power fit over the late window on (ln t, ln E), skipping t <= 0
    std::vector<double> lt, lv;
    for (std::size_t i = late_lo; i < n; ++i)
        if (times[i] > 0.0 && values[i] > 0.0) {
            lt.push_back(std::log(times[i]));
            lv.push_back(std::log(values[i]));
        }
    if (lt.size() >= 2) {
        auto pfit = detail::least_squares(lt, lv, 0, lt.size());
        out.power_exponent = pfit.slope;
        out.power_r2 = pfit.r2;
    }
    return out;
}

}  // namespace scalesep
