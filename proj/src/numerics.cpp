#include "lobexec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lobexec/errors.hpp"

namespace lobexec {

namespace {

double simpson(double fa, double fm, double fb, double len) {
    return len / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& fn, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth, int max_depth) {
    if (depth > max_depth) {
        throw QuadratureFailure("adaptive quadrature depth limit reached on [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_step(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& fn, double t0, double t1,
                          double abs_tol, int max_depth) {
    if (t0 == t1) return 0.0;
    double sign = 1.0;
    if (t1 < t0) {
        std::swap(t0, t1);
        sign = -1.0;
    }
    const double m = 0.5 * (t0 + t1);
    const double fa = fn(t0);
    const double fm = fn(m);
    const double fb = fn(t1);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
        throw QuadratureFailure("integrand is not finite on [" + std::to_string(t0) + ", " +
                                std::to_string(t1) + "]");
    }
    const double whole = simpson(fa, fm, fb, t1 - t0);
    return sign * adaptive_step(fn, t0, t1, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

double integrate(const std::function<double(double)>& fn, double t0, double t1, double tol) {
    if (t0 == t1) return 0.0;
    // Coarse composite-Simpson pass fixes the magnitude for the mixed tolerance.
    double coarse = 0.0;
    const int n = 16;
    const double dt = (t1 - t0) / n;
    for (int i = 0; i < n; ++i) {
        const double a = t0 + i * dt;
        coarse += simpson(fn(a), fn(a + 0.5 * dt), fn(a + dt), dt);
    }
    const double abs_tol = tol * (1.0 + std::abs(coarse));
    return integrate_adaptive(fn, t0, t1, abs_tol);
}

double find_root_bracketed(const std::function<double(double)>& fn, double lo, double hi,
                           double x_tol, double f_tol, double f_scale) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw RootBracketFailure("no sign change on [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 220 && (hi - lo) > x_tol * (1.0 + std::abs(mid)); ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // Newton polish with a secant-estimated slope; keep iterates inside the bracket.
    double x = 0.5 * (lo + hi);
    double fx = fn(x);
    for (int it = 0; it < 12; ++it) {
        if (f_tol > 0.0 && std::abs(fx) <= f_tol * f_scale) break;
        const double h = std::max(1e-9 * (1.0 + std::abs(x)), 0.25 * (hi - lo));
        const double slope = (fn(x + h) - fn(x - h)) / (2.0 * h);
        if (slope == 0.0 || !std::isfinite(slope)) break;
        const double step = fx / slope;
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double fxn = fn(xn);
        if (std::abs(fxn) >= std::abs(fx)) break;
        if ((fxn > 0.0) == (flo > 0.0)) {
            lo = xn;
        } else {
            hi = xn;
        }
        x = xn;
        fx = fxn;
    }
    return x;
}

double find_root_monotone(const std::function<double(double)>& fn, const RootOptions& opts) {
    double w = std::abs(opts.bracket_seed) > 0.0 ? std::abs(opts.bracket_seed) : 1.0;
    double lo = -w;
    double hi = w;
    double flo = fn(lo);
    double fhi = fn(hi);
    int doublings = 0;
    while ((flo > 0.0) == (fhi > 0.0) && flo != 0.0 && fhi != 0.0) {
        if (++doublings > opts.max_bracket_doublings) {
            throw RootBracketFailure("expanding bracket found no sign change up to half-width " +
                                     std::to_string(w));
        }
        w *= 2.0;
        lo = -w;
        hi = w;
        flo = fn(lo);
        fhi = fn(hi);
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    return find_root_bracketed(fn, lo, hi, opts.x_tol, opts.f_tol, opts.f_scale);
}

double central_difference(const std::function<double(double)>& fn, double x, double h) {
    return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        acc += 0.5 * (y[i - 1] + y[i]) * (t[i] - t[i - 1]);
    }
    return acc;
}

double piecewise_linear_mass(const std::vector<double>& t, const std::vector<double>& y,
                             double lo, double hi) {
    if (t.empty() || lo >= hi) return 0.0;
    lo = std::max(lo, t.front());
    hi = std::min(hi, t.back());
    if (lo >= hi) return 0.0;
    auto value_at = [&](double s) {
        auto it = std::upper_bound(t.begin(), t.end(), s);
        if (it == t.begin()) return y.front();
        if (it == t.end()) return y.back();
        const std::size_t k = static_cast<std::size_t>(it - t.begin());
        const double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
        return y[k - 1] + w * (y[k] - y[k - 1]);
    };
    double acc = 0.0;
    double a = lo;
    for (std::size_t k = 1; k < t.size() && a < hi; ++k) {
        if (t[k] <= a) continue;
        const double b = std::min(hi, t[k]);
        acc += 0.5 * (value_at(a) + value_at(b)) * (b - a);
        a = b;
    }
    return acc;
}

}  // namespace lobexec
