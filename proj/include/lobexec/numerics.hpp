#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace lobexec {

// Adaptive Simpson quadrature with absolute error target `abs_tol`.
// Throws QuadratureFailure when the refinement depth limit is reached.
double integrate_adaptive(const std::function<double(double)>& fn, double t0, double t1,
                          double abs_tol, int max_depth = 52);

// Quadrature with the mixed tolerance abs_err <= tol*(1+|result|).
// This is the default integrator behind every time integral in the model.
double integrate(const std::function<double(double)>& fn, double t0, double t1,
                 double tol = 1e-12);

struct RootOptions {
    double x_tol = 1e-13;       // interval tolerance, scaled by (1+|x|)
    double f_tol = 0.0;         // extra residual target, scaled by (1+|target scale|); 0 = off
    double f_scale = 1.0;       // scale used with f_tol
    double bracket_seed = 1.0;  // initial half-width of the expanding bracket
    int max_bracket_doublings = 200;
};

// Root of a monotone function (either direction): expanding bracket
// [-2^k, 2^k] until a sign change, bisection, then Newton/secant polish.
// Throws RootBracketFailure when no sign change is found.
double find_root_monotone(const std::function<double(double)>& fn, const RootOptions& opts = {});

// Root of fn on [lo, hi] where fn(lo) and fn(hi) already straddle zero.
double find_root_bracketed(const std::function<double(double)>& fn, double lo, double hi,
                           double x_tol = 1e-13, double f_tol = 0.0, double f_scale = 1.0);

double central_difference(const std::function<double(double)>& fn, double x, double h);

// Trapezoid rule over sample points (t strictly increasing).
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

// Integral of the piecewise-linear interpolant of (t, y) over [lo, hi],
// clamping to the sampled range. Exact for the interpolant.
double piecewise_linear_mass(const std::vector<double>& t, const std::vector<double>& y,
                             double lo, double hi);

// Deterministic PRNG (splitmix64) so test campaigns reproduce across platforms.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

}  // namespace lobexec
