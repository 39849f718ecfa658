#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "relscat/errors.hpp"
#include "relscat/vec.hpp"

namespace relscat {

// Adaptive Gauss-Kronrod 7/15 quadrature for vector-valued integrands.
// Integrands are callables double -> Vec so that all components of a force
// share one evaluation.

namespace gk {
// Kronrod abscissae (positive half) and weights; Gauss-7 weights embedded at
// the odd Kronrod points.
inline constexpr double xk[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
inline constexpr double wk[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weight for xk[0], xk[2], xk[4], xk[6]
inline constexpr double wg[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};
}  // namespace gk

struct QuadResult {
    Vec value;
    double err = 0.0;     // estimated absolute error (max norm)
    double resabs = 0.0;  // integral of |f|, the roundoff reference scale
    long evals = 0;
};

template <class F>
QuadResult gk15(F&& f, double a, double b, int dim) {
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    Vec k(dim), g(dim);
    double kabs = 0.0;
    Vec f0 = f(mid);
    axpy(k, gk::wk[0], f0);
    axpy(g, gk::wg[0], f0);
    kabs += gk::wk[0] * norm_inf(f0);
    for (int i = 1; i < 8; ++i) {
        Vec fp = f(mid + hl * gk::xk[i]);
        Vec fm = f(mid - hl * gk::xk[i]);
        kabs += gk::wk[i] * (norm_inf(fp) + norm_inf(fm));
        Vec fi = fp + fm;
        axpy(k, gk::wk[i], fi);
        if ((i & 1) == 0) axpy(g, gk::wg[i / 2], fi);
    }
    QuadResult r;
    r.value = k * hl;
    r.resabs = kabs * std::abs(hl);
    r.err = norm_inf((k - g) * hl);
    // (200 d)^{3/2} sharpening as in QUADPACK, floored by the raw difference
    double d = r.err;
    if (d > 0.0) {
        double sharp = std::pow(200.0 * d, 1.5);
        r.err = std::max(std::min(d * 200.0, sharp), d);
    }
    r.evals = 15;
    return r;
}

struct AdaptOptions {
    double abs_tol = 1e-12;
    int max_depth = 45;
    long max_evals = 4'000'000;
    bool throw_on_fail = true;
};

namespace detail {
template <class F>
void adapt_rec(F& f, double a, double b, int dim, double tol, int depth,
               const AdaptOptions& opt, QuadResult& acc, bool& failed,
               const QuadResult* pre) {
    QuadResult r;
    if (pre) {
        r = *pre;
    } else {
        r = gk15(f, a, b, dim);
        acc.evals += r.evals;
    }
    // roundoff floor: no subdivision can beat 50 eps of the |f| mass
    double floor_err = 50.0 * 2.220446049250313e-16 * r.resabs;
    if (r.err <= std::max(tol, floor_err) || depth >= opt.max_depth ||
        acc.evals > opt.max_evals) {
        if (r.err > std::max(tol, floor_err)) failed = true;
        acc.value += r.value;
        acc.err += r.err;
        acc.resabs += r.resabs;
        return;
    }
    double mid = 0.5 * (a + b);
    QuadResult r1 = gk15(f, a, mid, dim);
    QuadResult r2 = gk15(f, mid, b, dim);
    acc.evals += r1.evals + r2.evals;
    if (depth >= 8 && r1.err + r2.err >= 0.98 * r.err) {
        // refinement stalls: the error estimate is roundoff-dominated and
        // splitting further cannot reduce it. Shallow levels are exempt, an
        // unresolved peak can also inflate the child estimates once.
        acc.value += r1.value + r2.value;
        acc.err += std::min(r.err, r1.err + r2.err);
        acc.resabs += r1.resabs + r2.resabs;
        return;
    }
    adapt_rec(f, a, mid, dim, 0.5 * tol, depth + 1, opt, acc, failed, &r1);
    adapt_rec(f, mid, b, dim, 0.5 * tol, depth + 1, opt, acc, failed, &r2);
}
}  // namespace detail

template <class F>
QuadResult integrate(F&& f, double a, double b, int dim,
                     const AdaptOptions& opt = {}) {
    QuadResult acc;
    acc.value = Vec::zero(dim);
    if (a == b) return acc;
    bool failed = false;
    detail::adapt_rec(f, a, b, dim, opt.abs_tol, 0, opt, acc, failed, nullptr);
    double allowance =
        std::max(8.0 * opt.abs_tol, 100.0 * 2.220446049250313e-16 * acc.resabs);
    if (failed && opt.throw_on_fail && acc.err > allowance) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "adaptive quadrature did not reach tolerance: err=%.3e "
                      "tol=%.3e evals=%ld on [%g, %g]",
                      acc.err, opt.abs_tol, acc.evals, a, b);
        throw QuadratureFailure(msg);
    }
    return acc;
}

// \int_a^{+inf} f, substitution tau = a + u/(1-u), u in [0,1).
template <class F>
QuadResult integrate_to_pinf(F&& f, double a, int dim,
                             const AdaptOptions& opt = {}) {
    auto sub = [&, dim](double u) {
        double om = 1.0 - u;
        // beyond the representable far field every integrand here is zero
        if (om < 1e-100) return Vec::zero(dim);
        return f(a + u / om) * (1.0 / (om * om));
    };
    return integrate(sub, 0.0, 1.0, dim, opt);
}

// \int_{-inf}^b f, substitution tau = b - u/(1-u).
template <class F>
QuadResult integrate_from_minf(F&& f, double b, int dim,
                               const AdaptOptions& opt = {}) {
    auto sub = [&, dim](double u) {
        double om = 1.0 - u;
        if (om < 1e-100) return Vec::zero(dim);
        return f(b - u / om) * (1.0 / (om * om));
    };
    return integrate(sub, 0.0, 1.0, dim, opt);
}

// \int_{-inf}^{+inf} f, split at a center of interest.
template <class F>
QuadResult integrate_real_line(F&& f, int dim, const AdaptOptions& opt = {},
                               double center = 0.0) {
    AdaptOptions half = opt;
    half.abs_tol = 0.5 * opt.abs_tol;
    QuadResult lo = integrate_from_minf(f, center, dim, half);
    QuadResult hi = integrate_to_pinf(f, center, dim, half);
    lo.value += hi.value;
    lo.err += hi.err;
    lo.evals += hi.evals;
    return lo;
}

// Scalar conveniences.
template <class F>
double integrate_scalar(F&& f, double a, double b, const AdaptOptions& opt = {}) {
    auto wrap = [&](double t) { return Vec{f(t)}; };
    return integrate(wrap, a, b, 1, opt).value[0];
}

template <class F>
double integrate_scalar_real_line(F&& f, const AdaptOptions& opt = {},
                                  double center = 0.0) {
    auto wrap = [&](double t) { return Vec{f(t)}; };
    return integrate_real_line(wrap, 1, opt, center).value[0];
}

}  // namespace relscat
