#include "relscat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace relscat {

double norm_M(const GridCurve& f, double v_norm, double r) {
    const TimeGrid& g = f.grid();
    const int N = g.size();
    const double vt = v_norm / (2.0 * std::sqrt(2.0)) - r;
    double m = 0.0;
    for (int k = 0; k < N; ++k) {
        double t = g.t(k);
        double dv = norm(f.deriv(k));
        if (t < 0.0) {
            if (std::isfinite(t)) {
                double w = std::max(1.0, 1.0 - r + vt * std::abs(t));
                m = std::max(m, w * dv);
                if (f.value_valid(k)) m = std::max(m, norm(f.value(k)));
            }
            // weight * |f'| -> 0 at t = -inf for integrable decay, |f| -> 0
        } else {
            m = std::max(m, dv);
        }
    }
    return m;
}

namespace {

double perp_residual(const Vec& v, const Vec& x) {
    return std::abs(dot(v, x)) / std::max(1.0, norm(v) * norm(x));
}

// sup over nodes of the M-norm of the difference of two iterates
double norm_M_diff(const GridCurve& a, const GridCurve& b, double v_norm, double r) {
    const TimeGrid& g = a.grid();
    const int N = g.size();
    const double vt = v_norm / (2.0 * std::sqrt(2.0)) - r;
    double m = 0.0;
    for (int k = 0; k < N; ++k) {
        double t = g.t(k);
        double dv = norm(a.deriv(k) - b.deriv(k));
        if (t < 0.0) {
            if (std::isfinite(t)) {
                double w = std::max(1.0, 1.0 - r + vt * std::abs(t));
                m = std::max(m, w * dv);
                if (a.value_valid(k) && b.value_valid(k))
                    m = std::max(m, norm(a.value(k) - b.value(k)));
            }
        } else {
            m = std::max(m, dv);
        }
    }
    return m;
}

}  // namespace

DeflectionSolution solve_deflection(const FieldModel& model, const Vec& v_minus,
                                    const Vec& x_minus, const SolveOptions& opt) {
    const int n = model.dim();
    const double c = model.light_speed();
    const double vn = norm(v_minus);
    if (perp_residual(v_minus, x_minus) > 1e-12)
        throw NonPerpendicular("solve_deflection: v_- . x_- != 0");
    if (vn == 0.0 || vn >= c)
        throw BelowThreshold("solve_deflection: speed must lie in (0, c)");

    double r = opt.r > 0.0 ? opt.r : default_radius(vn);
    if (opt.r <= 0.0 && opt.mode == Mode::strict &&
        !strict_ok_standard(BoundContext::from_model(model, vn, norm(x_minus), r))) {
        // the plain default can sit outside the admissible region even when
        // admissible radii exist; search before giving up
        r = best_radius_standard(model, vn, norm(x_minus));
    }
    if (!(r > 0.0 && r < std::min(1.0, vn / std::pow(2.0, 1.5))))
        throw ConditionViolated("solve_deflection: r outside (0, min(1, |v|/2^{3/2}))");

    BoundContext ctx = BoundContext::from_model(model, vn, norm(x_minus), r);
    bool strict_ok = vn > mu_l(model) && strict_ok_standard(ctx);
    if (!strict_ok && opt.mode == Mode::strict) {
        if (vn <= mu_l(model))
            throw BelowThreshold("solve_deflection: |v_-| <= mu^l");
        throw ConditionViolated("solve_deflection: contraction conditions fail in strict mode");
    }

    auto grid = opt.grid ? opt.grid : TimeGrid::shared_default();
    const double alpha = model.alpha();

    std::shared_ptr<const FreeTrajectory> z_minus;
    if (opt.z_minus_cache && opt.z_minus_cache->dev.grid_ptr() == grid &&
        norm(opt.z_minus_cache->w - v_minus) == 0.0) {
        z_minus = opt.z_minus_cache;
    } else {
        FreeOptions fopt;
        fopt.tol = std::min(opt.picard_tol, 1e-10) * 0.5;
        fopt.quad_tol = opt.quad_tol * 0.1;
        fopt.mode = opt.mode;
        fopt.grid = grid;
        z_minus = std::make_shared<const FreeTrajectory>(
            solve_free(model, v_minus, Vec::zero(n), Direction::past, fopt));
    }

    const Vec P = g_inv(v_minus, c);
    const double panel_tol = opt.quad_tol / 40.0;

    // int_{-inf}^t F^l(z_-) dtau does not depend on the iterate
    GridCurve Jl;
    if (model.long_range_zero()) {
        Jl = GridCurve(grid, n, alpha);
        Jl.rebuild_values(0, Vec::zero(n), true, true);
    } else if (opt.Jl_cache && opt.Jl_cache->grid_ptr() == grid) {
        Jl = *opt.Jl_cache;
    } else {
        auto phi_l = [&](double tau) {
            return model.force_long(z_minus->pos(tau), z_minus->vel(tau));
        };
        Jl = build_cumulative(grid, phi_l, n, alpha, CumulFrom::left, panel_tol);
    }

    const int N = grid->size();
    GridCurve y(grid, n, alpha);
    y.set_tail_exponents(alpha + 1.0, alpha);
    y.rebuild_values(0, Vec::zero(n), true, false);
    if (opt.warm && opt.warm->grid_ptr() == grid && !opt.warm->empty()) y = *opt.warm;

    GridCurve J;
    std::deque<double> ratios;
    double prev_diff = -1.0;
    SolveDiag diag;
    double last_diff = 0.0;

    for (int it = 1; it <= opt.max_iter; ++it) {
        auto phi = [&](double tau) {
            Vec pos = z_minus->pos(tau) + x_minus + y.value_at(tau);
            Vec vel = z_minus->vel(tau) + y.deriv_at(tau);
            return model.force(pos, vel);
        };
        J = build_cumulative(grid, phi, n, alpha, CumulFrom::left, panel_tol);

        GridCurve next(grid, n, alpha);
        next.set_tail_exponents(alpha + 1.0, alpha);
        std::vector<Vec> nd(N, Vec::zero(n));
        for (int k = 0; k < N; ++k)
            nd[k] = g_map(P + J.value(k), c) - g_map(P + Jl.value(k), c);
        for (const Vec& q : nd)
            if (!q.all_finite())
                throw NoConvergence("solve_deflection: non-finite iterate");
        next.set_derivs(std::move(nd));
        next.rebuild_values(0, Vec::zero(n), true, false);

        double diff = norm_M_diff(next, y, vn, r);
        y = std::move(next);
        last_diff = diff;
        diag.iterations = it;
        if (prev_diff > 0.0 && diff > 1e-15) {
            ratios.push_back(diff / prev_diff);
            if (ratios.size() > 5) ratios.pop_front();
        }
        prev_diff = diff;
        if (diff <= opt.picard_tol) break;
        if (it == opt.max_iter)
            throw NoConvergence("solve_deflection: Picard iteration did not converge");
    }

    diag.residual = last_diff;
    diag.contraction =
        ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    diag.empirical = !strict_ok;
    if (!strict_ok && diag.contraction >= 0.9)
        throw NoConvergence("solve_deflection: empirical contraction factor too large");

    if (opt.refresh_J) {  // refresh the cached cumulative along the converged iterate
        auto phi = [&](double tau) {
            Vec pos = z_minus->pos(tau) + x_minus + y.value_at(tau);
            Vec vel = z_minus->vel(tau) + y.deriv_at(tau);
            return model.force(pos, vel);
        };
        J = build_cumulative(grid, phi, n, alpha, CumulFrom::left, panel_tol);
    }

    DeflectionSolution sol;
    sol.norm_M = norm_M(y, vn, r);
    if (strict_ok && sol.norm_M > r * (1.0 + 1e-9))
        throw NoConvergence("solve_deflection: fixed point escaped M_{r,v_-}");
    sol.y = std::move(y);
    sol.residual_M = last_diff;
    sol.diag = diag;
    sol.r = r;
    sol.v_minus = v_minus;
    sol.x_minus = x_minus;
    sol.z_minus = z_minus;
    sol.J = std::move(J);
    sol.J_total = sol.J.value(N - 1);
    return sol;
}

Vec compute_W(const FieldModel& model, const Vec& v, const Vec& x, const Vec& a,
              const FreeTrajectory& z_minus, const FreeTrajectory& z_plus,
              double quad_tol) {
    const int n = model.dim();
    const double c = model.light_speed();
    const double alpha = model.alpha();
    auto grid = z_minus.dev.empty() ? TimeGrid::shared_default() : z_minus.dev.grid_ptr();
    const double panel_tol = quad_tol / 40.0;

    // The shifted-minus-plain force difference decays one power faster than
    // either term; integrating it directly keeps the far tails accurate
    // relative to the difference instead of the much larger common part.
    auto cm_plain = [&](double tau) {
        return model.force_long(z_minus.pos(tau), z_minus.vel(tau));
    };
    auto cm_diff = [&](double tau) {
        Vec pos = z_minus.pos(tau);
        Vec vel = z_minus.vel(tau);
        return model.force_long(pos + x, vel) - model.force_long(pos, vel);
    };
    GridCurve C2 = build_cumulative(grid, cm_plain, n, alpha, CumulFrom::left, panel_tol);
    GridCurve DC = build_cumulative(grid, cm_diff, n, alpha + 1.0, CumulFrom::left, panel_tol);

    auto cp_plain = [&](double tau) {
        return model.force_long(z_plus.pos(tau), z_plus.vel(tau));
    };
    auto cp_diff = [&](double tau) {
        Vec pos = z_plus.pos(tau);
        Vec vel = z_plus.vel(tau);
        return model.force_long(pos + x, vel) - model.force_long(pos, vel);
    };
    GridCurve D2 = build_cumulative(grid, cp_plain, n, alpha, CumulFrom::right, panel_tol);
    GridCurve DD = build_cumulative(grid, cp_diff, n, alpha + 1.0, CumulFrom::right, panel_tol);

    const Vec pm = g_inv(v, c);
    const Vec pp = g_inv(a, c);

    AdaptOptions aopt;
    aopt.abs_tol = std::max(0.5 * quad_tol, 3e-14);
    aopt.throw_on_fail = false;  // the integrand noise floor can sit above tol
    QuadResult past = integrate_from_minf(
        [&](double sg) {
            Vec base = pm + C2.value_at(sg);
            return g_map(base + DC.value_at(sg), c) - g_map(base, c);
        },
        0.0, n, aopt);
    QuadResult futu = integrate_to_pinf(
        [&](double sg) {
            Vec base = pp - D2.value_at(sg);
            return g_map(base - DD.value_at(sg), c) - g_map(base, c);
        },
        0.0, n, aopt);
    if (past.err + futu.err > 1e-9 * std::max(1.0, c))
        throw QuadratureFailure("compute_W: outer integral error above 1e-9");
    return past.value + futu.value;
}

ScatteringSolution solve_scattering(const FieldModel& model, const Vec& v_minus,
                                    const Vec& x_minus, const SolveOptions& opt) {
    const int n = model.dim();
    const double c = model.light_speed();
    ScatteringSolution s;
    s.defl = solve_deflection(model, v_minus, x_minus, opt);
    auto grid = s.defl.y.grid_ptr();
    const int N = grid->size();
    const double alpha = model.alpha();

    ScatteringDatum d;
    d.v_minus = v_minus;
    d.x_minus = x_minus;
    d.r = s.defl.r;
    d.diag = s.defl.diag;
    d.a = g_map(g_inv(v_minus, c) + s.defl.J_total, c);
    d.a_sc = d.a - v_minus;
    d.W = Vec::zero(n);
    d.b = Vec::zero(n);
    d.b_sc = Vec::zero(n);

    if (opt.with_b || opt.with_W) {
        FreeOptions fopt;
        fopt.tol = std::min(opt.picard_tol, 1e-10) * 0.5;
        fopt.quad_tol = opt.quad_tol * 0.1;
        fopt.mode = opt.mode;
        fopt.grid = grid;
        s.z_plus = std::make_shared<FreeTrajectory>(
            solve_free(model, d.a, Vec::zero(n), Direction::future, fopt));
    }

    if (opt.with_b) {
        // R_x(t) = int_t^{+inf} F(x) = J_total - J(t), reusing the cached
        // cumulative from the deflection solve
        GridCurve Rx(grid, n, alpha);
        {
            std::vector<Vec> rd(N, Vec::zero(n)), rv(N, Vec::zero(n));
            for (int k = 0; k < N; ++k) {
                rd[k] = -s.defl.J.deriv(k);
                rv[k] = s.defl.J_total - s.defl.J.value(k);
            }
            Rx.set_derivs(std::move(rd));
            Rx.adopt_values(std::move(rv));
        }
        s.R_x = std::move(Rx);

        auto phi_zp = [&](double tau) {
            return model.force_long(s.z_plus->pos(tau), s.z_plus->vel(tau));
        };
        s.R_z = build_cumulative(grid, phi_zp, n, alpha, CumulFrom::right,
                                 opt.quad_tol / 40.0);
        // forward-tail difference int_t^inf [F(x) - F^l(z_+)]: decays one
        // power faster than either term and keeps y_+ accurate out far
        auto phi_diff = [&](double tau) {
            Vec pos = s.defl.z_minus->pos(tau) + x_minus + s.defl.y.value_at(tau);
            Vec vel = s.defl.z_minus->vel(tau) + s.defl.y.deriv_at(tau);
            return model.force(pos, vel) -
                   model.force_long(s.z_plus->pos(tau), s.z_plus->vel(tau));
        };
        GridCurve DR = build_cumulative(grid, phi_diff, n, alpha + 1.0,
                                        CumulFrom::right, opt.quad_tol / 40.0);

        const Vec pa = g_inv(d.a, c);
        GridCurve yp(grid, n, alpha);
        std::vector<Vec> yd(N, Vec::zero(n));
        for (int k = 0; k < N; ++k) {
            Vec base = pa - s.R_z.value(k);
            yd[k] = g_map(base - DR.value(k), c) - g_map(base, c);
        }
        yp.set_derivs(std::move(yd));
        yp.set_tail_exponents(alpha, alpha + 1.0);
        yp.rebuild_values(N - 1, Vec::zero(n), false, true);
        s.y_plus = std::move(yp);

        // b = x_- + A(y_-)(0) - y_+(0)
        d.b = x_minus + s.defl.y.value_at(0.0) - s.y_plus.value_at(0.0);
        d.b_sc = d.b - x_minus;
    }

    if (opt.with_W)
        d.W = compute_W(model, v_minus, x_minus, d.a, *s.defl.z_minus, *s.z_plus,
                        opt.quad_tol);

    s.datum = d;
    return s;
}

Vec solution_pos(const ScatteringSolution& s, double t) {
    return s.defl.z_minus->pos(t) + s.datum.x_minus + s.defl.y.value_at(t);
}

Vec solution_vel(const ScatteringSolution& s, double t) {
    return s.defl.z_minus->vel(t) + s.defl.y.deriv_at(t);
}

}  // namespace relscat
