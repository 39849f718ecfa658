#include "relscat/modified.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace relscat {

double norm_star(const GridCurve& f, double v_norm, double x_norm, double r) {
    const TimeGrid& g = f.grid();
    const int N = g.size();
    const double vt = v_norm / (2.0 * std::sqrt(2.0)) - r;
    const double xs = x_norm / std::sqrt(2.0);
    double m = 0.0;
    for (int k = 0; k < N; ++k) {
        double t = g.t(k);
        double dv = norm(f.deriv(k));
        if (t < 0.0) {
            if (std::isfinite(t)) {
                double w = std::max(1.0, 1.0 - r + xs + vt * std::abs(t));
                m = std::max(m, w * dv);
                if (f.value_valid(k)) m = std::max(m, norm(f.value(k)));
            }
        } else {
            m = std::max(m, dv);
        }
    }
    return m;
}

namespace {

double norm_star_diff(const GridCurve& a, const GridCurve& b, double v_norm,
                      double x_norm, double r) {
    const TimeGrid& g = a.grid();
    const int N = g.size();
    const double vt = v_norm / (2.0 * std::sqrt(2.0)) - r;
    const double xs = x_norm / std::sqrt(2.0);
    double m = 0.0;
    for (int k = 0; k < N; ++k) {
        double t = g.t(k);
        double dv = norm(a.deriv(k) - b.deriv(k));
        if (t < 0.0) {
            if (std::isfinite(t)) {
                double w = std::max(1.0, 1.0 - r + xs + vt * std::abs(t));
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

ModifiedSolution solve_modified(const FieldModel& model, const Vec& v_minus,
                                const Vec& x_minus, const ModifiedOptions& opt) {
    const int n = model.dim();
    const double c = model.light_speed();
    const double vn = norm(v_minus);
    const double xn = norm(x_minus);
    if (std::abs(dot(v_minus, x_minus)) > 1e-12 * std::max(1.0, vn * xn))
        throw NonPerpendicular("solve_modified: v_- . x_- != 0");
    if (vn == 0.0 || vn >= c)
        throw BelowThreshold("solve_modified: speed must lie in (0, c)");

    auto admissible_at = [&](double rr) {
        BoundContext bc = BoundContext::from_model(model, vn, xn, rr);
        if (!strict_ok_modified(bc)) return false;
        try {
            return vn > rho0_tilde(n, c, model.alpha(), bc.beta_max(), xn, rr);
        } catch (const Error&) {
            return true;  // no representable root: conditions alone decide
        }
    };
    double r = opt.r > 0.0 ? opt.r : std::min(0.45, default_radius(vn));
    if (opt.r <= 0.0 && opt.mode == Mode::strict && !admissible_at(r)) {
        // the plain default radius can sit outside the admissible region
        // even when admissible radii exist
        r = best_radius_modified(model, vn, xn);
    }
    if (!(r > 0.0 && r < std::min(0.5, vn / std::pow(2.0, 1.5))))
        throw ConditionViolated("solve_modified: r outside (0, min(1/2, |v|/2^{3/2}))");

    BoundContext bctx = BoundContext::from_model(model, vn, xn, r);
    bool strict_ok = vn > mu_l_sigma(model, xn) && admissible_at(r);
    if (!strict_ok && opt.mode == Mode::strict) {
        if (vn <= mu_l_sigma(model, xn))
            throw BelowThreshold("solve_modified: |v_-| <= mu^l_{|x_-|}");
        throw ConditionViolated("solve_modified: |v_-| <= rho~_0 in strict mode");
    }

    auto grid = opt.grid ? opt.grid : TimeGrid::shared_default();
    const double alpha = model.alpha();
    const int N = grid->size();
    const double panel_tol = opt.quad_tol / 40.0;

    FreeOptions fopt;
    fopt.tol = std::min(opt.picard_tol, 1e-10) * 0.5;
    fopt.quad_tol = opt.quad_tol * 0.1;
    fopt.mode = opt.mode;
    fopt.grid = grid;
    FreeContext fctx{v_minus, xn, 0.0};
    auto z_minus = std::make_shared<FreeTrajectory>(
        solve_free(model, v_minus, x_minus, Direction::past, fopt, &fctx));

    const Vec P = g_inv(v_minus, c);

    auto phi_l = [&](double tau) {
        return model.force_long(z_minus->pos(tau), z_minus->vel(tau));
    };
    GridCurve Jl = build_cumulative(grid, phi_l, n, alpha, CumulFrom::left, panel_tol);

    GridCurve y(grid, n, alpha);
    y.set_tail_exponents(alpha + 1.0, alpha);
    y.rebuild_values(0, Vec::zero(n), true, false);
    if (opt.warm && opt.warm->grid_ptr() == grid && !opt.warm->empty()) y = *opt.warm;

    GridCurve J;
    std::deque<double> ratios;
    double prev_diff = -1.0, last_diff = 0.0;
    SolveDiag diag;

    for (int it = 1; it <= opt.max_iter; ++it) {
        auto phi = [&](double tau) {
            Vec pos = z_minus->pos(tau) + y.value_at(tau);
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
                throw NoConvergence("solve_modified: non-finite iterate");
        next.set_derivs(std::move(nd));
        next.rebuild_values(0, Vec::zero(n), true, false);

        double diff = norm_star_diff(next, y, vn, xn, r);
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
            throw NoConvergence("solve_modified: Picard iteration did not converge");
    }
    diag.residual = last_diff;
    diag.contraction =
        ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    diag.empirical = !strict_ok;
    if (!strict_ok && diag.contraction >= 0.9)
        throw NoConvergence("solve_modified: empirical contraction factor too large");

    {
        auto phi = [&](double tau) {
            Vec pos = z_minus->pos(tau) + y.value_at(tau);
            Vec vel = z_minus->vel(tau) + y.deriv_at(tau);
            return model.force(pos, vel);
        };
        J = build_cumulative(grid, phi, n, alpha, CumulFrom::left, panel_tol);
    }

    ModifiedSolution s;
    s.z_minus = z_minus;
    s.J_total = J.value(N - 1);
    s.norm_star_y = norm_star(y, vn, xn, r);
    if (strict_ok && s.norm_star_y > r * (1.0 + 1e-9))
        throw NoConvergence("solve_modified: fixed point escaped M_{r,v_-,x_-}");

    ModifiedDatum d;
    d.v_minus = v_minus;
    d.x_minus = x_minus;
    d.r = r;
    d.diag = diag;
    d.a_tilde = g_map(P + s.J_total, c);
    d.a_tilde_sc = d.a_tilde - v_minus;
    d.b_tilde = Vec::zero(n);
    d.b_tilde_sc = Vec::zero(n);
    d.W_tilde = Vec::zero(n);

    // R_x(t) = int_t^{+inf} F(x) from the cached cumulative
    GridCurve Rx(grid, n, alpha);
    {
        std::vector<Vec> rd(N, Vec::zero(n)), rv(N, Vec::zero(n));
        for (int k = 0; k < N; ++k) {
            rd[k] = -J.deriv(k);
            rv[k] = s.J_total - J.value(k);
        }
        Rx.set_derivs(std::move(rd));
        Rx.adopt_values(std::move(rv));
    }

    if (opt.with_b_tilde || opt.with_W_tilde) {
        const Vec pa = g_inv(d.a_tilde, c);
        // admissibility reference for z_+(a~, x_- + q, .): same |v|, same x_-
        FreeContext pctx{v_minus * (norm(d.a_tilde) / vn), xn, 0.0};

        if (forward_condition_modified(bctx) > 1.0 && opt.mode == Mode::strict)
            throw ConditionViolated("solve_modified: condition for b~ fails in strict mode");

        Vec q = Vec::zero(n);
        GridCurve Rq, DRq;
        std::shared_ptr<FreeTrajectory> zp;
        const GridCurve* zp_warm = nullptr;
        GridCurve warm_store;

        auto eval_G = [&](const Vec& qq) {
            pctx.q_norm = norm(qq);
            FreeOptions po = fopt;
            po.warm = zp_warm;
            zp = std::make_shared<FreeTrajectory>(
                solve_free(model, d.a_tilde, x_minus + qq, Direction::future, po, &pctx));
            warm_store = zp->dev;
            zp_warm = &warm_store;
            auto phi_zp = [&](double tau) {
                return model.force_long(zp->pos(tau), zp->vel(tau));
            };
            Rq = build_cumulative(grid, phi_zp, n, alpha, CumulFrom::right, panel_tol);
            // int_t^inf [F(x) - F^l(z_+)]: the difference decays one power
            // faster, so its own tail model stays accurate
            auto phi_diff = [&](double tau) {
                Vec pos = z_minus->pos(tau) + y.value_at(tau);
                Vec vel = z_minus->vel(tau) + y.deriv_at(tau);
                return model.force(pos, vel) - model.force_long(zp->pos(tau), zp->vel(tau));
            };
            DRq = build_cumulative(grid, phi_diff, n, alpha + 1.0, CumulFrom::right,
                                   panel_tol);
            AdaptOptions aopt;
            aopt.abs_tol = std::max(0.5 * opt.quad_tol, 3e-14);
            aopt.throw_on_fail = false;  // difference-of-g noise floor
            // h(v_-, x_-, q, 0) = -int_0^inf [g(pa - R_x) - g(pa - R_q)] dsigma
            QuadResult h0 = integrate_to_pinf(
                [&](double sg) {
                    Vec base = pa - Rq.value_at(sg);
                    return g_map(base - DRq.value_at(sg), c) - g_map(base, c);
                },
                0.0, n, aopt);
            if (h0.err > 1e-9 * std::max(1.0, c))
                throw QuadratureFailure("solve_modified: h(0) integral error above 1e-9");
            return y.value_at(0.0) + h0.value;  // A(y)(0) - h(...,0)
        };

        // q = 0 stage: its z_+(a~, x_-, .) pieces are exactly what W~ needs
        Vec g0 = eval_G(Vec::zero(n));
        if (opt.with_W_tilde)
            d.W_tilde = g_map(P + Jl.value_at(0.0) + Rq.value_at(0.0), c) - v_minus;

        if (opt.with_b_tilde) {
            SolveDiag gd;
            std::deque<double> gratios;
            double pdiff = norm(g0 - q);
            q = g0;
            gd.iterations = 1;
            gd.residual = pdiff;
            for (int it = 2; it <= opt.max_g_iter && pdiff > opt.picard_tol; ++it) {
                Vec gq = eval_G(q);
                double diff = norm(gq - q);
                if (pdiff > 1e-15 && diff > 1e-15) {
                    gratios.push_back(diff / pdiff);
                    if (gratios.size() > 5) gratios.pop_front();
                }
                q = gq;
                pdiff = diff;
                gd.iterations = it;
                gd.residual = diff;
                if (it == opt.max_g_iter && diff > opt.picard_tol)
                    throw NoConvergence("solve_modified: b~ iteration did not converge");
            }
            gd.contraction = gratios.empty()
                                 ? 0.0
                                 : *std::max_element(gratios.begin(), gratios.end());
            gd.empirical = diag.empirical;
            if (gd.contraction >= 0.98)
                throw NoConvergence("solve_modified: b~ iteration is not contracting");
            if (norm(q) > 0.5 * (1.0 + 1e-9) && opt.mode == Mode::strict)
                throw NoConvergence("solve_modified: b~ escaped the ball of radius 1/2");
            d.g_diag = gd;
            d.b_tilde_sc = q;
            d.b_tilde = x_minus + q;

            // forward deviation y_+ = h(v_-, x_-, b~_sc, .), anchored at +inf;
            // Rq and DRq correspond to the final q
            GridCurve yp(grid, n, alpha);
            std::vector<Vec> yd(N, Vec::zero(n));
            for (int k = 0; k < N; ++k) {
                Vec base = pa - Rq.value(k);
                yd[k] = g_map(base - DRq.value(k), c) - g_map(base, c);
            }
            yp.set_derivs(std::move(yd));
            yp.set_tail_exponents(alpha, alpha + 1.0);
            yp.rebuild_values(N - 1, Vec::zero(n), false, true);
            s.y_plus = std::move(yp);
            s.z_plus = zp;
        }
    }

    s.datum = d;
    s.y_minus = std::move(y);
    s.J = std::move(J);
    s.J_l = std::move(Jl);
    return s;
}

Vec modified_G_at(const FieldModel& model, const ModifiedSolution& s, const Vec& q,
                  double quad_tol) {
    const int n = model.dim();
    const double c = model.light_speed();
    const double alpha = model.alpha();
    auto grid = s.y_minus.grid_ptr();
    const Vec& a = s.datum.a_tilde;
    const Vec pa = g_inv(a, c);
    double vn = norm(s.datum.v_minus);
    FreeContext pctx{s.datum.v_minus * (norm(a) / vn), norm(s.datum.x_minus), norm(q)};

    FreeOptions fo;
    fo.tol = 1e-11;
    fo.quad_tol = quad_tol * 0.1;
    fo.mode = Mode::empirical;
    fo.grid = grid;
    FreeTrajectory zp =
        solve_free(model, a, s.datum.x_minus + q, Direction::future, fo, &pctx);

    const double panel_tol = quad_tol / 40.0;
    auto phi_zp = [&](double tau) { return model.force_long(zp.pos(tau), zp.vel(tau)); };
    GridCurve Rq = build_cumulative(grid, phi_zp, n, alpha, CumulFrom::right, panel_tol);
    auto phi_diff = [&](double tau) {
        Vec pos = s.z_minus->pos(tau) + s.y_minus.value_at(tau);
        Vec vel = s.z_minus->vel(tau) + s.y_minus.deriv_at(tau);
        return model.force(pos, vel) - model.force_long(zp.pos(tau), zp.vel(tau));
    };
    GridCurve DRq =
        build_cumulative(grid, phi_diff, n, alpha + 1.0, CumulFrom::right, panel_tol);

    AdaptOptions aopt;
    aopt.abs_tol = std::max(0.5 * quad_tol, 3e-14);
    aopt.throw_on_fail = false;
    QuadResult h0 = integrate_to_pinf(
        [&](double sg) {
            Vec base = pa - Rq.value_at(sg);
            return g_map(base - DRq.value_at(sg), c) - g_map(base, c);
        },
        0.0, n, aopt);
    return s.y_minus.value_at(0.0) + h0.value;
}

Vec modified_pos(const ModifiedSolution& s, double t) {
    return s.z_minus->pos(t) + s.y_minus.value_at(t);
}

Vec modified_vel(const ModifiedSolution& s, double t) {
    return s.z_minus->vel(t) + s.y_minus.deriv_at(t);
}

}  // namespace relscat
