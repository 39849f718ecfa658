#include "relscat/free_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace relscat {

double mu_l(const FieldModel& model) {
    double b = std::max(model.beta1_l(), model.beta2_l());
    double n = model.dim();
    return mu_threshold(256.0 * n * n * b / model.alpha(), model.light_speed());
}

double mu_l_sigma(const FieldModel& model, double sigma) {
    if (sigma < 0.0) throw NegativeInput("mu_l_sigma: sigma must be nonnegative");
    double b = std::max(model.beta1_l(), model.beta2_l());
    double n = model.dim();
    double arg = 256.0 * n * n * b / model.alpha() *
                 std::pow(1.0 + sigma / std::sqrt(2.0), -model.alpha());
    return mu_threshold(arg, model.light_speed());
}

double free_admissibility_lhs(const FieldModel& model, double v_norm,
                              double x_norm, double q_norm) {
    double c = model.light_speed();
    if (v_norm <= 0.0 || v_norm >= c) return std::numeric_limits<double>::infinity();
    double base = 1.0 + x_norm / std::sqrt(2.0) - q_norm;
    if (base <= 0.0) return std::numeric_limits<double>::infinity();
    double n = model.dim();
    double b = std::max(model.beta1_l(), model.beta2_l());
    double gam = std::sqrt(1.0 - v_norm * v_norm / (c * c));
    return 256.0 * n * n * b * gam /
           (model.alpha() * v_norm * v_norm * std::pow(base, model.alpha()));
}

double free_deflection_bound(const FieldModel& model, double v_norm,
                             double x_norm, double q_norm) {
    double c = model.light_speed();
    double base = 1.0 + x_norm / std::sqrt(2.0) - q_norm;
    double n = model.dim();
    double gam = std::sqrt(1.0 - v_norm * v_norm / (c * c));
    return std::pow(2.0, 4.5) * std::pow(n, 1.5) * model.beta1_l() * gam /
           (model.alpha() * v_norm * std::pow(base, model.alpha()));
}

FreeTrajectory solve_free(const FieldModel& model, const Vec& w, const Vec& anchor,
                          Direction dir, const FreeOptions& opt,
                          const FreeContext* ctx) {
    const int n = model.dim();
    const double c = model.light_speed();
    const double wn = norm(w);
    if (wn == 0.0) throw ConditionViolated("solve_free: zero asymptotic velocity");
    if (wn >= c) throw SpeedExceeded("solve_free: |w| must be below c");

    // admissibility reference (v, x, q); defaults to splitting the anchor
    // along / across w
    double v_norm, x_norm, q_norm;
    if (ctx) {
        v_norm = norm(ctx->v);
        x_norm = ctx->x_norm;
        q_norm = ctx->q_norm;
    } else {
        v_norm = wn;
        double along = dot(anchor, w) / wn;
        Vec perp = anchor - w * (along / wn);
        x_norm = norm(perp);
        q_norm = std::abs(along);
    }

    // marginal equality is treated as inadmissible in strict mode
    bool admissible =
        free_admissibility_lhs(model, v_norm, x_norm, q_norm) <= 1.0 - 1e-12;
    if (ctx) {
        double dv = norm(w - ctx->v);
        if (dv > v_norm / std::pow(2.0, 2.5) * (1.0 + 1e-12)) admissible = false;
    } else if (q_norm >= 1.0) {
        admissible = false;
    }
    if (!admissible && opt.mode == Mode::strict)
        throw ConditionViolated("solve_free: admissibility condition fails in strict mode");

    auto grid = opt.grid ? opt.grid : TimeGrid::shared_default();
    const double alpha = model.alpha();

    FreeTrajectory tr;
    tr.w = w;
    tr.anchor = anchor;
    tr.dir = dir;
    tr.dev = GridCurve(grid, n, alpha);
    tr.dev.set_tail_exponents(alpha, alpha);
    tr.dev.rebuild_values(grid->center(), Vec::zero(n), false, false);
    if (model.long_range_zero()) {
        // the free equation is trivial: z(t) = anchor + t w exactly
        tr.diag.iterations = 1;
        return tr;
    }
    if (opt.warm && opt.warm->grid_ptr() == grid && !opt.warm->empty()) tr.dev = *opt.warm;

    const Vec P = g_inv(w, c);
    const Vec gP = g_map(P, c);
    const double panel_tol = opt.quad_tol / 40.0;
    const int N = grid->size();

    std::deque<double> ratios;
    double prev_diff = -1.0;
    SolveDiag diag;

    for (int it = 1; it <= opt.max_iter; ++it) {
        auto phi = [&](double tau) {
            return model.force_long(tr.anchor + tr.w * tau + tr.dev.value_at(tau),
                                    tr.w + tr.dev.deriv_at(tau));
        };
        GridCurve cum = build_cumulative(grid,
                                         phi, n, alpha,
                                         dir == Direction::future ? CumulFrom::right
                                                                  : CumulFrom::left,
                                         panel_tol);
        GridCurve next(grid, n, alpha);
        next.set_tail_exponents(alpha, alpha);
        std::vector<Vec> nd(N, Vec::zero(n));
        for (int k = 0; k < N; ++k) {
            Vec arg = (dir == Direction::future) ? P - cum.value(k) : P + cum.value(k);
            nd[k] = g_map(arg, c) - gP;
        }
        for (const Vec& q : nd)
            if (!q.all_finite())
                throw NoConvergence("solve_free: non-finite iterate");
        next.set_derivs(std::move(nd));
        next.rebuild_values(grid->center(), Vec::zero(n), false, false);

        double diff = next.sup_deriv_diff(tr.dev);
        tr.dev = std::move(next);
        diag.iterations = it;
        diag.residual = diff;
        if (prev_diff > 0.0 && diff > 1e-14) {
            ratios.push_back(diff / prev_diff);
            if (ratios.size() > 5) ratios.pop_front();
        }
        prev_diff = diff;
        if (diff <= opt.tol) break;
        if (it == opt.max_iter)
            throw NoConvergence("solve_free: Picard iteration did not converge");
    }
    diag.contraction = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
    diag.empirical = !admissible;
    if (!admissible && diag.contraction >= 0.9)
        throw NoConvergence("solve_free: empirical contraction factor too large");
    tr.diag = diag;
    return tr;
}

}  // namespace relscat
