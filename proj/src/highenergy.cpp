#include "relscat/highenergy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "relscat/richardson.hpp"

namespace relscat {

namespace {
double lorentz_h(double rho, double c) {
    return std::sqrt(std::max(0.0, 1.0 - rho * rho / (c * c)));
}
}  // namespace

RayExtraction extract_ray(const std::vector<double>& rhos,
                          const std::vector<Vec>& data, double c, int degree) {
    if (rhos.size() < 3 || rhos.size() != data.size())
        throw ExtrapolationDiverged("extract_ray: need at least 3 sweep points");
    std::vector<double> h(rhos.size());
    std::vector<Vec> y(rhos.size());
    for (size_t k = 0; k < rhos.size(); ++k) {
        h[k] = lorentz_h(rhos[k], c);
        if (h[k] <= 0.0)
            throw ExtrapolationDiverged("extract_ray: sweep speed at or above c");
        y[k] = data[k] * (rhos[k] / h[k]);
    }
    PolyExtrapolation p = extrapolate_poly(h, y, degree);
    return RayExtraction{p.value, p.rms_residual};
}

Vec line_integral_force(const FieldModel& model, const Vec& theta, const Vec& x,
                        double speed, double quad_tol) {
    AdaptOptions opt;
    opt.abs_tol = quad_tol;
    Vec w = theta * speed;
    return integrate_real_line(
               [&](double tau) { return model.force(theta * tau + x, w); },
               model.dim(), opt)
        .value;
}

Vec line_integral_force_long(const FieldModel& model, const Vec& theta, const Vec& x,
                             double speed, double quad_tol) {
    AdaptOptions opt;
    opt.abs_tol = quad_tol;
    Vec w = theta * speed;
    return integrate_real_line(
               [&](double tau) { return model.force_long(theta * tau + x, w); },
               model.dim(), opt)
        .value;
}

Vec line_integral_force_short(const FieldModel& model, const Vec& theta, const Vec& x,
                              double speed, double quad_tol) {
    AdaptOptions opt;
    opt.abs_tol = quad_tol;
    Vec w = theta * speed;
    return integrate_real_line(
               [&](double tau) { return model.force_short(theta * tau + x, w); },
               model.dim(), opt)
        .value;
}

Vec weighted_short_moment(const FieldModel& model, const Vec& theta, const Vec& x,
                          double speed, double quad_tol) {
    // int_{-inf}^0 int_{-inf}^sigma F^s - int_0^inf int_sigma^inf F^s collapses
    // to -int tau F^s(tau theta + x) dtau by exchanging the integration order
    AdaptOptions opt;
    opt.abs_tol = quad_tol;
    Vec w = theta * speed;
    Vec m = integrate_real_line(
                [&](double tau) {
                    return model.force_short(theta * tau + x, w) * tau;
                },
                model.dim(), opt)
                .value;
    return -m;
}

double line_integral_Vs(const FieldModel& model, const Vec& theta, const Vec& x,
                        double quad_tol) {
    AdaptOptions opt;
    opt.abs_tol = quad_tol;
    return integrate_scalar_real_line(
        [&](double tau) { return model.Vs(theta * tau + x); }, opt);
}

BornTerms born_terms(const FieldModel& model, const Vec& theta, const Vec& x,
                     double rho, double quad_tol) {
    const double c = model.light_speed();
    const double h = lorentz_h(rho, c);
    BornTerms b;
    b.a_term = line_integral_force(model, theta, x, rho, quad_tol) * (h / rho);
    Vec dd = weighted_short_moment(model, theta, x, rho, quad_tol);
    double pv = line_integral_Vs(model, theta, x, quad_tol);
    Vec inner = dd + theta * (pv * rho * rho / (c * c));
    b.b_term = inner * (h / (rho * rho));
    return b;
}

HighEnergyReport verify_high_energy(const FieldModel& model,
                                    const std::vector<std::pair<Vec, Vec>>& rays,
                                    const std::vector<double>& rhos, DataMode mode,
                                    const VerifyOptions& opt) {
    HighEnergyReport rep;
    const double c = model.light_speed();
    for (const auto& [theta_raw, x] : rays) {
        Vec theta = theta_raw * (1.0 / norm(theta_raw));
        double xn = norm(x);
        for (double rho : rhos) {
            double r = opt.r;
            if (r <= 0.0)
                r = (mode == DataMode::standard)
                        ? best_radius_standard(model, rho, xn)
                        : best_radius_modified(model, rho, xn);
            BoundContext bc = BoundContext::from_model(model, rho, xn, r);
            if (opt.mode == Mode::strict) {
                double beta = bc.beta_max();
                double root = (mode == DataMode::standard)
                                  ? rho0(model.dim(), c, model.alpha(), beta, xn, r)
                                  : rho0_tilde(model.dim(), c, model.alpha(), beta, xn, r);
                if (rho <= root)
                    throw BelowRho0("verify_high_energy: speed below the threshold root");
            }

            HighEnergyRow row;
            row.theta = theta;
            row.x = x;
            row.rho = rho;
            const double h = lorentz_h(rho, c);
            Vec v = theta * rho;

            Vec target_a_full = line_integral_force(model, theta, x, rho, opt.quad_tol);
            Vec dd = weighted_short_moment(model, theta, x, rho, opt.quad_tol);
            double pv = line_integral_Vs(model, theta, x, opt.quad_tol);
            Vec target_b = dd + theta * (pv * rho * rho / (c * c));

            if (mode == DataMode::standard) {
                SolveOptions so;
                so.r = r;
                so.picard_tol = opt.picard_tol;
                so.quad_tol = opt.quad_tol;
                so.mode = opt.mode;
                so.grid = opt.grid;
                ScatteringSolution s = solve_scattering(model, v, x, so);
                row.lhs_a = s.datum.a_sc * (rho / h);
                row.target_a = target_a_full;
                row.resid_a = norm(row.lhs_a - row.target_a);
                row.bound_a = bound_highenergy_a(bc);
                row.lhs_b = (s.datum.b_sc - s.datum.W) * (rho * rho / h);
                row.target_b = target_b;
                row.resid_b = norm(row.lhs_b - row.target_b);
                row.bound_b = bound_highenergy_b(bc);
            } else {
                ModifiedOptions mo;
                mo.r = r;
                mo.picard_tol = opt.picard_tol;
                mo.quad_tol = opt.quad_tol;
                mo.mode = opt.mode;
                mo.grid = opt.grid;
                ModifiedSolution s = solve_modified(model, v, x, mo);
                Vec target_a_short =
                    line_integral_force_short(model, theta, x, rho, opt.quad_tol);
                row.lhs_a = (s.datum.a_tilde_sc - s.datum.W_tilde) * (rho / h);
                row.target_a = target_a_short;
                row.resid_a = norm(row.lhs_a - row.target_a);
                row.bound_a = bound_born_a_mod(bc) * (rho / h);
                row.lhs_b = s.datum.b_tilde_sc * (rho * rho / h);
                row.target_b = target_b;
                row.resid_b = norm(row.lhs_b - row.target_b);
                row.bound_b = bound_born_b_mod(bc) * (rho * rho / h);
            }
            row.pass_a = row.resid_a <= row.bound_a * (1.0 + 1e-8);
            row.pass_b = row.resid_b <= row.bound_b * (1.0 + 1e-8);
            rep.all_pass = rep.all_pass && row.pass_a && row.pass_b;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

ReconstructResult reconstruct_Fs(const FieldModel& truth, const ReconstructOptions& opt) {
    if (truth.dim() != 2)
        throw ConditionViolated("reconstruct_Fs: inversion implemented for n = 2 only");
    const int n = 2;
    const double c = truth.light_speed();
    const int K = opt.angles, M = opt.offsets;
    const double L = opt.extent;
    if (opt.rhos.size() < 3)
        throw ConditionViolated("reconstruct_Fs: need at least 3 sweep speeds");

    // The reconstructor side sees the sweep outputs plus the long-range tail
    // only; ground truth from the full model is used for the error report.
    const FieldModel tail = truth.long_range_only();
    const bool has_long = !truth.long_range_zero();

    auto grid = TimeGrid::make(opt.grid_nodes);
    Sinogram proto(K, M, L);

    const int rays_total = K * M;
    const int R = static_cast<int>(opt.rhos.size());
    std::vector<Vec> extracted(rays_total, Vec::zero(n));
    std::vector<double> fit_resid(rays_total, 0.0);

    int nthreads = opt.threads > 0
                       ? opt.threads
                       : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> cursor{0};
    std::atomic<bool> failed{false};
    std::string fail_msg;
    std::mutex fail_mu;

    // angle-major batches: the incoming free solution and its long-force
    // cumulative depend only on (theta, rho) and are shared over all offsets
    auto worker = [&]() {
        for (;;) {
            int j = cursor.fetch_add(1);
            if (j >= K || failed.load()) break;
            Vec theta = proto.theta(j);
            try {
                std::vector<std::shared_ptr<const FreeTrajectory>> zcache(R);
                std::vector<GridCurve> jlcache(R);
                for (int k = 0; k < R; ++k) {
                    FreeOptions fo;
                    fo.tol = std::min(opt.picard_tol, 1e-10) * 0.5;
                    fo.quad_tol = opt.quad_tol * 0.1;
                    fo.mode = Mode::empirical;
                    fo.grid = grid;
                    zcache[k] = std::make_shared<const FreeTrajectory>(solve_free(
                        truth, theta * opt.rhos[k], Vec::zero(n), Direction::past, fo));
                    if (!truth.long_range_zero()) {
                        auto phi_l = [&](double tau) {
                            return truth.force_long(zcache[k]->pos(tau),
                                                    zcache[k]->vel(tau));
                        };
                        jlcache[k] = build_cumulative(grid, phi_l, n, truth.alpha(),
                                                      CumulFrom::left,
                                                      opt.quad_tol / 40.0);
                    }
                }
                // adjacent offsets deflect almost identically, so each speed
                // keeps its own warm start across the offset sweep
                std::vector<GridCurve> warm_by_rho(R);
                for (int m = 0; m < M; ++m) {
                    Vec x = proto.theta_perp(j) * proto.offset(m);
                    std::vector<Vec> data;
                    data.reserve(R);
                    for (int k = 0; k < R; ++k) {
                        SolveOptions so;
                        so.picard_tol = opt.picard_tol;
                        so.quad_tol = opt.quad_tol;
                        so.mode = Mode::empirical;
                        so.grid = grid;
                        so.with_b = false;
                        so.with_W = false;
                        so.refresh_J = false;
                        so.warm = warm_by_rho[k].empty() ? nullptr : &warm_by_rho[k];
                        so.z_minus_cache = zcache[k];
                        if (!truth.long_range_zero()) so.Jl_cache = &jlcache[k];
                        ScatteringSolution s =
                            solve_scattering(truth, theta * opt.rhos[k], x, so);
                        warm_by_rho[k] = s.defl.y;
                        data.push_back(s.datum.a_sc);
                    }
                    RayExtraction ex = extract_ray(opt.rhos, data, c, opt.degree);
                    Vec J = ex.J;
                    if (has_long)
                        J -= line_integral_force_long(tail, theta, x, c, opt.quad_tol);
                    extracted[j * M + m] = J;
                    fit_resid[j * M + m] = ex.fit_residual;
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(fail_mu);
                failed.store(true);
                if (fail_msg.empty()) fail_msg = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) throw Error("reconstruct_Fs: sweep failed: " + fail_msg);

    ReconstructResult out;
    for (int i = 0; i < rays_total; ++i)
        out.max_fit_residual = std::max(out.max_fit_residual, fit_resid[i]);

    double num_total = 0.0, den_total = 0.0;
    for (int comp = 0; comp < n; ++comp) {
        Sinogram sino(K, M, L);
        for (int idx = 0; idx < rays_total; ++idx)
            sino.v[idx] = extracted[idx][comp];
        ReconstructionGrid g = xray_invert(sino, opt.grid_n);
        g.set_ground_truth([&](const Vec& y) {
            // F^s(., c theta) for the electric short-range part; the velocity
            // argument does not enter when B^s = 0
            Vec f = truth.force_short(y, Vec::zero(n));
            return f[comp];
        });
        double numc = 0.0, denc = 0.0;
        for (size_t i = 0; i < g.v.size(); ++i) {
            double d = g.v[i] - (*g.ground_truth)[i];
            numc += d * d;
            denc += (*g.ground_truth)[i] * (*g.ground_truth)[i];
        }
        out.rms_component.push_back(denc > 0 ? std::sqrt(numc / denc)
                                             : std::sqrt(numc / g.v.size()));
        num_total += numc;
        den_total += denc;
        out.components.push_back(std::move(g));
    }
    out.rms_total = den_total > 0 ? std::sqrt(num_total / den_total)
                                  : std::sqrt(num_total);
    return out;
}

}  // namespace relscat
