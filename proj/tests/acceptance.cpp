// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "relscat/highenergy.hpp"
#include "relscat/modified.hpp"
#include "relscat/oracle.hpp"
#include "relscat/scattering.hpp"
#include "relscat/xray.hpp"

using namespace relscat;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Criterion> results;
double worst_speed_conservation = 0.0;
long speed_samples = 0;

void track_speed(const Vec& a, const Vec& v_minus) {
    double d = std::abs(norm(a) - norm(v_minus)) / norm(v_minus);
    worst_speed_conservation = std::max(worst_speed_conservation, d);
    ++speed_samples;
}

template <class Fn>
void run_criterion(int id, const std::string& name, double budget_seconds, Fn&& fn) {
    Criterion c;
    c.id = id;
    c.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_seconds > 0.0 && c.seconds > budget_seconds) {
        c.pass = false;
        c.detail += " [over the runtime budget]";
    }
    std::printf("[criterion %02d] %-28s %s  (%.1fs%s%s)\n", c.id, c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.seconds, c.detail.empty() ? "" : "; ",
                c.detail.c_str());
    std::fflush(stdout);
    results.push_back(std::move(c));
}

FieldModel soft2(double q_l, double q_s, double m_l, double m_s, double alpha = 1.0) {
    FieldParams p;
    p.family = FieldFamily::soft_coulomb;
    p.q_l = q_l;
    p.q_s = q_s;
    p.m_l = m_l;
    p.m_s = m_s;
    return FieldModel(2, 1.0, alpha, p);
}

char buf[256];

// --- criterion 1: zero-field identity --------------------------------------

void crit_zero_field(Criterion& c) {
    FieldModel z(2, 1.0, 1.0, FieldParams{});
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        double ang = M_PI * i / 5.0;
        Vec theta{std::cos(ang), std::sin(ang)};
        Vec perp{-std::sin(ang), std::cos(ang)};
        for (int u = -2; u <= 2; ++u) {
            Vec v = theta * 0.8;
            Vec x = perp * static_cast<double>(u);
            ScatteringSolution s = solve_scattering(z, v, x, {});
            worst = std::max({worst, norm(s.datum.a_sc), norm(s.datum.b_sc),
                              norm(s.datum.W)});
            ModifiedSolution ms = solve_modified(z, v, x, {});
            worst = std::max({worst, norm(ms.datum.a_tilde_sc),
                              norm(ms.datum.b_tilde_sc), norm(ms.datum.W_tilde)});
        }
    }
    std::snprintf(buf, sizeof(buf), "max |datum| = %.2e over 25 rays", worst);
    c.detail = buf;
    c.pass = worst <= 1e-12;
}

// --- criterion 3: short-range reduction ------------------------------------

void crit_short_range(Criterion& c) {
    FieldParams p;
    p.family = FieldFamily::soft_coulomb;
    p.q_s = 1e-3;
    p.m_s = 5e-4;
    FieldModel m(2, 1.0, 1.0, p);

    // free solutions are exactly straight lines
    for (double sp : {0.5, 0.9}) {
        Vec v{sp, 0.3 * sp};
        FreeTrajectory z = solve_free(m, v, Vec::zero(2), Direction::future);
        for (double t : {-100.0, -1.0, 0.5, 42.0}) {
            Vec pos = z.pos(t);
            if (pos[0] != t * v[0] || pos[1] != t * v[1]) {
                c.detail = "free solution deviates from the straight line";
                return;
            }
        }
    }

    double worst_a = 0.0, worst_b = 0.0;
    for (double speed : {0.5, 0.7, 0.9}) {
        for (double impact : {0.5, 1.0, 2.0}) {
            Vec v{speed, 0.0}, x{0.0, impact};
            SolveOptions so;
            so.mode = Mode::empirical;
            so.picard_tol = 1e-12;
            so.quad_tol = 1e-13;
            ScatteringSolution s = solve_scattering(m, v, x, so);
            track_speed(s.datum.a, v);
            OracleOptions oo;
            oo.T = 2000.0;
            oo.tol = 1e-12;
            OracleResult orc = ode_oracle(m, v, x, oo);
            worst_a = std::max(worst_a, norm(s.datum.a - orc.a_est) / (1e-6 * speed));
            worst_b = std::max(worst_b,
                               norm(s.datum.b - orc.b_est) / (1e-5 * (1.0 + impact)));
        }
    }
    std::snprintf(buf, sizeof(buf), "a and b vs oracle at %.2f and %.2f of budget",
                  worst_a, worst_b);
    c.detail = buf;
    c.pass = worst_a <= 1.0 && worst_b <= 1.0;
}

// --- criteria 4/5: bound suites --------------------------------------------

void crit_bounds_standard(Criterion& c) {
    std::vector<FieldModel> models = {soft2(2e-5, 2e-5, 1e-5, 1e-5, 1.0),
                                      soft2(3e-5, 2e-5, 0.0, 1e-5, 0.75)};
    int triples = 0, passed = 0;
    double margin = 0.0;  // worst resid/bound
    for (const FieldModel& m : models) {
        for (double xn : {0.5, 1.5}) {
            for (double rho : {0.99, 0.995, 0.999, 0.9995, 0.9999}) {
                double r = best_radius_standard(m, rho, xn);
                BoundContext bc = BoundContext::from_model(m, rho, xn, r);
                if (!strict_ok_standard(bc) || rho <= mu_l(m)) {
                    c.detail = "a planned triple is not admissible";
                    return;
                }
                ++triples;
                Vec v{rho, 0.0}, x{0.0, xn};
                SolveOptions so;
                so.r = r;
                so.picard_tol = 1e-11;
                so.quad_tol = 1e-13;
                ScatteringSolution s = solve_scattering(m, v, x, so);
                track_speed(s.datum.a, v);

                bool ok = true;
                auto chk = [&](double lhs, double bound) {
                    ok = ok && lhs <= bound * (1.0 + 1e-8);
                    if (bound > 0.0) margin = std::max(margin, lhs / bound);
                };
                const TimeGrid& g = s.defl.y.grid();
                for (int k = 1; k + 1 < g.size(); ++k) {
                    double t = g.t(k);
                    if (t < 0.0) chk(norm(s.defl.y.deriv(k)), bound_incoming_deflection(bc, t));
                    if (t > 0.0) chk(norm(s.y_plus.deriv(k)), bound_outgoing_deflection(bc, t));
                }
                chk(norm(s.datum.a_sc), bound_a_sc(bc));
                chk(norm(s.datum.b_sc), bound_b_sc(bc));
                BornTerms born = born_terms(m, Vec{1.0, 0.0}, x, rho, 1e-13);
                chk(norm(s.datum.a_sc - born.a_term), bound_born_a(bc));
                chk(norm(s.datum.b_sc - s.datum.W - born.b_term), bound_born_b(bc));
                if (ok) ++passed;
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "%d/%d triples, worst lhs/bound %.3f", passed,
                  triples, margin);
    c.detail = buf;
    c.pass = triples >= 20 && passed == triples;
}

double worst_g_contraction = 0.0;
bool have_g_contraction = false;

void crit_bounds_modified(Criterion& c) {
    std::vector<FieldModel> models = {soft2(2e-5, 2e-5, 1e-5, 1e-5, 1.0),
                                      soft2(3e-5, 2e-5, 0.0, 1e-5, 0.75)};
    int triples = 0, passed = 0;
    double margin = 0.0;
    for (const FieldModel& m : models) {
        for (double xn : {2.0, 5.0}) {
            // rho~_0 reaches ~0.9992 for these amplitudes at |x_-| = 2
            for (double rho : {0.9993, 0.9995, 0.9997, 0.9998, 0.9999}) {
                double r = best_radius_modified(m, rho, xn);
                BoundContext bc = BoundContext::from_model(m, rho, xn, r);
                double rho_t = rho0_tilde(2, 1.0, m.alpha(), bc.beta_max(), xn, r);
                if (!strict_ok_modified(bc) || rho <= rho_t) {
                    c.detail = "a planned triple is not admissible";
                    return;
                }
                ++triples;
                Vec v{rho, 0.0}, x{0.0, xn};
                ModifiedOptions mo;
                mo.r = r;
                mo.picard_tol = 1e-11;
                mo.quad_tol = 1e-13;
                ModifiedSolution s = solve_modified(m, v, x, mo);
                track_speed(s.datum.a_tilde, v);
                if (forward_condition_modified(bc) <= 1.0) {
                    worst_g_contraction =
                        std::max(worst_g_contraction, s.datum.g_diag.contraction);
                    have_g_contraction = true;
                }

                bool ok = true;
                auto chk = [&](double lhs, double bound) {
                    ok = ok && lhs <= bound * (1.0 + 1e-8);
                    if (bound > 0.0) margin = std::max(margin, lhs / bound);
                };
                const TimeGrid& g = s.y_minus.grid();
                for (int k = 1; k + 1 < g.size(); ++k) {
                    double t = g.t(k);
                    if (t < 0.0) chk(norm(s.y_minus.deriv(k)), bound_incoming_deflection_mod(bc, t));
                    if (t > 0.0) chk(norm(s.y_plus.deriv(k)), bound_outgoing_deflection_mod(bc, t));
                }
                chk(norm(s.datum.a_tilde_sc), bound_a_tilde_sc(bc));
                chk(norm(s.datum.b_tilde_sc), bound_b_tilde_sc(bc));
                Vec theta{1.0, 0.0};
                double h = std::sqrt(1.0 - rho * rho);
                Vec fs = line_integral_force_short(m, theta, x, rho, 1e-13);
                chk(norm(s.datum.a_tilde_sc - s.datum.W_tilde - fs * (h / rho)),
                    bound_born_a_mod(bc));
                Vec dd = weighted_short_moment(m, theta, x, rho, 1e-13);
                double pv = line_integral_Vs(m, theta, x, 1e-13);
                Vec tb = (dd + theta * (pv * rho * rho)) * (h / (rho * rho));
                chk(norm(s.datum.b_tilde_sc - tb), bound_born_b_mod(bc));
                if (ok) ++passed;
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "%d/%d triples, worst lhs/bound %.3f", passed,
                  triples, margin);
    c.detail = buf;
    c.pass = triples >= 20 && passed == triples;
}

// --- criterion 6: high-energy convergence ----------------------------------

void crit_high_energy(Criterion& c) {
    FieldModel m = soft2(1e-3, 0.0, 0.0, 0.0);
    Vec theta{1.0, 0.0}, x{0.0, 1.0};
    Vec target = line_integral_force(m, theta, x, 1.0, 1e-13);
    std::vector<double> rhos = {0.95, 0.99, 0.999, 0.9999};
    std::vector<double> resid, ratio;
    for (double rho : rhos) {
        SolveOptions so;
        so.mode = Mode::empirical;
        so.picard_tol = 1e-12;
        so.quad_tol = 1e-13;
        so.with_b = false;
        so.with_W = false;
        ScatteringSolution s = solve_scattering(m, theta * rho, x, so);
        track_speed(s.datum.a, theta * rho);
        double h = std::sqrt(1.0 - rho * rho);
        resid.push_back(norm(s.datum.a_sc * (rho / h) - target));
        ratio.push_back(resid.back() / h);
    }
    bool rate_ok = true;
    for (double rt : ratio) rate_ok = rate_ok && rt <= 3.0 * ratio.front();
    std::snprintf(buf, sizeof(buf), "relative residual %.2e at rho=0.9999",
                  resid.back() / norm(target));
    c.detail = buf;
    c.pass = resid.back() <= 1e-3 * norm(target) && rate_ok;
}

// --- criterion 7: Born scaling ----------------------------------------------

void crit_born_scaling(Criterion& c) {
    Vec theta{1.0, 0.0}, x{0.0, 1.0};
    const double rho = 0.99;
    double resid_a[2], resid_b[2];
    int i = 0;
    for (double sc : {1.0, 0.5}) {
        FieldModel m = soft2(4e-4 * sc, 4e-4 * sc, 2e-4 * sc, 1e-4 * sc);
        SolveOptions so;
        so.mode = Mode::empirical;
        so.picard_tol = 1e-12;
        so.quad_tol = 1e-14;
        ScatteringSolution s = solve_scattering(m, theta * rho, x, so);
        track_speed(s.datum.a, theta * rho);
        BornTerms born = born_terms(m, theta, x, rho, 1e-14);
        resid_a[i] = norm(s.datum.a_sc - born.a_term);
        resid_b[i] = norm(s.datum.b_sc - s.datum.W - born.b_term);
        ++i;
    }
    double ra = resid_a[0] / resid_a[1];
    double rb = resid_b[0] / resid_b[1];
    std::snprintf(buf, sizeof(buf), "residual ratios a: %.2f, b: %.2f", ra, rb);
    c.detail = buf;
    c.pass = ra >= 3.2 && ra <= 5.0 && rb >= 3.2 && rb <= 5.0;
}

// --- criterion 8: contraction of the b~ iteration ---------------------------

void crit_g_contraction(Criterion& c) {
    // the iteration converges within a step or two at these amplitudes, so
    // the factor is measured as a direct Lipschitz sample of the map over
    // macroscopic displacements inside its ball, with the contraction
    // condition verified
    FieldModel m = soft2(2e-5, 2e-5, 1e-5, 1e-5);
    double worst = worst_g_contraction;
    int measured = 0;
    for (double rho : {0.95, 0.99}) {
        double xn = 5.0;
        double r = best_radius_modified(m, rho, xn);
        BoundContext bc = BoundContext::from_model(m, rho, xn, r);
        if (forward_condition_modified(bc) > 1.0) {
            c.detail = "condition for the 1/6-contraction violated";
            return;
        }
        ModifiedOptions mo;
        mo.r = r;
        mo.mode = Mode::empirical;
        ModifiedSolution s = solve_modified(m, Vec{rho, 0.0}, Vec{0.0, xn}, mo);
        track_speed(s.datum.a_tilde, Vec{rho, 0.0});
        const Vec q0 = s.datum.b_tilde_sc;
        for (Vec dq : {Vec{0.3, 0.0}, Vec{0.0, 0.3}, Vec{-0.2, 0.2}}) {
            Vec ga = modified_G_at(m, s, q0, 1e-12);
            Vec gb = modified_G_at(m, s, q0 + dq, 1e-12);
            worst = std::max(worst, norm(gb - ga) / norm(dq));
            ++measured;
        }
    }
    std::snprintf(buf, sizeof(buf), "observed factor %.4f over %d samples (cap %.4f)",
                  worst, measured, 1.0 / 6.0 + 0.05);
    c.detail = buf;
    c.pass = measured > 0 && worst <= 1.0 / 6.0 + 0.05;
}

// --- criterion 9: large-|x_-| decay -----------------------------------------

void crit_slope(Criterion& c) {
    FieldModel m = soft2(5e-5, 2e-5, 0.0, 0.0);
    const double rho = 0.995;
    std::vector<double> lx, ly;
    for (double xn : {5.0, 10.0, 20.0, 40.0}) {
        ModifiedOptions mo;
        mo.mode = Mode::empirical;
        mo.with_b_tilde = false;
        mo.with_W_tilde = false;
        ModifiedSolution s = solve_modified(m, Vec{rho, 0.0}, Vec{0.0, xn}, mo);
        track_speed(s.datum.a_tilde, Vec{rho, 0.0});
        lx.push_back(std::log(xn));
        ly.push_back(std::log(norm(s.datum.a_tilde_sc)));
    }
    double n = lx.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::snprintf(buf, sizeof(buf), "log-log slope %.3f vs -1", slope);
    c.detail = buf;
    c.pass = std::abs(slope + 1.0) <= 0.2;
}

// --- criterion 10: x-ray round trip -----------------------------------------

void crit_fbp(Criterion& c) {
    const int K = 180, M = 256, N = 128;
    Sinogram s(K, M, 4.0);
    for (int j = 0; j < K; ++j)
        for (int m = 0; m < M; ++m) {
            double u = s.offset(m);
            s.at(j, m) = std::sqrt(M_PI) * std::exp(-u * u);
        }
    ReconstructionGrid g = xray_invert(s, N);
    g.set_ground_truth([](const Vec& y) { return std::exp(-norm2(y)); });
    double rms = g.rms_rel_error();
    std::snprintf(buf, sizeof(buf), "rms relative error %.4f", rms);
    c.detail = buf;
    c.pass = rms <= 0.05;
}

// --- criterion 11: end-to-end inverse problem --------------------------------

void crit_reconstruct(Criterion& c) {
    FieldParams p;
    p.family = FieldFamily::gauss_short;
    p.gauss_amp = 2e-3;
    p.gauss_center = Vec{0.6, 0.2};
    p.gauss_width = 1.0;
    FieldModel short_only(2, 1.0, 1.0, p);
    p.q_l = 5e-4;
    p.m_l = 2e-4;
    FieldModel with_tail(2, 1.0, 1.0, p);

    ReconstructOptions ro;
    ro.angles = 180;
    ro.offsets = 160;
    ro.extent = 4.0;
    ro.grid_n = 128;
    ro.rhos = {0.99, 0.999, 0.9999};
    ro.picard_tol = 3e-8;
    ro.quad_tol = 3e-9;
    ro.grid_nodes = 151;
    ro.threads = 0;

    ReconstructResult a = reconstruct_Fs(short_only, ro);
    ReconstructResult b = reconstruct_Fs(with_tail, ro);
    std::snprintf(buf, sizeof(buf), "rms %.4f (short-range), %.4f (with tail)",
                  a.rms_total, b.rms_total);
    c.detail = buf;
    c.pass = a.rms_total <= 0.10 && b.rms_total <= 0.15;
}

// --- criterion 12: threshold roots -------------------------------------------

void crit_roots(Criterion& c) {
    double worst = 0.0;
    bool monotone = true;
    double prev = 0.0, prev_t = 0.0;
    for (int i = 0; i < 10; ++i) {
        double beta = std::pow(10.0, -6.0 + 2.0 * i / 9.0);
        double root = rho0(2, 1.0, 1.0, beta, 1.0, 0.25);
        worst = std::max(worst,
                         std::abs(rho0_rhs(2, 1.0, 1.0, beta, 1.0, 0.25, root) - 1.0));
        monotone = monotone && root > prev;
        prev = root;
        double root_t = rho0_tilde(2, 1.0, 1.0, beta, 1.0, 0.25);
        worst = std::max(
            worst, std::abs(rho0_tilde_rhs(2, 1.0, 1.0, beta, 1.0, 0.25, root_t) - 1.0));
        monotone = monotone && root_t > prev_t;
        prev_t = root_t;
    }
    std::snprintf(buf, sizeof(buf), "max |rhs-1| = %.2e, monotone %s", worst,
                  monotone ? "yes" : "no");
    c.detail = buf;
    c.pass = worst <= 1e-12 && monotone;
}

}  // namespace

int main() {
    std::printf("relscat acceptance suite\n");
    run_criterion(1, "zero-field identity", 1.0, crit_zero_field);
    run_criterion(3, "short-range reduction", 120.0, crit_short_range);
    run_criterion(4, "bound suite (standard)", 0.0, crit_bounds_standard);
    run_criterion(5, "bound suite (modified)", 0.0, crit_bounds_modified);
    run_criterion(6, "high-energy convergence", 60.0, crit_high_energy);
    run_criterion(7, "Born scaling", 120.0, crit_born_scaling);
    run_criterion(8, "b~ contraction factor", 0.0, crit_g_contraction);
    run_criterion(9, "large-|x_-| decay", 0.0, crit_slope);
    run_criterion(10, "x-ray round trip", 30.0, crit_fbp);
    run_criterion(11, "end-to-end inverse problem", 600.0, crit_reconstruct);
    run_criterion(12, "threshold roots", 1.0, crit_roots);
    // criterion 2 aggregates every converged datum produced above
    run_criterion(2, "speed conservation", 0.0, [](Criterion& c) {
        std::snprintf(buf, sizeof(buf), "max | |a|-|v| |/|v| = %.2e over %ld data",
                      worst_speed_conservation, speed_samples);
        c.detail = buf;
        c.pass = speed_samples > 0 && worst_speed_conservation <= 1e-8;
    });

    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
