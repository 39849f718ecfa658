#include "relscat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relscat/errors.hpp"

namespace relscat {

namespace {
const double SQ2 = std::sqrt(2.0);
double pw(double b, double e) { return std::pow(b, e); }
}  // namespace

BoundContext BoundContext::from_model(const FieldModel& m, double speed,
                                      double x_norm, double r) {
    BoundContext ctx;
    ctx.n = m.dim();
    ctx.c = m.light_speed();
    ctx.alpha = m.alpha();
    ctx.beta1_l = m.beta1_l();
    ctx.beta2_l = m.beta2_l();
    ctx.beta2_s = m.beta2_s();
    ctx.beta3_s = m.beta3_s();
    ctx.speed = speed;
    ctx.x_norm = x_norm;
    ctx.r = r;
    return ctx;
}

double contraction_condition_standard(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    return pw(2.0, 2.5) * b.n * std::max(b.beta1_l, b.beta2()) * b.gamma() /
           (b.alpha * vt * vt * pw(1.0 - b.r, b.alpha + 1.0));
}

double lambda_free(const BoundContext& b) {
    return 256.0 * b.n * b.n * std::max(b.beta1_l, b.beta2()) * b.gamma() /
           (b.alpha * b.speed * b.speed);
}

double lambda_norm(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double num = 4.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.r * b.beta1_l / b.c +
                  2.0 * b.beta2() * (std::sqrt((double)b.n) * (b.x_norm + b.r) + 1.0)) *
                 (1.0 + 1.0 / vt);
    return num / (b.alpha * vt * pw(1.0 - b.r, b.alpha + 1.0));
}

double lambda_contraction(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double num = 4.0 * pw(b.n, 1.5) * b.gamma() *
                 ((b.beta1_l + b.beta2()) / b.c +
                  2.0 * std::sqrt((double)b.n) * (b.beta2() + b.beta3_s)) *
                 (1.0 + 1.0 / vt);
    return num / (b.alpha * vt * pw(1.0 - b.r, b.alpha + 2.0));
}

double lambda_estimates(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    return 24.0 * b.n * b.n * b.gamma() * std::max(b.beta1_l, b.beta2()) *
           (1.0 + 1.0 / b.c) * (1.0 + 1.0 / vt) /
           (b.alpha * vt * pw(1.0 - b.r, b.alpha + 1.0));
}

double strict_majorant_standard(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    return 32.0 * b.n * b.n * b.gamma() * b.beta_max() *
           (1.0 + b.x_norm + 1.0 / b.c) * (1.0 + 1.0 / vt) /
           (b.alpha * vt * b.r * pw(1.0 - b.r, b.alpha + 2.0));
}

bool strict_ok_standard(const BoundContext& b) {
    if (b.r <= 0.0 || b.r >= 1.0 || b.vtil() <= 0.0) return false;
    if (contraction_condition_standard(b) > 1.0) return false;
    double m = std::max(std::max(lambda_free(b), lambda_norm(b) / b.r),
                        std::max(lambda_contraction(b), lambda_estimates(b)));
    return m < 1.0;
}

double bound_incoming_deflection(const BoundContext& b, double t) {
    double vt = b.vtil();
    double num = 2.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.r * b.beta1_l / b.c +
                  2.0 * b.beta2() * (std::sqrt((double)b.n) * (b.x_norm + b.r) + 1.0));
    return num / ((b.alpha + 1.0) * vt * pw(1.0 - b.r - vt * t, b.alpha + 1.0));
}

double bound_a_sc(const BoundContext& b) {
    double vt = b.vtil();
    double base = 1.0 + b.x_norm / SQ2 - b.r;
    return 8.0 * pw(b.n, 1.5) * b.gamma() / (vt * pw(base, b.alpha)) *
           (b.beta1_l / b.alpha + b.beta2() / ((b.alpha + 1.0) * base));
}

double bound_b_sc(const BoundContext& b) {
    double vt = b.vtil();
    double num = 4.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.r * b.beta1_l / b.c +
                  b.beta2() * (std::sqrt((double)b.n) * (4.0 * b.x_norm + b.r) + 4.0));
    return num / (b.alpha * (b.alpha + 1.0) * vt * vt * pw(1.0 - b.r, b.alpha));
}

double bound_outgoing_deflection(const BoundContext& b, double t) {
    double vt = b.vtil();
    double num = 2.0 * pw(b.n, 1.5) *
                 (b.r * b.beta1_l / b.c +
                  2.0 * b.beta2() * (std::sqrt((double)b.n) * (3.0 * b.x_norm + b.r) + 3.0)) *
                 b.gamma();
    return num / ((b.alpha + 1.0) * vt * pw(1.0 - b.r + t * vt, b.alpha + 1.0));
}

double bound_born_a(const BoundContext& b) {
    double vt = b.vtil();
    double g2 = b.gamma() * b.gamma();
    double beta = b.beta_max();
    double num = 520.0 * pw(b.n, 4.0) * beta * beta * g2 *
                 (b.r / b.c + b.x_norm + 1.0) * (1.0 / b.c + 1.0) *
                 pw(1.0 + 1.0 / vt, 2.0);
    return num / (b.alpha * b.alpha * vt * vt * pw(1.0 - b.r, 2.0 * b.alpha + 3.0));
}

double bound_born_b(const BoundContext& b) {
    double vt = b.vtil();
    double g2 = b.gamma() * b.gamma();
    double beta = b.beta_max();
    double num = 468.0 * pw(b.n, 4.0) * beta * beta * g2 *
                 (b.r / b.c + b.x_norm + 1.0) * (1.0 / b.c + 1.0) *
                 pw(1.0 + 1.0 / vt, 2.0);
    return num / (b.alpha * b.alpha * (b.alpha + 1.0) * vt * vt * vt *
                  pw(1.0 - b.r, 2.0 * b.alpha + 2.0));
}

double bound_highenergy_a(const BoundContext& b) {
    double vt = b.vtil();
    double beta = b.beta_max();
    double num = 640.0 * pw(b.n, 4.0) * beta * beta * b.gamma() * b.speed *
                 (b.r / b.c + b.x_norm + 1.0) * (1.0 / b.c + 1.0) *
                 pw(1.0 + 1.0 / vt, 2.0);
    return num / (b.alpha * b.alpha * vt * vt * pw(1.0 - b.r, 2.0 * b.alpha + 3.0));
}

double bound_highenergy_b(const BoundContext& b) {
    double vt = b.vtil();
    double beta = b.beta_max();
    double num = 464.0 * pw(b.n, 4.0) * beta * beta * b.gamma() * b.speed * b.speed *
                 (b.r / b.c + b.x_norm + 1.0) * (1.0 / b.c + 1.0) *
                 pw(1.0 + 1.0 / vt, 2.0);
    return num / (b.alpha * b.alpha * (b.alpha + 1.0) * vt * vt * vt *
                  pw(1.0 - b.r, 2.0 * b.alpha + 2.0));
}

// --- modified map ------------------------------------------------------------

double contraction_condition_modified(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double base = 1.0 + b.x_norm / SQ2 - b.r;
    if (base <= 0.0) return std::numeric_limits<double>::infinity();
    return pw(2.0, 1.5) * b.n * std::max(b.beta1_l, b.beta2()) * b.gamma() *
           (1.0 + 1.0 / base) / (b.alpha * vt * vt * pw(base, b.alpha));
}

double lambda_norm_mod(const BoundContext& b) {
    double vt = b.vtil();
    double base = 1.0 - b.r + b.x_norm / SQ2;
    double num = 2.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.beta1_l * b.r / b.c +
                  4.0 * b.beta2() * (std::sqrt((double)b.n) * b.r + 1.0));
    return num / (b.alpha * vt * pw(base, b.alpha)) *
           (1.0 + 1.0 / vt + 1.0 / base);
}

double lambda_contraction_mod(const BoundContext& b) {
    double vt = b.vtil();
    double base = 1.0 - b.r + b.x_norm / SQ2;
    double num = 4.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.beta1_l / b.c + 2.0 * b.beta2() * std::sqrt((double)b.n) +
                  (b.beta2() / b.c + 2.0 * b.beta3_s * std::sqrt((double)b.n)) / base);
    return num / (b.alpha * vt * pw(base, b.alpha)) *
           (1.0 + 1.0 / vt + 1.0 / base);
}

double bound_k_tilde_sc(const BoundContext& b) {
    double vt = b.vtil();
    double base = 1.0 + b.x_norm / SQ2 - b.r;
    return 8.0 * pw(b.n, 1.5) * b.gamma() / (vt * pw(base, b.alpha)) *
           (b.beta1_l / b.alpha + b.beta2() / ((b.alpha + 1.0) * base));
}

double forward_condition_modified(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double base = 0.5 + b.x_norm / SQ2;
    return 48.0 * b.n * b.n * (1.0 / b.c + 1.0) * std::max(b.beta1_l, b.beta2()) *
           b.gamma() * (1.0 + 1.0 / vt) / (b.alpha * vt * pw(base, b.alpha));
}

double strict_majorant_modified(const BoundContext& b) {
    double vt = b.vtil();
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double base = 0.5 + b.x_norm / SQ2;
    return 72.0 * b.n * b.n * (1.0 / b.c + 1.0) * b.beta_max() * b.gamma() *
           (1.0 + 1.0 / vt) / (b.alpha * b.r * vt * pw(base, b.alpha));
}

bool strict_ok_modified(const BoundContext& b) {
    if (b.r <= 0.0 || b.r >= 0.5 || b.vtil() <= 0.0) return false;
    if (contraction_condition_modified(b) > 1.0) return false;
    double m = std::max(std::max(lambda_norm_mod(b) / b.r, lambda_contraction_mod(b)),
                        forward_condition_modified(b));
    return m < 1.0;
}

double bound_offset_map(const BoundContext& b) {
    double vt = b.vtil();
    double base = 0.5 + b.x_norm / SQ2;
    double num = 4.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.beta1_l / b.c + 2.0 * std::sqrt((double)b.n) * b.beta2() +
                  4.0 * b.beta2());
    return num / (b.alpha * (b.alpha + 1.0) * vt * vt * pw(base, b.alpha));
}

double lipschitz_offset_map(const BoundContext& b) {
    double v8 = b.speed / pw(2.0, 1.5);
    double base = 0.5 + b.x_norm / SQ2;
    double num = 4.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.beta1_l / b.c + 2.0 * std::sqrt((double)b.n) * b.beta2_l);
    return num / (b.alpha * (b.alpha + 1.0) * v8 * v8 * pw(base, b.alpha));
}

double bound_incoming_deflection_mod(const BoundContext& b, double t) {
    double vt = b.vtil();
    double num = 2.0 * pw(b.n, 1.5) * b.gamma() *
                 (b.r * b.beta1_l / b.c +
                  2.0 * b.beta2() * (std::sqrt((double)b.n) * b.r + 1.0));
    return num / ((b.alpha + 1.0) * vt *
                  pw(1.0 - b.r + b.x_norm / SQ2 - vt * t, b.alpha + 1.0));
}

double bound_a_tilde_sc(const BoundContext& b) {
    double vt = b.vtil();
    double base = 0.5 + b.x_norm / SQ2;
    return 24.0 * pw(b.n, 1.5) * b.gamma() * std::max(b.beta1_l, b.beta2()) /
           (b.alpha * vt * pw(base, b.alpha));
}

double bound_b_tilde_sc(const BoundContext& b) {
    double vt = b.vtil();
    double base = 0.5 + b.x_norm / SQ2;
    return 24.0 * b.n * b.n * b.gamma() * std::max(b.beta1_l, b.beta2()) *
           (1.0 / b.c + 1.0) /
           (b.alpha * (b.alpha + 1.0) * vt * vt * pw(base, b.alpha));
}

double bound_outgoing_deflection_mod(const BoundContext& b, double t) {
    double vt = b.vtil();
    double base = 0.5 + b.x_norm / SQ2 + t * b.speed / (2.0 * SQ2);
    return 20.0 * pw(b.n, 4.0) * b.gamma() * std::max(b.beta1_l, b.beta2()) *
           (1.0 / b.c + 1.0) / ((b.alpha + 1.0) * vt * pw(base, b.alpha + 1.0));
}

double bound_born_a_mod(const BoundContext& b) {
    double vt = b.vtil();
    double g2 = b.gamma() * b.gamma();
    double beta = b.beta_max();
    double base = 0.5 + b.x_norm / SQ2;
    double num = 944.0 * pw(b.n, 4.0) * beta * beta * g2 * (b.r / b.c + 1.0) *
                 (1.0 + 1.0 / b.c) * pw(1.0 + 1.0 / vt, 2.0);
    return num / (b.alpha * b.alpha * vt * vt * pw(base, 2.0 * b.alpha + 1.0));
}

double bound_born_b_mod(const BoundContext& b) {
    double vt = b.vtil();
    double g2 = b.gamma() * b.gamma();
    double beta = b.beta_max();
    double base = 0.5 + b.x_norm / SQ2;
    double num = 808.0 * pw(b.n, 4.0) * beta * beta * g2 * pw(1.0 / b.c + 1.0, 2.0) *
                 pw(1.0 + 1.0 / vt, 2.0);
    return num / (b.alpha * b.alpha * (b.alpha + 1.0) * vt * vt * vt *
                  pw(base, 2.0 * b.alpha));
}

// --- threshold roots ---------------------------------------------------------

double rho0_rhs(int n, double c, double alpha_t, double beta_t, double sigma,
                double r, double rho) {
    double vt = rho / pw(2.0, 1.5) - r;
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double gam = std::sqrt(std::max(0.0, 1.0 - rho * rho / (c * c)));
    return 32.0 * n * n * gam * beta_t * (1.0 + sigma + 1.0 / c) * (1.0 + 1.0 / vt) /
           (alpha_t * vt * r * pw(1.0 - r, alpha_t + 2.0));
}

double rho0_tilde_rhs(int n, double c, double alpha_t, double beta_t, double sigma,
                      double r, double rho) {
    double vt = rho / pw(2.0, 1.5) - r;
    if (vt <= 0.0) return std::numeric_limits<double>::infinity();
    double gam = std::sqrt(std::max(0.0, 1.0 - rho * rho / (c * c)));
    return 72.0 * n * n * (1.0 / c + 1.0) * beta_t * gam * (1.0 + 1.0 / vt) /
           (alpha_t * r * vt * pw(0.5 + sigma / SQ2, alpha_t));
}

namespace {
template <class Rhs>
double bisect_root(Rhs&& rhs, double lo, double hi) {
    // rhs is continuous, decreasing, -> +inf at lo and -> 0 at hi; find
    // rhs(rho) = 1 to |rhs - 1| <= 1e-12.
    double flo = rhs(lo + 1e-15 * (hi - lo));
    double fhi = rhs(hi * (1.0 - 1e-15));
    if (!(flo > 1.0) || !(fhi < 1.0))
        throw NoRoot("threshold root: cannot bracket rhs = 1");
    double a = lo, b = hi;
    double best = 0.5 * (a + b);
    double best_resid = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;  // bracket at machine resolution
        double f = rhs(mid);
        double resid = std::abs(f - 1.0);
        if (resid < best_resid) {
            best_resid = resid;
            best = mid;
        }
        if (resid <= 1e-12) return mid;
        (f > 1.0 ? a : b) = mid;
    }
    return best;
}
}  // namespace

double rho0(int n, double c, double alpha_t, double beta_t, double sigma, double r) {
    if (!(r > 0.0 && r < std::min(1.0, pw(2.0, -1.5) * c)))
        throw ConditionViolated("rho0: r outside (0, min(1, 2^{-3/2} c))");
    double lo = pw(2.0, 1.5) * r;
    return bisect_root(
        [&](double rho) { return rho0_rhs(n, c, alpha_t, beta_t, sigma, r, rho); }, lo, c);
}

double rho0_tilde(int n, double c, double alpha_t, double beta_t, double sigma,
                  double r) {
    if (!(r > 0.0 && r < std::min(0.5, pw(2.0, -1.5) * c)))
        throw ConditionViolated("rho0_tilde: r outside (0, min(1/2, 2^{-3/2} c))");
    double lo = pw(2.0, 1.5) * r;
    return bisect_root(
        [&](double rho) { return rho0_tilde_rhs(n, c, alpha_t, beta_t, sigma, r, rho); },
        lo, c);
}

double default_radius(double speed) {
    return std::min(0.45, speed / pw(2.0, 1.5) - 0.05);
}

namespace {
template <class Score>
double best_radius(double speed, double cap, Score&& score) {
    double rmax = std::min(cap, speed / pw(2.0, 1.5)) - 1e-6;
    double best_r = 0.5 * rmax, best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 120; ++i) {
        double r = rmax * i / 121.0;
        double s = score(r);
        if (s < best) {
            best = s;
            best_r = r;
        }
    }
    return best_r;
}
}  // namespace

double best_radius_standard(const FieldModel& m, double speed, double x_norm) {
    return best_radius(speed, 1.0, [&](double r) {
        BoundContext b = BoundContext::from_model(m, speed, x_norm, r);
        return std::max(
            contraction_condition_standard(b),
            std::max(std::max(lambda_free(b), lambda_norm(b) / r),
                     std::max(lambda_contraction(b), lambda_estimates(b))));
    });
}

double best_radius_modified(const FieldModel& m, double speed, double x_norm) {
    return best_radius(speed, 0.5, [&](double r) {
        BoundContext b = BoundContext::from_model(m, speed, x_norm, r);
        return std::max(contraction_condition_modified(b),
                        std::max(std::max(lambda_norm_mod(b) / r, lambda_contraction_mod(b)),
                                 forward_condition_modified(b)));
    });
}

}  // namespace relscat
