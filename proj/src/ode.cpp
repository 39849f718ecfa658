#include "relscat/ode.hpp"

#include <algorithm>
#include <cmath>

namespace relscat {

namespace {
// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
constexpr double e4 = 125.0 / 192 - 393.0 / 640;
constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
constexpr double e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
}  // namespace

OdeStats ode_integrate(const OdeRhs& rhs, double t0, std::vector<double> y,
                       double t1, const OdeOptions& opt,
                       const std::vector<double>& report_at,
                       const std::function<void(double, const std::vector<double>&)>& report) {
    const size_t n = y.size();
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    if (report) report(t0, y);
    size_t next_report = 0;
    while (next_report < report_at.size() &&
           dir * (report_at[next_report] - t0) <= 0.0)
        ++next_report;

    double t = t0;
    double h = opt.h_init != 0.0 ? std::abs(opt.h_init)
                                 : std::max(1e-6, std::pow(opt.rel_tol, 0.25) * 0.1);
    h *= dir;
    rhs(t, y, k1);
    OdeStats stats;

    auto stage = [&](std::vector<double>& out, double cc, auto... terms) {
        (void)cc;
        for (size_t i = 0; i < n; ++i) {
            double s = 0.0;
            ((s += terms.first * (*terms.second)[i]), ...);
            out[i] = y[i] + h * s;
        }
    };

    while (dir * (t1 - t) > 0.0) {
        double target = t1;
        if (next_report < report_at.size() &&
            dir * (report_at[next_report] - t1) <= 0.0)
            target = report_at[next_report];
        bool hits_target = dir * (t + h - target) >= 0.0;
        double h_free = h;  // controller step, kept across target clamping
        if (hits_target) h = target - t;
        if (std::abs(h) < opt.h_min)
            throw StepFailure("ode_integrate: step size underflow");
        if (++stats.steps > opt.max_steps)
            throw StepFailure("ode_integrate: step budget exceeded");

        stage(ytmp, c2, std::pair{a21, &k1});
        rhs(t + c2 * h, ytmp, k2);
        stage(ytmp, c3, std::pair{a31, &k1}, std::pair{a32, &k2});
        rhs(t + c3 * h, ytmp, k3);
        stage(ytmp, c4, std::pair{a41, &k1}, std::pair{a42, &k2}, std::pair{a43, &k3});
        rhs(t + c4 * h, ytmp, k4);
        stage(ytmp, c5, std::pair{a51, &k1}, std::pair{a52, &k2}, std::pair{a53, &k3},
              std::pair{a54, &k4});
        rhs(t + c5 * h, ytmp, k5);
        stage(ytmp, 1.0, std::pair{a61, &k1}, std::pair{a62, &k2}, std::pair{a63, &k3},
              std::pair{a64, &k4}, std::pair{a65, &k5});
        rhs(t + h, ytmp, k6);
        stage(ynew, 1.0, std::pair{b1, &k1}, std::pair{b3, &k3}, std::pair{b4, &k4},
              std::pair{b5, &k5}, std::pair{b6, &k6});
        rhs(t + h, ynew, k7);

        double errn = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
            double sc = opt.abs_tol +
                        opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            errn += (e / sc) * (e / sc);
        }
        errn = std::sqrt(errn / n);

        if (errn <= 1.0) {
            t = hits_target ? target : t + h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            while (next_report < report_at.size() && t == report_at[next_report]) {
                if (report) report(t, y);
                ++next_report;
            }
            double fac = errn > 0.0 ? 0.9 * std::pow(errn, -0.2) : 5.0;
            h = (hits_target ? h_free : h) * std::clamp(fac, 0.2, 5.0);
        } else {
            ++stats.rejected;
            h *= std::clamp(0.9 * std::pow(errn, -0.2), 0.1, 0.9);
        }
    }
    if (report) report(t, y);
    return stats;
}

}  // namespace relscat
