#pragma once

#include <functional>
#include <vector>

#include "relscat/errors.hpp"

namespace relscat {

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients, with a
// standard PI-free step controller. States are flat double arrays.

using OdeRhs = std::function<void(double t, const std::vector<double>& y,
                                  std::vector<double>& dy)>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 0.0;   // 0 = pick from tolerances
    double h_min = 1e-14;
    long max_steps = 50'000'000;
};

struct OdeStats {
    long steps = 0;
    long rejected = 0;
};

// Integrates from t0 to t1 (either direction). report(t, y) is called at t0,
// at every time in `report_at` (hit exactly, must be sorted in the direction
// of integration), and at t1.
OdeStats ode_integrate(const OdeRhs& rhs, double t0, std::vector<double> y,
                       double t1, const OdeOptions& opt,
                       const std::vector<double>& report_at,
                       const std::function<void(double, const std::vector<double>&)>& report);

}  // namespace relscat
