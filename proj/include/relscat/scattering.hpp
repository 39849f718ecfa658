#pragma once

#include <memory>
#include <optional>

#include "relscat/bounds.hpp"
#include "relscat/field.hpp"
#include "relscat/free_dynamics.hpp"

namespace relscat {

// Standard scattering map: deflection fixed point y_- = A(y_-) on M_{r,v_-},
// scattering data (a, b, a_sc, b_sc), and the long-range correction W.

struct SolveOptions {
    double r = 0.0;              // 0 = default radius
    double picard_tol = 1e-10;
    double quad_tol = 1e-12;
    Mode mode = Mode::strict;
    std::shared_ptr<const TimeGrid> grid;  // defaults to shared 401-node grid
    int max_iter = 200;
    bool with_b = true;          // compute y_+ and b
    bool with_W = true;          // compute the correction W
    const GridCurve* warm = nullptr;
    // sweep accelerators: z_-(v_-, .) and its long-force cumulative depend
    // only on (direction, speed), so ray batches can share them
    std::shared_ptr<const FreeTrajectory> z_minus_cache;
    const GridCurve* Jl_cache = nullptr;
    bool refresh_J = true;  // rebuild the cached cumulative on the converged iterate
};

struct ScatteringDatum {
    Vec v_minus, x_minus;
    Vec a, b;
    Vec a_sc, b_sc;
    Vec W;
    double r = 0.0;
    SolveDiag diag;
};

struct DeflectionSolution {
    GridCurve y;          // y_-
    double norm_M = 0.0;  // weighted norm of the fixed point
    double residual_M = 0.0;
    SolveDiag diag;
    double r = 0.0;
    Vec v_minus, x_minus;
    std::shared_ptr<const FreeTrajectory> z_minus;
    GridCurve J;          // cumulative int_{-inf}^t F(x)(tau) dtau along the solution
    Vec J_total;          // full-line integral of F along the solution
};

// Weighted norm on the deflection space: sup_{t<0} w(t)|f'(t)|, sup_{t>0}|f'|,
// sup_{t<0}|f| with w(t) = max(1, 1-r+(|v|/2sqrt2 - r)|t|), evaluated on the
// sample grid.
double norm_M(const GridCurve& f, double v_norm, double r);

DeflectionSolution solve_deflection(const FieldModel& model, const Vec& v_minus,
                                    const Vec& x_minus, const SolveOptions& opt = {});

struct ScatteringSolution {
    ScatteringDatum datum;
    DeflectionSolution defl;
    std::shared_ptr<FreeTrajectory> z_plus;  // set when with_b or with_W
    GridCurve y_plus;                        // valid for t >= 0 when with_b
    GridCurve R_x;  // cumulative int_t^{+inf} F(x) along the solution
    GridCurve R_z;  // cumulative int_t^{+inf} F^l(z_+) when with_b
};

// Full pipeline for one ray: deflection solve, then a via the impulse
// integral, y_+ and b via the forward decomposition, optionally W.
ScatteringSolution solve_scattering(const FieldModel& model, const Vec& v_minus,
                                    const Vec& x_minus, const SolveOptions& opt = {});

// Long-range correction W(v, x): four-term double improper integral over the
// free solutions z_-(v, .) and z_+(a(v,x), .).
Vec compute_W(const FieldModel& model, const Vec& v, const Vec& x, const Vec& a,
              const FreeTrajectory& z_minus, const FreeTrajectory& z_plus,
              double quad_tol);

// Trajectory of the scattering solution x(t) = z_-(t) + x_- + y_-(t).
Vec solution_pos(const ScatteringSolution& s, double t);
Vec solution_vel(const ScatteringSolution& s, double t);

}  // namespace relscat
