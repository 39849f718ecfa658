#pragma once

#include "relscat/scattering.hpp"

namespace relscat {

// Modified scattering map: the deflection operator on M_{r,v_-,x_-} for the
// free solution anchored at x_-, the data a~ = k~(v_-,x_-,y_-), the
// 1/6-contraction producing b~_sc, and the correction W~. This
// parametrization has large-|x_-| asymptotics the standard map lacks.

struct ModifiedDatum {
    Vec v_minus, x_minus;
    Vec a_tilde, a_tilde_sc;
    Vec b_tilde, b_tilde_sc;
    Vec W_tilde;
    double r = 0.0;
    SolveDiag diag;    // deflection iteration
    SolveDiag g_diag;  // b~ fixed-point iteration
};

struct ModifiedOptions {
    double r = 0.0;  // 0 = default radius (capped below 1/2)
    double picard_tol = 1e-10;
    double quad_tol = 1e-12;
    Mode mode = Mode::strict;
    std::shared_ptr<const TimeGrid> grid;
    int max_iter = 200;
    int max_g_iter = 50;
    bool with_b_tilde = true;
    bool with_W_tilde = true;
    const GridCurve* warm = nullptr;
};

struct ModifiedSolution {
    ModifiedDatum datum;
    GridCurve y_minus;
    double norm_star_y = 0.0;
    std::shared_ptr<FreeTrajectory> z_minus;  // z_-(v_-, x_-, .)
    GridCurve J;       // int_{-inf}^t F(z_- + y_-) along the solution
    Vec J_total;
    GridCurve J_l;     // int_{-inf}^t F^l(z_-)
    std::shared_ptr<FreeTrajectory> z_plus;   // z_+(a~, x_- + b~_sc, .)
    GridCurve y_plus;  // h(v_-, x_-, b~_sc, .) for t >= 0
};

// Weighted norm of the modified deflection space, evaluated on the grid.
double norm_star(const GridCurve& f, double v_norm, double x_norm, double r);

ModifiedSolution solve_modified(const FieldModel& model, const Vec& v_minus,
                                const Vec& x_minus, const ModifiedOptions& opt = {});

Vec modified_pos(const ModifiedSolution& s, double t);
Vec modified_vel(const ModifiedSolution& s, double t);

// One evaluation of the outgoing-offset map G at q (|q| <= 1/2), using the
// converged deflection in s. The fixed point of G is b~_sc; sampling G at two
// points measures its Lipschitz factor directly.
Vec modified_G_at(const FieldModel& model, const ModifiedSolution& s, const Vec& q,
                  double quad_tol = 1e-12);

}  // namespace relscat
