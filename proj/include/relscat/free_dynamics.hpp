#pragma once

#include <memory>

#include "relscat/field.hpp"
#include "relscat/grid.hpp"
#include "relscat/kinematics.hpp"

namespace relscat {

enum class Mode { strict, empirical };
enum class Direction { past, future };

struct SolveDiag {
    int iterations = 0;
    double residual = 0.0;     // last fixed-point update in the solve norm
    double contraction = 0.0;  // observed factor (max over trailing ratios)
    bool empirical = false;    // conditions were overridden for this run
};

// Admissibility data for the free-solution existence lemma: a reference
// velocity v with v . x = 0, |v| = |w|, and the anchor split x + q, |q| < 1.
struct FreeContext {
    Vec v;
    double x_norm = 0.0;
    double q_norm = 0.0;
};

struct FreeOptions {
    double tol = 1e-11;
    int max_iter = 200;
    Mode mode = Mode::strict;
    double quad_tol = 1e-13;
    std::shared_ptr<const TimeGrid> grid;  // defaults to the shared 401-node grid
    const GridCurve* warm = nullptr;       // previous deviation as initial iterate
};

// Long-range "free" trajectory z(t) = anchor + t w + f(t) with
// velocity asymptote w in the given time direction.
struct FreeTrajectory {
    Vec w;
    Vec anchor;
    Direction dir = Direction::future;
    GridCurve dev;
    SolveDiag diag;

    Vec pos(double t) const { return anchor + w * t + dev.value_at(t); }
    Vec vel(double t) const { return w + dev.deriv_at(t); }
};

// Speed thresholds for existence of the free solutions.
double mu_l(const FieldModel& model);
double mu_l_sigma(const FieldModel& model, double sigma);

// Left-hand side of the admissibility condition for the free solve; <= 1 means
// the contraction is guaranteed.
double free_admissibility_lhs(const FieldModel& model, double v_norm,
                              double x_norm, double q_norm);
// Guaranteed deflection bound sup |z' - w|.
double free_deflection_bound(const FieldModel& model, double v_norm,
                             double x_norm, double q_norm);

// Unique solution of the long-range equation with z(0) = anchor and
// z'(t) -> w as t -> -inf (past) or +inf (future), by Picard iteration of the
// half-line contraction map.
FreeTrajectory solve_free(const FieldModel& model, const Vec& w, const Vec& anchor,
                          Direction dir, const FreeOptions& opt = {},
                          const FreeContext* ctx = nullptr);

}  // namespace relscat
