#pragma once

#include <algorithm>
#include <cmath>

#include "relscat/field.hpp"

namespace relscat {

// Closed-form admissibility constants and error envelopes of the contraction
// analysis, evaluated from the model's certified decay constants. These are
// the oracles the solver outputs are tested against, and the admissibility
// gates for strict mode.

struct BoundContext {
    int n = 2;
    double c = 1.0;
    double alpha = 1.0;
    double beta1_l = 0.0, beta2_l = 0.0;  // long-range constants
    double beta2_s = 0.0, beta3_s = 0.0;  // short-range constants
    double speed = 0.0;                   // |v_-| (or rho)
    double x_norm = 0.0;                  // |x_-|
    double r = 0.25;                      // contraction-space radius

    static BoundContext from_model(const FieldModel& m, double speed,
                                   double x_norm, double r);

    double beta2() const { return std::max(beta2_l, beta2_s); }
    double beta_max() const { return std::max(beta1_l, std::max(beta2(), beta3_s)); }
    double gamma() const { return std::sqrt(1.0 - speed * speed / (c * c)); }
    double vtil() const { return speed / (2.0 * std::sqrt(2.0)) - r; }  // |v|/2^{3/2} - r
};

// Standard map (operator A on M_{r,v_-}).
double contraction_condition_standard(const BoundContext&);
double lambda_free(const BoundContext&);
double lambda_norm(const BoundContext&);      // norm estimate ||A(f)||
double lambda_contraction(const BoundContext&);      // contraction factor
double lambda_estimates(const BoundContext&); // lambda3
double strict_majorant_standard(const BoundContext&); // common majorant of the four lambdas
bool strict_ok_standard(const BoundContext&);

double bound_incoming_deflection(const BoundContext&, double t);  // |y_-'(t)|, t <= 0
double bound_a_sc(const BoundContext&);            // |a_sc|
double bound_b_sc(const BoundContext&);            // |b_sc|
double bound_outgoing_deflection(const BoundContext&, double t);  // |y_+'(t)|, t >= 0
double bound_born_a(const BoundContext&);             // Born residual of a_sc
double bound_born_b(const BoundContext&);             // Born residual of b_sc - W
double bound_highenergy_a(const BoundContext&);            // rescaled high-energy form
double bound_highenergy_b(const BoundContext&);

// Modified map (operator on M_{r,v_-,x_-}).
double contraction_condition_modified(const BoundContext&);
double lambda_norm_mod(const BoundContext&);
double lambda_contraction_mod(const BoundContext&);
double bound_k_tilde_sc(const BoundContext&);    // |k~ - v_-|
double forward_condition_modified(const BoundContext&);
double strict_majorant_modified(const BoundContext&);
bool strict_ok_modified(const BoundContext&);

double bound_offset_map(const BoundContext&);   // |G(q)| bound (must be <= 1/2)
double lipschitz_offset_map(const BoundContext&);  // Lipschitz factor (must be <= 1/6)

double bound_incoming_deflection_mod(const BoundContext&, double t);
double bound_a_tilde_sc(const BoundContext&);
double bound_b_tilde_sc(const BoundContext&);
double bound_outgoing_deflection_mod(const BoundContext&, double t);
double bound_born_a_mod(const BoundContext&);
double bound_born_b_mod(const BoundContext&);

// Minimal speeds above which the error bounds are guaranteed: unique roots of
// the threshold equations on (2^{3/2} r, c), found by bisection to
// |rhs - 1| <= 1e-12.
double rho0(int n, double c, double alpha_t, double beta_t, double sigma, double r);
double rho0_tilde(int n, double c, double alpha_t, double beta_t, double sigma,
                  double r);
double rho0_rhs(int n, double c, double alpha_t, double beta_t, double sigma,
                double r, double rho);
double rho0_tilde_rhs(int n, double c, double alpha_t, double beta_t, double sigma,
                      double r, double rho);

// Default contraction radius and a small grid search minimizing the strict
// admissibility majorant over r.
double default_radius(double speed);
double best_radius_standard(const FieldModel&, double speed, double x_norm);
double best_radius_modified(const FieldModel&, double speed, double x_norm);

}  // namespace relscat
