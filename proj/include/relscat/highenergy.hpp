#pragma once

#include <utility>
#include <vector>

#include "relscat/modified.hpp"
#include "relscat/scattering.hpp"
#include "relscat/xray.hpp"

namespace relscat {

enum class DataMode { standard, modified };

// Extrapolates (rho/sqrt(1-rho^2/c^2)) * datum to the light-speed limit in the
// variable h = sqrt(1-rho^2/c^2); the error bounds are first order in h after
// the rescaling, so the default polynomial degree is 1.
struct RayExtraction {
    Vec J;                // estimated line integral of the force
    double fit_residual;  // rms residual of the polynomial fit
};

RayExtraction extract_ray(const std::vector<double>& rhos,
                          const std::vector<Vec>& data, double c, int degree = 1);

// Leading Born terms of the scattering data at fixed energy: the a-term and
// the (b - W)-term, as explicit line integrals along tau -> tau rho theta + x.
struct BornTerms {
    Vec a_term;
    Vec b_term;
};

BornTerms born_terms(const FieldModel& model, const Vec& theta, const Vec& x,
                     double rho, double quad_tol = 1e-12);

// Direct line integrals used as targets and for tail subtraction.
Vec line_integral_force(const FieldModel& model, const Vec& theta, const Vec& x,
                        double speed, double quad_tol = 1e-12);
Vec line_integral_force_long(const FieldModel& model, const Vec& theta, const Vec& x,
                             double speed, double quad_tol = 1e-12);
Vec line_integral_force_short(const FieldModel& model, const Vec& theta, const Vec& x,
                              double speed, double quad_tol = 1e-12);
// First-moment line integral -int tau F^s(tau theta + x, speed theta) dtau
// (the collapsed iterated double integrals) and P V^s(theta, x).
Vec weighted_short_moment(const FieldModel& model, const Vec& theta, const Vec& x,
                          double speed, double quad_tol = 1e-12);
double line_integral_Vs(const FieldModel& model, const Vec& theta, const Vec& x,
                        double quad_tol = 1e-12);

struct HighEnergyRow {
    Vec theta, x;
    double rho = 0.0;
    // rescaled a-side: (rho/h) a_sc (or (rho/h)(a~_sc - W~)), its fixed-rho
    // target, the residual and the closed-form bound on the same scale
    Vec lhs_a, target_a;
    double resid_a = 0.0, bound_a = 0.0;
    bool pass_a = false;
    // rescaled b-side: (rho^2/h)(b_sc - W) (or (rho^2/h) b~_sc)
    Vec lhs_b, target_b;
    double resid_b = 0.0, bound_b = 0.0;
    bool pass_b = false;
};

struct HighEnergyReport {
    std::vector<HighEnergyRow> rows;
    bool all_pass = true;
};

struct VerifyOptions {
    double r = 0.0;  // 0 = grid-searched admissible radius
    double picard_tol = 1e-10;
    double quad_tol = 1e-12;
    Mode mode = Mode::strict;
    std::shared_ptr<const TimeGrid> grid;
};

// Residuals of the high-energy error bounds on a set of rays; strict mode
// requires every speed to exceed rho_0 (standard) or rho~_0 (modified).
HighEnergyReport verify_high_energy(const FieldModel& model,
                                    const std::vector<std::pair<Vec, Vec>>& rays,
                                    const std::vector<double>& rhos, DataMode mode,
                                    const VerifyOptions& opt = {});

// End-to-end inverse problem (n = 2): synthetic sweeps of the full model,
// extraction of force line integrals, long-range tail subtraction using only
// F^l, and filtered backprojection per force component at the light-speed
// velocity argument.
struct ReconstructOptions {
    int angles = 180;
    int offsets = 192;
    double extent = 4.0;
    int grid_n = 128;
    std::vector<double> rhos = {0.99, 0.999, 0.9999};
    double picard_tol = 1e-8;
    double quad_tol = 1e-9;
    int grid_nodes = 201;
    int threads = 0;  // 0 = hardware
    int degree = 1;
};

struct ReconstructResult {
    std::vector<ReconstructionGrid> components;  // one per force component
    std::vector<double> rms_component;
    double rms_total = 0.0;
    double max_fit_residual = 0.0;
};

ReconstructResult reconstruct_Fs(const FieldModel& truth, const ReconstructOptions& opt);

}  // namespace relscat
