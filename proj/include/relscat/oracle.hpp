#pragma once

#include "relscat/free_dynamics.hpp"
#include "relscat/ode.hpp"

namespace relscat {

// Independent verification path: direct adaptive Runge-Kutta integration of
// the equation of motion from matched far-field data, with power-law
// extrapolation of the asymptotes. Shares nothing with the Picard route
// except the free solutions that define the asymptotics.

struct OracleOptions {
    double T = 400.0;       // integration horizon [-T, T]
    double tol = 1e-11;     // local ODE tolerance
    double free_tol = 1e-11;
    Mode mode = Mode::empirical;
    std::shared_ptr<const TimeGrid> grid;
    bool anchor_at_x = false;  // start from z_-(v_-, x_-, .) instead of z_- + x_-
};

struct OracleResult {
    Vec a_est, b_est;
    double energy_drift_rel = 0.0;
    double a_seq_exponent = 0.0;  // fitted decay power of the a-sequence
    double b_seq_exponent = 0.0;
    OdeStats stats;
    // state snapshots (position and velocity) at requested times
    std::vector<double> snap_times;
    std::vector<Vec> snap_pos, snap_vel;
};

OracleResult ode_oracle(const FieldModel& model, const Vec& v_minus,
                        const Vec& x_minus, const OracleOptions& opt = {},
                        const FreeTrajectory* z_minus = nullptr,
                        const std::vector<double>& extra_snaps = {});

}  // namespace relscat
