#pragma once

#include <array>
#include <string>
#include <vector>

#include "relscat/errors.hpp"
#include "relscat/vec.hpp"

namespace relscat {

// Electromagnetic field family with the long/short-range split
//   F = F^l + F^s,  F^{l,s}(x,v) = -grad V^{l,s}(x) + (1/c) B^{l,s}(x) v,
// analytic derivatives, and decay constants beta certified at construction.
//
// Builtin families (all smooth on R^n):
//   zero          everything vanishes
//   soft_coulomb  V^l = q_l (1+|x|^2)^{-a/2},  V^s = q_s (1+|x|^2)^{-(a+1)/2},
//                 B^l profile (1+|x|^2)^{-(a+1)/2} (n=2 single component,
//                 n>=3 built from an azimuthal vector potential), B^s one
//                 power faster
//   gauss_short   long part as soft_coulomb (q_l, m_l); short part a Gaussian
//                 bump potential and, for n=2, an optional Gaussian B^s_{12}

enum class FieldFamily { zero, soft_coulomb, gauss_short };

struct FieldParams {
    FieldFamily family = FieldFamily::zero;
    double q_l = 0.0, q_s = 0.0;  // potential amplitudes
    double m_l = 0.0, m_s = 0.0;  // magnetic amplitudes
    double gauss_amp = 0.0;
    Vec gauss_center;             // defaults to origin if empty
    double gauss_width = 1.0;
    double gauss_b_amp = 0.0;     // n=2 only
};

struct DecayConstants {
    std::array<double, 3> beta_l{0.0, 0.0, 0.0};  // beta^l_0, beta^l_1, beta^l_2
    std::array<double, 3> beta_s{0.0, 0.0, 0.0};  // beta^s_1, beta^s_2, beta^s_3
};

struct FieldEval {
    double Vl = 0.0, Vs = 0.0;
    Vec grad_Vl, grad_Vs;
    Mat Bl, Bs;
};

class FieldModel {
public:
    FieldModel(int n, double c, double alpha, FieldParams par);

    int dim() const { return n_; }
    double light_speed() const { return c_; }
    double alpha() const { return alpha_; }
    const FieldParams& params() const { return par_; }
    const DecayConstants& betas() const { return betas_; }

    double beta1_l() const { return betas_.beta_l[1]; }
    double beta2_l() const { return betas_.beta_l[2]; }
    double beta2_s() const { return betas_.beta_s[1]; }
    double beta3_s() const { return betas_.beta_s[2]; }

    double Vl(const Vec& x) const;
    double Vs(const Vec& x) const;
    double V(const Vec& x) const { return Vl(x) + Vs(x); }
    Vec grad_Vl(const Vec& x) const;
    Vec grad_Vs(const Vec& x) const;
    Mat hess_Vl(const Vec& x) const;
    Mat hess_Vs(const Vec& x) const;
    Mat Bl(const Vec& x) const;
    Mat Bs(const Vec& x) const;
    Mat Bl_partial(const Vec& x, int j) const;  // d/dx_j of B^l entrywise
    Mat Bs_partial(const Vec& x, int j) const;

    FieldEval eval(const Vec& x) const;

    // Total, long and short forces; v must satisfy |v| <= c.
    Vec force(const Vec& x, const Vec& v) const;
    Vec force_long(const Vec& x, const Vec& v) const;
    Vec force_short(const Vec& x, const Vec& v) const;

    bool long_range_zero() const;
    bool short_range_zero() const;

    FieldModel long_range_only() const;
    FieldModel scaled(double s) const;
    // Test hook: same fields, stored betas multiplied by s.
    FieldModel with_betas_scaled(double s) const;

private:
    void check_speed(const Vec& v) const;
    void compute_betas();

    int n_;
    double c_;
    double alpha_;
    FieldParams par_;
    DecayConstants betas_;
};

struct DecayReport {
    struct Row {
        std::string bound;
        double max_ratio;
        bool pass;
    };
    std::vector<Row> rows;
    double max_ratio = 0.0;
    bool pass = true;
};

// Checks the sampled decay bounds against the stored beta constants;
// pass iff every ratio <= 1 + 1e-8.
DecayReport verify_decay(const FieldModel& model, const std::vector<Vec>& probes);

// Max over probes and index triples of the closure-condition residual,
// analytic derivatives.
double verify_closure(const FieldModel& model, const std::vector<Vec>& probes);
// Same with central finite differences of the B entries.
double verify_closure_fd(const FieldModel& model, const std::vector<Vec>& probes);

// Log-spaced radial probe set out to |x| = 1e4 in a few fixed directions.
std::vector<Vec> default_probes(int n, int per_direction = 160);

}  // namespace relscat
