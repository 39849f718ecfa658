#pragma once

#include "relscat/errors.hpp"
#include "relscat/vec.hpp"

namespace relscat {

class FieldModel;

// Velocity map g : R^n -> B(0,c), impulse map g^{-1} : B(0,c) -> R^n, and the
// speed threshold function mu. All pure and thread-safe.

inline Vec g_map(const Vec& p, double c) {
    return p * (1.0 / std::sqrt(1.0 + norm2(p) / (c * c)));
}

// Rejects |v| >= c(1 - 1e-14); the high-energy sweeps sample speeds close to c
// and need a guard against overflow of the Lorentz factor.
inline Vec g_inv(const Vec& v, double c) {
    double s2 = norm2(v) / (c * c);
    if (s2 >= (1.0 - 1e-14) * (1.0 - 1e-14))
        throw SpeedExceeded("g_inv: |v| too close to or above c");
    return v * (1.0 / std::sqrt(1.0 - s2));
}

// Row i of the Jacobian of g.
inline Vec grad_g_row(const Vec& p, double c, int i) {
    double u = 1.0 + norm2(p) / (c * c);
    double su = std::sqrt(u);
    Vec r = p * (-p[i] / (c * c * u * su));
    r[i] += 1.0 / su;
    return r;
}

inline double mu_threshold(double sigma, double c) {
    if (sigma < 0.0) throw NegativeInput("mu: sigma must be nonnegative");
    double a = sigma / (c * c);
    return std::sqrt(2.0 * sigma / (a + std::sqrt(a * a + 4.0)));
}

struct KinState {
    Vec x;
    Vec v;
    Vec p;  // cached g_inv(v)

    static KinState from_xv(const Vec& x, const Vec& v, double c) {
        return KinState{x, v, g_inv(v, c)};
    }
};

// Total energy c^2 sqrt(1+|p|^2/c^2) + V(x); an integral of the motion.
double energy(const FieldModel& model, const KinState& state);

}  // namespace relscat
