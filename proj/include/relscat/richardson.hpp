#pragma once

#include <vector>

#include "relscat/errors.hpp"
#include "relscat/vec.hpp"

namespace relscat {

// Polynomial extrapolation to h = 0 by least squares in a scaled variable.
// With degree + 1 sample points this reduces to exact polynomial
// interpolation; with more points the fit residual is a quality signal.
struct PolyExtrapolation {
    Vec value;            // limit estimate at h = 0
    double rms_residual;  // rms of the fit residuals over all samples
};

PolyExtrapolation extrapolate_poly(const std::vector<double>& h,
                                   const std::vector<Vec>& y, int degree);

// Three-point extrapolation of a power-law approach f(T) = b + C T^{-p},
// samples at T/4, T/2, T. The exponent is estimated from the difference
// ratio; throws ExtrapolationDiverged when the sequence is not Cauchy.
struct PowerLawExtrapolation {
    Vec value;
    double exponent = 0.0;
    bool extrapolated = false;  // false when differences sat below atol
};

PowerLawExtrapolation extrapolate_power(const Vec& g_quarter, const Vec& g_half,
                                        const Vec& g_full, double atol);

}  // namespace relscat
