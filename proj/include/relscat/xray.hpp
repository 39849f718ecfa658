#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "relscat/quadrature.hpp"
#include "relscat/vec.hpp"

namespace relscat {

// X-ray transform P f(theta, x) = int f(t theta + x) dt and its 2-D inversion
// by filtered backprojection.

// Line integral of a decaying scalar field along t -> t*theta + x, theta a
// unit vector, x . theta = 0. decay_power certifies |f| = O(|y|^{-p}), p > 1.
double xray_forward(const std::function<double(const Vec&)>& f, const Vec& theta,
                    const Vec& x, double tol, double decay_power);

// Scalar sinogram: K directions theta_j = (cos(pi j/K), sin(pi j/K)) over
// [0, pi), M signed offsets u_m = (m - (M-1)/2) * (2L/M) along theta^perp.
struct Sinogram {
    int K = 0, M = 0;
    double L = 0.0;
    std::vector<double> v;  // K*M values, row j = angle j

    Sinogram() = default;
    Sinogram(int K_, int M_, double L_) : K(K_), M(M_), L(L_), v(K_ * M_, 0.0) {}
    double& at(int j, int m) { return v[j * M + m]; }
    double at(int j, int m) const { return v[j * M + m]; }
    double angle(int j) const { return M_PI * j / K; }
    Vec theta(int j) const { return Vec{std::cos(angle(j)), std::sin(angle(j))}; }
    Vec theta_perp(int j) const { return Vec{-std::sin(angle(j)), std::cos(angle(j))}; }
    double offset(int m) const { return (m - 0.5 * (M - 1)) * (2.0 * L / M); }
    double spacing() const { return 2.0 * L / M; }

    Sinogram& operator+=(const Sinogram& o);
    Sinogram& operator-=(const Sinogram& o);
};

// Forward sinogram of a scalar field (n = 2).
Sinogram sinogram_forward(const std::function<double(const Vec&)>& f, int K, int M,
                          double L, double tol, double decay_power);

struct ReconstructionGrid {
    int N = 0;
    double L = 0.0;
    std::vector<double> v;  // N*N values, row-major, cell centers
    std::optional<std::vector<double>> ground_truth;

    ReconstructionGrid() = default;
    ReconstructionGrid(int N_, double L_) : N(N_), L(L_), v(N_ * N_, 0.0) {}
    double& at(int i, int j) { return v[i * N + j]; }
    double at(int i, int j) const { return v[i * N + j]; }
    // cell center of row i (y), column j (x)
    double coord(int idx) const { return (idx + 0.5) * (2.0 * L / N) - L; }

    void set_ground_truth(const std::function<double(const Vec&)>& f);
    double rms_rel_error() const;  // vs ground truth
};

// Filtered backprojection with the band-limited ramp filter and linear
// interpolation; n = 2 only. Requires K >= 64, M >= 128.
ReconstructionGrid xray_invert(const Sinogram& sino, int N);

}  // namespace relscat
