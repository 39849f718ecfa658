#include "relscat/xray.hpp"

#include <cmath>

#include "relscat/errors.hpp"

namespace relscat {

double xray_forward(const std::function<double(const Vec&)>& f, const Vec& theta,
                    const Vec& x, double tol, double decay_power) {
    double tn = norm(theta);
    if (std::abs(tn - 1.0) > 1e-10)
        throw ConditionViolated("xray_forward: theta must be a unit vector");
    if (std::abs(dot(theta, x)) > 1e-10 * std::max(1.0, norm(x)))
        throw NonPerpendicular("xray_forward: x must be orthogonal to theta");
    if (!(decay_power > 1.0))
        throw SlowDecay("xray_forward: integrand decays too slowly for a line integral");
    AdaptOptions opt;
    opt.abs_tol = tol;
    auto g = [&](double t) { return Vec{f(theta * t + x)}; };
    return integrate_real_line(g, 1, opt).value[0];
}

Sinogram& Sinogram::operator+=(const Sinogram& o) {
    for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
}

Sinogram& Sinogram::operator-=(const Sinogram& o) {
    for (size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}

Sinogram sinogram_forward(const std::function<double(const Vec&)>& f, int K, int M,
                          double L, double tol, double decay_power) {
    Sinogram s(K, M, L);
    for (int j = 0; j < K; ++j) {
        Vec th = s.theta(j);
        Vec tp = s.theta_perp(j);
        for (int m = 0; m < M; ++m)
            s.at(j, m) = xray_forward(f, th, tp * s.offset(m), tol, decay_power);
    }
    return s;
}

void ReconstructionGrid::set_ground_truth(const std::function<double(const Vec&)>& f) {
    ground_truth.emplace(N * N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            (*ground_truth)[i * N + j] = f(Vec{coord(j), coord(i)});
}

double ReconstructionGrid::rms_rel_error() const {
    if (!ground_truth) throw Error("rms_rel_error: no ground truth stored");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double d = v[i] - (*ground_truth)[i];
        num += d * d;
        den += (*ground_truth)[i] * (*ground_truth)[i];
    }
    if (den == 0.0) return std::sqrt(num / v.size());
    return std::sqrt(num / den);
}

ReconstructionGrid xray_invert(const Sinogram& sino, int N) {
    if (sino.K < 64 || sino.M < 128)
        throw InsufficientSampling("xray_invert: need K >= 64 angles and M >= 128 offsets");
    const int K = sino.K, M = sino.M;
    const double d = sino.spacing();

    // band-limited ramp filter (spatial form): h(0) = 1/(4 d^2),
    // h(k d) = 0 for even k, -1/(pi^2 k^2 d^2) for odd k
    std::vector<double> h(2 * M, 0.0);
    for (int k = -M + 1; k < M; ++k) {
        double val;
        if (k == 0)
            val = 1.0 / (4.0 * d * d);
        else if (k % 2 == 0)
            val = 0.0;
        else
            val = -1.0 / (M_PI * M_PI * k * k * d * d);
        h[k + M] = val;
    }

    // filter each angle: q[m] = d * sum_k s[k] h[m-k]
    std::vector<double> filt(K * M, 0.0);
    for (int j = 0; j < K; ++j) {
        for (int m = 0; m < M; ++m) {
            double acc = 0.0;
            for (int k = 0; k < M; ++k) acc += sino.at(j, k) * h[m - k + M];
            filt[j * M + m] = acc * d;
        }
    }

    // backproject with linear interpolation in the offset variable
    ReconstructionGrid grid(N, sino.L);
    const double dphi = M_PI / K;
    const double u0 = -0.5 * (M - 1) * d;
    for (int j = 0; j < K; ++j) {
        double sn = std::sin(sino.angle(j)), cs = std::cos(sino.angle(j));
        const double* qrow = &filt[j * M];
        for (int iy = 0; iy < N; ++iy) {
            double y = grid.coord(iy);
            for (int ix = 0; ix < N; ++ix) {
                double x = grid.coord(ix);
                // offset coordinate of the point along theta^perp
                double u = -sn * x + cs * y;
                double pos = (u - u0) / d;
                int m0 = static_cast<int>(std::floor(pos));
                if (m0 < 0 || m0 >= M - 1) continue;
                double w = pos - m0;
                grid.at(iy, ix) += (1.0 - w) * qrow[m0] + w * qrow[m0 + 1];
            }
        }
    }
    for (double& g : grid.v) g *= dphi;
    return grid;
}

}  // namespace relscat
