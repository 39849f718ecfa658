#include "relscat/richardson.hpp"

#include <algorithm>
#include <cmath>

namespace relscat {

PolyExtrapolation extrapolate_poly(const std::vector<double>& h,
                                   const std::vector<Vec>& y, int degree) {
    const int m = static_cast<int>(h.size());
    if (m == 0 || y.size() != h.size())
        throw ExtrapolationDiverged("extrapolate_poly: empty or mismatched input");
    if (degree + 1 > m) degree = m - 1;
    const int d = degree + 1;
    const int dim = y[0].size();

    double hmax = 0.0;
    for (double v : h) hmax = std::max(hmax, std::abs(v));
    if (hmax == 0.0) hmax = 1.0;

    // normal equations in the scaled variable
    double A[8][8] = {};
    std::vector<Vec> rhs(d, Vec::zero(dim));
    for (int s = 0; s < m; ++s) {
        double u = h[s] / hmax;
        double pi = 1.0;
        double pows[8];
        for (int i = 0; i < d; ++i) {
            pows[i] = pi;
            pi *= u;
        }
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) A[i][j] += pows[i] * pows[j];
            axpy(rhs[i], pows[i], y[s]);
        }
    }
    // Gaussian elimination with partial pivoting (d <= 8)
    for (int col = 0; col < d; ++col) {
        int best = col;
        for (int rr = col + 1; rr < d; ++rr)
            if (std::abs(A[rr][col]) > std::abs(A[best][col])) best = rr;
        std::swap(A[col], A[best]);
        std::swap(rhs[col], rhs[best]);
        if (A[col][col] == 0.0)
            throw ExtrapolationDiverged("extrapolate_poly: singular normal equations");
        for (int rr = col + 1; rr < d; ++rr) {
            double f = A[rr][col] / A[col][col];
            if (f == 0.0) continue;
            for (int cc = col; cc < d; ++cc) A[rr][cc] -= f * A[col][cc];
            axpy(rhs[rr], -f, rhs[col]);
        }
    }
    std::vector<Vec> coef(d, Vec::zero(dim));
    for (int rr = d - 1; rr >= 0; --rr) {
        Vec s = rhs[rr];
        for (int cc = rr + 1; cc < d; ++cc) axpy(s, -A[rr][cc], coef[cc]);
        coef[rr] = s * (1.0 / A[rr][rr]);
    }

    PolyExtrapolation out;
    out.value = coef[0];
    double acc = 0.0;
    for (int s = 0; s < m; ++s) {
        double u = h[s] / hmax;
        Vec fit = Vec::zero(dim);
        double pi = 1.0;
        for (int i = 0; i < d; ++i) {
            axpy(fit, pi, coef[i]);
            pi *= u;
        }
        acc += norm2(fit - y[s]);
    }
    out.rms_residual = std::sqrt(acc / (m * dim));
    return out;
}

PowerLawExtrapolation extrapolate_power(const Vec& g_quarter, const Vec& g_half,
                                        const Vec& g_full, double atol) {
    PowerLawExtrapolation out;
    Vec d1 = g_half - g_quarter;
    Vec d2 = g_full - g_half;
    double n1 = norm(d1), n2 = norm(d2);
    if (n1 <= atol || n2 <= atol) {
        // differences at the noise floor: the sequence is as converged as the
        // data allows, extrapolating would amplify noise
        out.value = g_full;
        return out;
    }
    if (!(n2 < 0.95 * n1))
        throw ExtrapolationDiverged("extrapolate_power: differences are not Cauchy");
    double ratio = n2 / n1;  // = 2^{-p}
    out.exponent = -std::log2(ratio);
    out.value = g_full + d2 * (ratio / (1.0 - ratio));
    out.extrapolated = true;
    return out;
}

}  // namespace relscat
