#include "relscat/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relscat {

namespace {

// Radial profiles phi(u), u = 1 + |x|^2, with first and second derivatives
// in u. Power profile: amp * u^{-p/2}.
struct PowerProfile {
    double amp, p;
    double f(double u) const { return amp * std::pow(u, -0.5 * p); }
    double fp(double u) const { return -0.5 * p * amp * std::pow(u, -0.5 * p - 1.0); }
    double fpp(double u) const {
        return 0.25 * p * (p + 2.0) * amp * std::pow(u, -0.5 * p - 2.0);
    }
};

// B built from the azimuthal vector potential A = phi(u) (-x2, x1, 0, ...):
//   B_{12} = 2 phi + 2 (x1^2+x2^2) phi'
//   B_{1k} = 2 x2 x_k phi',  B_{2k} = -2 x1 x_k phi'   (k >= 3)
// For n = 2 the plain profile B_{12} = phi(u) is used instead (any 2-form is
// closed in the plane).
void fill_B_from_profile(Mat& B, const Vec& x, double phi, double phip, int n) {
    if (n == 2) {
        B(0, 1) = phi;
        B(1, 0) = -phi;
        return;
    }
    double s12 = x[0] * x[0] + x[1] * x[1];
    double b12 = 2.0 * phi + 2.0 * s12 * phip;
    B(0, 1) = b12;
    B(1, 0) = -b12;
    for (int k = 2; k < n; ++k) {
        double b1k = 2.0 * x[1] * x[k] * phip;
        double b2k = -2.0 * x[0] * x[k] * phip;
        B(0, k) = b1k;
        B(k, 0) = -b1k;
        B(1, k) = b2k;
        B(k, 1) = -b2k;
    }
}

void fill_B_partial_from_profile(Mat& dB, const Vec& x, int j, double phip,
                                 double phipp, int n) {
    if (n == 2) {
        double d = 2.0 * x[j] * phip;
        dB(0, 1) = d;
        dB(1, 0) = -d;
        return;
    }
    double s12 = x[0] * x[0] + x[1] * x[1];
    double d12 = 4.0 * x[j] * phip + 4.0 * s12 * x[j] * phipp;
    if (j == 0) d12 += 4.0 * x[0] * phip;
    if (j == 1) d12 += 4.0 * x[1] * phip;
    dB(0, 1) = d12;
    dB(1, 0) = -d12;
    for (int k = 2; k < n; ++k) {
        double d1k = 4.0 * x[1] * x[k] * x[j] * phipp;
        if (j == 1) d1k += 2.0 * x[k] * phip;
        if (j == k) d1k += 2.0 * x[1] * phip;
        double d2k = -4.0 * x[0] * x[k] * x[j] * phipp;
        if (j == 0) d2k -= 2.0 * x[k] * phip;
        if (j == k) d2k -= 2.0 * x[0] * phip;
        dB(0, k) = d1k;
        dB(k, 0) = -d1k;
        dB(1, k) = d2k;
        dB(k, 1) = -d2k;
    }
}

}  // namespace

FieldModel::FieldModel(int n, double c, double alpha, FieldParams par)
    : n_(n), c_(c), alpha_(alpha), par_(std::move(par)) {
    if (n < 2 || n > kMaxDim) throw ConfigError("field dimension must be in [2, 8]");
    if (c <= 0.0) throw ConfigError("light speed must be positive");
    if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
    if (par_.gauss_center.size() == 0) par_.gauss_center = Vec::zero(n);
    if (par_.gauss_center.size() != n)
        throw ConfigError("gauss_center dimension mismatch");
    if (par_.family == FieldFamily::gauss_short && par_.gauss_b_amp != 0.0 && n != 2)
        throw ConfigError("gaussian B^s is only defined for n = 2");
    if (par_.gauss_width <= 0.0) throw ConfigError("gauss_width must be positive");
    compute_betas();
}

namespace {
// beyond this radius the power-law profiles underflow; returning exact zeros
// avoids inf * 0 at astronomically large quadrature probes
inline bool far_field(double r2) { return r2 > 1e160; }
}  // namespace

double FieldModel::Vl(const Vec& x) const {
    if (par_.family == FieldFamily::zero || par_.q_l == 0.0) return 0.0;
    if (far_field(norm2(x))) return 0.0;
    double u = 1.0 + norm2(x);
    return PowerProfile{par_.q_l, alpha_}.f(u);
}

double FieldModel::Vs(const Vec& x) const {
    switch (par_.family) {
        case FieldFamily::zero:
            return 0.0;
        case FieldFamily::soft_coulomb: {
            if (par_.q_s == 0.0 || far_field(norm2(x))) return 0.0;
            double u = 1.0 + norm2(x);
            return PowerProfile{par_.q_s, alpha_ + 1.0}.f(u);
        }
        case FieldFamily::gauss_short: {
            if (par_.gauss_amp == 0.0) return 0.0;
            Vec y = x - par_.gauss_center;
            double w2 = par_.gauss_width * par_.gauss_width;
            return par_.gauss_amp * std::exp(-norm2(y) / w2);
        }
    }
    return 0.0;
}

Vec FieldModel::grad_Vl(const Vec& x) const {
    if (par_.family == FieldFamily::zero || par_.q_l == 0.0) return Vec::zero(n_);
    if (far_field(norm2(x))) return Vec::zero(n_);
    double u = 1.0 + norm2(x);
    return x * (2.0 * PowerProfile{par_.q_l, alpha_}.fp(u));
}

Vec FieldModel::grad_Vs(const Vec& x) const {
    switch (par_.family) {
        case FieldFamily::zero:
            return Vec::zero(n_);
        case FieldFamily::soft_coulomb: {
            if (par_.q_s == 0.0 || far_field(norm2(x))) return Vec::zero(n_);
            double u = 1.0 + norm2(x);
            return x * (2.0 * PowerProfile{par_.q_s, alpha_ + 1.0}.fp(u));
        }
        case FieldFamily::gauss_short: {
            if (par_.gauss_amp == 0.0) return Vec::zero(n_);
            Vec y = x - par_.gauss_center;
            double w2 = par_.gauss_width * par_.gauss_width;
            double G = par_.gauss_amp * std::exp(-norm2(y) / w2);
            return y * (-2.0 * G / w2);
        }
    }
    return Vec::zero(n_);
}

namespace {
Mat hess_radial(const Vec& x, double fp, double fpp, int n) {
    // V = f(u), u = 1+|x|^2:  d_i d_j V = 2 delta_ij f' + 4 x_i x_j f''
    Mat h(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) h(i, j) = 4.0 * x[i] * x[j] * fpp;
        h(i, i) += 2.0 * fp;
    }
    return h;
}
}  // namespace

Mat FieldModel::hess_Vl(const Vec& x) const {
    if (par_.family == FieldFamily::zero || par_.q_l == 0.0) return Mat(n_);
    if (far_field(norm2(x))) return Mat(n_);
    double u = 1.0 + norm2(x);
    PowerProfile p{par_.q_l, alpha_};
    return hess_radial(x, p.fp(u), p.fpp(u), n_);
}

Mat FieldModel::hess_Vs(const Vec& x) const {
    switch (par_.family) {
        case FieldFamily::zero:
            return Mat(n_);
        case FieldFamily::soft_coulomb: {
            if (par_.q_s == 0.0 || far_field(norm2(x))) return Mat(n_);
            double u = 1.0 + norm2(x);
            PowerProfile p{par_.q_s, alpha_ + 1.0};
            return hess_radial(x, p.fp(u), p.fpp(u), n_);
        }
        case FieldFamily::gauss_short: {
            Mat h(n_);
            if (par_.gauss_amp == 0.0) return h;
            Vec y = x - par_.gauss_center;
            double w2 = par_.gauss_width * par_.gauss_width;
            double G = par_.gauss_amp * std::exp(-norm2(y) / w2);
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < n_; ++j)
                    h(i, j) = 4.0 * y[i] * y[j] * G / (w2 * w2);
                h(i, i) -= 2.0 * G / w2;
            }
            return h;
        }
    }
    return Mat(n_);
}

Mat FieldModel::Bl(const Vec& x) const {
    Mat B(n_);
    if (par_.family == FieldFamily::zero || par_.m_l == 0.0) return B;
    if (far_field(norm2(x))) return B;
    double u = 1.0 + norm2(x);
    PowerProfile p{par_.m_l, alpha_ + 1.0};
    fill_B_from_profile(B, x, p.f(u), p.fp(u), n_);
    return B;
}

Mat FieldModel::Bs(const Vec& x) const {
    Mat B(n_);
    switch (par_.family) {
        case FieldFamily::zero:
            return B;
        case FieldFamily::soft_coulomb: {
            if (par_.m_s == 0.0 || far_field(norm2(x))) return B;
            double u = 1.0 + norm2(x);
            PowerProfile p{par_.m_s, alpha_ + 2.0};
            fill_B_from_profile(B, x, p.f(u), p.fp(u), n_);
            return B;
        }
        case FieldFamily::gauss_short: {
            if (par_.gauss_b_amp == 0.0) return B;
            Vec y = x - par_.gauss_center;
            double w2 = par_.gauss_width * par_.gauss_width;
            double G = par_.gauss_b_amp * std::exp(-norm2(y) / w2);
            B(0, 1) = G;
            B(1, 0) = -G;
            return B;
        }
    }
    return B;
}

Mat FieldModel::Bl_partial(const Vec& x, int j) const {
    Mat dB(n_);
    if (par_.family == FieldFamily::zero || par_.m_l == 0.0) return dB;
    if (far_field(norm2(x))) return dB;
    double u = 1.0 + norm2(x);
    PowerProfile p{par_.m_l, alpha_ + 1.0};
    fill_B_partial_from_profile(dB, x, j, p.fp(u), p.fpp(u), n_);
    return dB;
}

Mat FieldModel::Bs_partial(const Vec& x, int j) const {
    Mat dB(n_);
    switch (par_.family) {
        case FieldFamily::zero:
            return dB;
        case FieldFamily::soft_coulomb: {
            if (par_.m_s == 0.0 || far_field(norm2(x))) return dB;
            double u = 1.0 + norm2(x);
            PowerProfile p{par_.m_s, alpha_ + 2.0};
            fill_B_partial_from_profile(dB, x, j, p.fp(u), p.fpp(u), n_);
            return dB;
        }
        case FieldFamily::gauss_short: {
            if (par_.gauss_b_amp == 0.0) return dB;
            Vec y = x - par_.gauss_center;
            double w2 = par_.gauss_width * par_.gauss_width;
            double G = par_.gauss_b_amp * std::exp(-norm2(y) / w2);
            double d = -2.0 * y[j] * G / w2;
            dB(0, 1) = d;
            dB(1, 0) = -d;
            return dB;
        }
    }
    return dB;
}

FieldEval FieldModel::eval(const Vec& x) const {
    FieldEval e;
    e.Vl = Vl(x);
    e.Vs = Vs(x);
    e.grad_Vl = grad_Vl(x);
    e.grad_Vs = grad_Vs(x);
    e.Bl = Bl(x);
    e.Bs = Bs(x);
    return e;
}

void FieldModel::check_speed(const Vec& v) const {
    if (norm2(v) > c_ * c_ * (1.0 + 1e-12))
        throw SpeedExceeded("force: |v| exceeds the light speed");
}

Vec FieldModel::force(const Vec& x, const Vec& v) const {
    check_speed(v);
    Vec f = -(grad_Vl(x) + grad_Vs(x));
    Mat B = Bl(x);
    B += Bs(x);
    axpy(f, 1.0 / c_, B * v);
    return f;
}

Vec FieldModel::force_long(const Vec& x, const Vec& v) const {
    check_speed(v);
    Vec f = -grad_Vl(x);
    axpy(f, 1.0 / c_, Bl(x) * v);
    return f;
}

Vec FieldModel::force_short(const Vec& x, const Vec& v) const {
    check_speed(v);
    Vec f = -grad_Vs(x);
    axpy(f, 1.0 / c_, Bs(x) * v);
    return f;
}

bool FieldModel::long_range_zero() const {
    return par_.family == FieldFamily::zero || (par_.q_l == 0.0 && par_.m_l == 0.0);
}

bool FieldModel::short_range_zero() const {
    switch (par_.family) {
        case FieldFamily::zero:
            return true;
        case FieldFamily::soft_coulomb:
            return par_.q_s == 0.0 && par_.m_s == 0.0;
        case FieldFamily::gauss_short:
            return par_.gauss_amp == 0.0 && par_.gauss_b_amp == 0.0;
    }
    return true;
}

FieldModel FieldModel::long_range_only() const {
    FieldParams p = par_;
    p.q_s = p.m_s = 0.0;
    p.gauss_amp = p.gauss_b_amp = 0.0;
    return FieldModel(n_, c_, alpha_, p);
}

FieldModel FieldModel::scaled(double s) const {
    FieldParams p = par_;
    p.q_l *= s;
    p.q_s *= s;
    p.m_l *= s;
    p.m_s *= s;
    p.gauss_amp *= s;
    p.gauss_b_amp *= s;
    return FieldModel(n_, c_, alpha_, p);
}

FieldModel FieldModel::with_betas_scaled(double s) const {
    FieldModel m = *this;
    for (auto& b : m.betas_.beta_l) b *= s;
    for (auto& b : m.betas_.beta_s) b *= s;
    return m;
}

// --- decay constants -------------------------------------------------------

namespace {

std::vector<Vec> beta_probe_set(int n) {
    std::vector<double> radii;
    radii.push_back(0.0);
    for (int i = 0; i <= 200; ++i) radii.push_back(10.0 * i / 200.0);
    for (int i = 0; i <= 480; ++i)
        radii.push_back(std::pow(10.0, -2.0 + 6.0 * i / 480.0));

    std::vector<Vec> dirs;
    auto push_dir = [&](Vec d) {
        double nn = norm(d);
        if (nn > 0) dirs.push_back(d * (1.0 / nn));
    };
    if (n == 2) {
        for (int k = 0; k < 16; ++k) {
            double a = M_PI * k / 16.0;
            push_dir(Vec{std::cos(a), std::sin(a)});
        }
    } else {
        // axes, face and body diagonals in the leading 3 coordinates, plus a
        // fixed pseudo-random sprinkle
        for (int i = 0; i < n; ++i) {
            Vec e(n);
            e[i] = 1.0;
            push_dir(e);
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int si = -1; si <= 1; si += 2) {
                    Vec e(n);
                    e[i] = 1.0;
                    e[j] = si;
                    push_dir(e);
                }
        Vec b(n);
        for (int i = 0; i < std::min(n, 3); ++i) b[i] = 1.0;
        push_dir(b);
        unsigned state = 12345u;
        auto rnd = [&]() {
            state = state * 1664525u + 1013904223u;
            return (state >> 8) * (1.0 / 16777216.0) * 2.0 - 1.0;
        };
        for (int k = 0; k < 24; ++k) {
            Vec d(n);
            for (int i = 0; i < n; ++i) d[i] = rnd();
            push_dir(d);
        }
    }

    std::vector<Vec> probes;
    probes.reserve(radii.size() * dirs.size());
    for (double r : radii)
        for (const Vec& d : dirs) probes.push_back(d * r);
    return probes;
}

}  // namespace

namespace {
// weighted magnitudes of the six bound classes at one probe:
//   [0] |V^l| (1+r)^a                                   -> beta^l_0
//   [1] max(|dV^l|, |B^l|) (1+r)^{a+1}                  -> beta^l_1
//   [2] max(|d2V^l|, |dB^l|) (1+r)^{a+2}                -> beta^l_2
//   [3] |V^s| (1+r)^{a+1}                               -> beta^s_1
//   [4] max(|dV^s|, |B^s|) (1+r)^{a+2}                  -> beta^s_2
//   [5] max(|d2V^s|, |dB^s|) (1+r)^{a+3}                -> beta^s_3
std::array<double, 6> decay_class_values(const FieldModel& m, const Vec& x) {
    const int n = m.dim();
    const double a = m.alpha();
    double w0 = 1.0 + norm(x);
    double p1 = std::pow(w0, a + 1.0), p2 = p1 * w0, p3 = p2 * w0;
    std::array<double, 6> out{};
    out[0] = std::abs(m.Vl(x)) * std::pow(w0, a);
    out[3] = std::abs(m.Vs(x)) * p1;
    out[1] = norm_inf(m.grad_Vl(x)) * p1;
    out[4] = norm_inf(m.grad_Vs(x)) * p2;
    Mat hl = m.hess_Vl(x), hs = m.hess_Vs(x);
    Mat bl = m.Bl(x), bs = m.Bs(x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out[2] = std::max(out[2], std::abs(hl(i, j)) * p2);
            out[5] = std::max(out[5], std::abs(hs(i, j)) * p3);
            out[1] = std::max(out[1], std::abs(bl(i, j)) * p1);
            out[4] = std::max(out[4], std::abs(bs(i, j)) * p2);
        }
    for (int j = 0; j < n; ++j) {
        Mat dl = m.Bl_partial(x, j), ds = m.Bs_partial(x, j);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                out[2] = std::max(out[2], std::abs(dl(i, k)) * p2);
                out[5] = std::max(out[5], std::abs(ds(i, k)) * p3);
            }
    }
    return out;
}
}  // namespace

void FieldModel::compute_betas() {
    betas_ = DecayConstants{};
    if (par_.family == FieldFamily::zero) return;

    auto probes = beta_probe_set(n_);
    double sup[6] = {0, 0, 0, 0, 0, 0};
    Vec argmax[6];
    for (int i = 0; i < 6; ++i) argmax[i] = Vec::zero(n_);
    for (const Vec& x : probes) {
        auto vals = decay_class_values(*this, x);
        for (int i = 0; i < 6; ++i)
            if (vals[i] > sup[i]) {
                sup[i] = vals[i];
                argmax[i] = x;
            }
    }
    // refine each class maximum along its direction; the coarse radial grid
    // can miss a peak by a few grid spacings worth of curvature
    for (int cls = 0; cls < 6; ++cls) {
        if (sup[cls] == 0.0) continue;
        Vec x0 = argmax[cls];
        double r0 = norm(x0);
        Vec dir = r0 > 0 ? x0 * (1.0 / r0) : Vec::zero(n_);
        if (r0 == 0.0) {
            dir = Vec::zero(n_);
            dir[0] = 1.0;
        }
        double lo = r0 > 0 ? r0 / 1.35 : 0.0, hi = r0 > 0 ? r0 * 1.35 : 0.1;
        for (int pass = 0; pass < 3; ++pass) {
            double best_r = r0;
            for (int i = 0; i <= 160; ++i) {
                double r = lo + (hi - lo) * i / 160.0;
                double v = decay_class_values(*this, dir * r)[cls];
                if (v > sup[cls]) {
                    sup[cls] = v;
                    best_r = r;
                }
            }
            double span = (hi - lo) / 40.0;
            lo = std::max(0.0, best_r - span);
            hi = best_r + span;
            r0 = best_r;
        }
    }
    const double headroom = 1.0 + 1e-9;
    betas_.beta_l = {sup[0] * headroom, sup[1] * headroom, sup[2] * headroom};
    betas_.beta_s = {sup[3] * headroom, sup[4] * headroom, sup[5] * headroom};
}

// --- verification ----------------------------------------------------------

namespace {
double ratio(double value, double beta) {
    if (value == 0.0) return 0.0;
    if (beta == 0.0) return std::numeric_limits<double>::infinity();
    return value / beta;
}
}  // namespace

DecayReport verify_decay(const FieldModel& model, const std::vector<Vec>& probes) {
    const double a = model.alpha();
    const auto& b = model.betas();
    const int n = model.dim();
    double m[6] = {0, 0, 0, 0, 0, 0};
    for (const Vec& x : probes) {
        double w0 = 1.0 + norm(x);
        double p1 = std::pow(w0, a + 1.0), p2 = p1 * w0, p3 = p2 * w0;
        m[0] = std::max(m[0], std::abs(model.Vl(x)) * std::pow(w0, a));
        m[1] = std::max(m[1], norm_inf(model.grad_Vl(x)) * p1);
        m[3] = std::max(m[3], std::abs(model.Vs(x)) * p1);
        m[4] = std::max(m[4], norm_inf(model.grad_Vs(x)) * p2);
        Mat hl = model.hess_Vl(x), hs = model.hess_Vs(x);
        Mat bl = model.Bl(x), bs = model.Bs(x);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                m[2] = std::max(m[2], std::abs(hl(i, j)) * p2);
                m[5] = std::max(m[5], std::abs(hs(i, j)) * p3);
                m[1] = std::max(m[1], std::abs(bl(i, j)) * p1);
                m[4] = std::max(m[4], std::abs(bs(i, j)) * p2);
            }
        for (int j = 0; j < n; ++j) {
            Mat dl = model.Bl_partial(x, j), ds = model.Bs_partial(x, j);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    m[2] = std::max(m[2], std::abs(dl(i, k)) * p2);
                    m[5] = std::max(m[5], std::abs(ds(i, k)) * p3);
                }
        }
    }
    DecayReport rep;
    const char* names[6] = {"V^l order 0",      "V^l/B^l order 1", "V^l/B^l order 2",
                            "V^s order 0",      "V^s/B^s order 1", "V^s/B^s order 2"};
    const double betas[6] = {b.beta_l[0], b.beta_l[1], b.beta_l[2],
                             b.beta_s[0], b.beta_s[1], b.beta_s[2]};
    for (int i = 0; i < 6; ++i) {
        double r = ratio(m[i], betas[i]);
        bool ok = r <= 1.0 + 1e-8;
        rep.rows.push_back({names[i], r, ok});
        rep.max_ratio = std::max(rep.max_ratio, r);
        rep.pass = rep.pass && ok;
    }
    return rep;
}

double verify_closure(const FieldModel& model, const std::vector<Vec>& probes) {
    const int n = model.dim();
    double worst = 0.0;
    for (const Vec& x : probes) {
        std::vector<Mat> dB(n, Mat(n));
        for (int j = 0; j < n; ++j) {
            dB[j] = model.Bl_partial(x, j);
            dB[j] += model.Bs_partial(x, j);
        }
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int mm = 0; mm < n; ++mm) {
                    double r = dB[i](k, mm) + dB[mm](i, k) + dB[k](mm, i);
                    worst = std::max(worst, std::abs(r));
                }
    }
    return worst;
}

double verify_closure_fd(const FieldModel& model, const std::vector<Vec>& probes) {
    const int n = model.dim();
    double worst = 0.0;
    for (const Vec& x : probes) {
        double h = 1e-6 * std::max(1.0, norm(x));
        std::vector<Mat> dB(n, Mat(n));
        for (int j = 0; j < n; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Mat Bp = model.Bl(xp);
            Bp += model.Bs(xp);
            Mat Bm = model.Bl(xm);
            Bm += model.Bs(xm);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    dB[j](i, k) = (Bp(i, k) - Bm(i, k)) / (2.0 * h);
        }
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int mm = 0; mm < n; ++mm) {
                    double r = dB[i](k, mm) + dB[mm](i, k) + dB[k](mm, i);
                    worst = std::max(worst, std::abs(r));
                }
    }
    return worst;
}

std::vector<Vec> default_probes(int n, int per_direction) {
    std::vector<Vec> probes;
    std::vector<Vec> dirs;
    for (int i = 0; i < n; ++i) {
        Vec e(n);
        e[i] = 1.0;
        dirs.push_back(e);
    }
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0;
    dirs.push_back(d * (1.0 / norm(d)));
    if (n >= 2) {
        Vec m(n);
        m[0] = 1.0;
        m[1] = -1.0;
        dirs.push_back(m * (1.0 / norm(m)));
    }
    probes.push_back(Vec::zero(n));
    for (const Vec& dir : dirs)
        for (int i = 0; i < per_direction; ++i) {
            double r = std::pow(10.0, -2.0 + 6.0 * i / (per_direction - 1.0));
            probes.push_back(dir * r);
        }
    return probes;
}

}  // namespace relscat
