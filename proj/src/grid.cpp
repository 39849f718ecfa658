#include "relscat/grid.hpp"

#include <algorithm>
#include <cmath>

namespace relscat {

TimeGrid::TimeGrid(int nodes) {
    if (nodes < 9) nodes = 9;
    if (nodes % 2 == 0) ++nodes;
    const int N = nodes;
    s_.resize(N);
    t_.resize(N);
    for (int k = 0; k < N; ++k) {
        double s = -std::cos(M_PI * k / (N - 1.0));
        if (k == 0) s = -1.0;
        if (k == N - 1) s = 1.0;
        if (2 * k == N - 1) s = 0.0;
        s_[k] = s;
        if (k == 0)
            t_[k] = -std::numeric_limits<double>::infinity();
        else if (k == N - 1)
            t_[k] = std::numeric_limits<double>::infinity();
        else
            t_[k] = t_of_s(s);
    }
}

int TimeGrid::panel_of_s(double s) const {
    const int N = size();
    double th = std::acos(std::clamp(-s, -1.0, 1.0));
    int k = static_cast<int>(th / M_PI * (N - 1));
    k = std::clamp(k, 0, N - 2);
    // acos rounding can land one panel off
    while (k > 0 && s < s_[k]) --k;
    while (k < N - 2 && s > s_[k + 1]) ++k;
    return k;
}

std::shared_ptr<const TimeGrid> TimeGrid::make(int nodes) {
    return std::make_shared<const TimeGrid>(nodes);
}

std::shared_ptr<const TimeGrid> TimeGrid::shared_default() {
    static std::shared_ptr<const TimeGrid> g = std::make_shared<const TimeGrid>(401);
    return g;
}

GridCurve::GridCurve(std::shared_ptr<const TimeGrid> grid, int dim, double alpha)
    : grid_(std::move(grid)), dim_(dim), alpha_(alpha) {
    tail_ql_ = tail_qr_ = alpha + 1.0;
    const int N = grid_->size();
    d_.assign(N, Vec::zero(dim));
    v_.assign(N, Vec::zero(dim));
    vvalid_.assign(N, 1);
    zero_ = true;
}

void GridCurve::mark_zero() {
    zero_ = true;
    for (const Vec& x : d_)
        for (int i = 0; i < dim_; ++i)
            if (x[i] != 0.0) { zero_ = false; return; }
    for (int k = 0; k < static_cast<int>(v_.size()); ++k)
        if (vvalid_[k])
            for (int i = 0; i < dim_; ++i)
                if (v_[k][i] != 0.0) { zero_ = false; return; }
}

void GridCurve::set_derivs(std::vector<Vec> d) {
    d_ = std::move(d);
    mark_zero();
}

void GridCurve::adopt_values(std::vector<Vec> v) {
    v_ = std::move(v);
    vvalid_.assign(v_.size(), 1);
    mark_zero();
}

Vec GridCurve::deriv_at(double t) const {
    if (zero_) return Vec::zero(dim_);
    const TimeGrid& g = *grid_;
    const int N = g.size();
    if (!std::isfinite(t)) return t > 0 ? d_[N - 1] : d_[0];
    double s = TimeGrid::s_of_t(t);
    int k = g.panel_of_s(s);
    int j0 = std::clamp(k - 1, 0, N - 4);
    // 4-point Lagrange in s
    double x0 = g.s(j0), x1 = g.s(j0 + 1), x2 = g.s(j0 + 2), x3 = g.s(j0 + 3);
    double w0 = (s - x1) * (s - x2) * (s - x3) / ((x0 - x1) * (x0 - x2) * (x0 - x3));
    double w1 = (s - x0) * (s - x2) * (s - x3) / ((x1 - x0) * (x1 - x2) * (x1 - x3));
    double w2 = (s - x0) * (s - x1) * (s - x3) / ((x2 - x0) * (x2 - x1) * (x2 - x3));
    double w3 = (s - x0) * (s - x1) * (s - x2) / ((x3 - x0) * (x3 - x1) * (x3 - x2));
    Vec r = d_[j0] * w0;
    axpy(r, w1, d_[j0 + 1]);
    axpy(r, w2, d_[j0 + 2]);
    axpy(r, w3, d_[j0 + 3]);
    return r;
}

Vec GridCurve::tail_value(bool left, double t) const {
    const TimeGrid& g = *grid_;
    const int N = g.size();
    int kin = left ? 1 : N - 2;  // outermost finite node
    int kinf = left ? 0 : N - 1;
    double t1 = g.t(kin);
    double q = left ? tail_ql_ : tail_qr_;
    double ratio = t1 / t;  // in (0, 1]
    if (vvalid_[kinf] && q > 1.0) {
        // the limit is known exactly: interpolate the power shape between it
        // and the outermost finite node, so the tail decays to the limit
        // with no constant bias
        return v_[kinf] + (v_[kin] - v_[kinf]) * std::pow(ratio, q - 1.0);
    }
    // drifting end: f'(t) ~ L + (f'(t1)-L)(t1/t)^q integrated in closed form
    const Vec& L = d_[kinf];
    Vec base = v_[kin];
    Vec dev = d_[kin] - L;
    double I;
    if (std::abs(q - 1.0) < 1e-12)
        I = -t1 * std::log(ratio);
    else
        I = t1 * (std::pow(ratio, q - 1.0) - 1.0) / (q - 1.0);
    Vec r = base + L * (t - t1);
    axpy(r, I, dev);
    return r;
}

Vec GridCurve::value_at(double t) const {
    if (zero_) return Vec::zero(dim_);
    const TimeGrid& g = *grid_;
    const int N = g.size();
    if (!std::isfinite(t)) return t > 0 ? v_[N - 1] : v_[0];
    double s = TimeGrid::s_of_t(t);
    int k = g.panel_of_s(s);
    if (k == 0) return tail_value(true, t);
    if (k == N - 2) return tail_value(false, t);
    double sa = g.s(k), sb = g.s(k + 1);
    if (std::max(std::abs(sa), std::abs(sb)) > 0.9) {
        // partial-panel Gauss quadrature of the interpolated derivative; the
        // jacobian varies too fast out here for a Hermite fit in s
        Vec r = v_[k];
        double mid = 0.5 * (sa + s), hl = 0.5 * (s - sa);
        auto add = [&](double sq, double w) {
            axpy(r, w * hl, deriv_at(TimeGrid::t_of_s(sq)) * TimeGrid::jacobian(sq));
        };
        add(mid, gk::wg[0]);
        for (int i = 1; i <= 3; ++i) {
            add(mid + hl * gk::xk[2 * i], gk::wg[i]);
            add(mid - hl * gk::xk[2 * i], gk::wg[i]);
        }
        return r;
    }
    // Hermite cubic in s on the panel
    double h = sb - sa;
    double u = (s - sa) / h;
    double u2 = u * u, u3 = u2 * u;
    double h00 = 2 * u3 - 3 * u2 + 1;
    double h10 = u3 - 2 * u2 + u;
    double h01 = -2 * u3 + 3 * u2;
    double h11 = u3 - u2;
    double ja = TimeGrid::jacobian(sa), jb = TimeGrid::jacobian(sb);
    Vec r = v_[k] * h00;
    axpy(r, h01, v_[k + 1]);
    axpy(r, h10 * h * ja, d_[k]);
    axpy(r, h11 * h * jb, d_[k + 1]);
    return r;
}

void GridCurve::rebuild_values(int anchor_node, const Vec& anchor_value,
                               bool left_decays, bool right_decays) {
    const TimeGrid& g = *grid_;
    const int N = g.size();
    v_.assign(N, Vec::zero(dim_));
    vvalid_.assign(N, 0);

    if (zero_) {
        bool all_zero_anchor = true;
        for (int i = 0; i < dim_; ++i)
            if (anchor_value[i] != 0.0) all_zero_anchor = false;
        for (int k = 0; k < N; ++k) {
            v_[k] = anchor_value;
            vvalid_[k] = 1;
        }
        zero_ = all_zero_anchor;
        return;
    }

    // interior panel integrals of interp(f') * jacobian
    auto in_s = [this](double s) { return deriv_at(TimeGrid::t_of_s(s)) * TimeGrid::jacobian(s); };
    std::vector<Vec> panel(N - 1, Vec::zero(dim_));
    for (int k = 1; k + 2 < N; ++k) {
        double sa = g.s(k), sb = g.s(k + 1);
        if (std::max(std::abs(sa), std::abs(sb)) > 0.995) {
            // split toward the compactification ends where the jacobian is steep
            double m1 = sa + 0.25 * (sb - sa), m2 = sa + 0.5 * (sb - sa),
                   m3 = sa + 0.75 * (sb - sa);
            panel[k] = gk15(in_s, sa, m1, dim_).value + gk15(in_s, m1, m2, dim_).value +
                       gk15(in_s, m2, m3, dim_).value + gk15(in_s, m3, sb, dim_).value;
        } else {
            panel[k] = gk15(in_s, sa, sb, dim_).value;
        }
    }

    int a = std::clamp(anchor_node, 1, N - 2);
    v_[a] = anchor_value;
    vvalid_[a] = 1;
    for (int k = a; k + 2 < N; ++k) {
        v_[k + 1] = v_[k] + panel[k];
        vvalid_[k + 1] = 1;
    }
    for (int k = a; k - 1 >= 1; --k) {
        v_[k - 1] = v_[k] - panel[k - 1];
        vvalid_[k - 1] = 1;
    }

    // end nodes: closed-form power tails where the integral converges
    if (left_decays && tail_ql_ > 1.0) {
        double t1 = g.t(1);
        // int_{-inf}^{t1} f' with f'(t) ~ f'(t1) (t1/t)^{q}
        v_[0] = v_[1] - d_[1] * (std::abs(t1) / (tail_ql_ - 1.0));
        vvalid_[0] = 1;
    }
    if (right_decays && tail_qr_ > 1.0) {
        double t1 = g.t(N - 2);
        v_[N - 1] = v_[N - 2] + d_[N - 2] * (std::abs(t1) / (tail_qr_ - 1.0));
        vvalid_[N - 1] = 1;
    }

    // anchoring exactly at an infinite end (converging integral): shift so the
    // limit matches the requested anchor value
    if (anchor_node == 0 && left_decays) {
        Vec shift = anchor_value - v_[0];
        for (int k = 0; k < N; ++k) v_[k] += shift;
    } else if (anchor_node == N - 1 && right_decays) {
        Vec shift = anchor_value - v_[N - 1];
        for (int k = 0; k < N; ++k) v_[k] += shift;
    }
    if (!left_decays) vvalid_[0] = 0;
    if (!right_decays) vvalid_[N - 1] = 0;
}

double GridCurve::sup_deriv_diff(const GridCurve& other) const {
    double m = 0.0;
    for (size_t k = 0; k < d_.size(); ++k) m = std::max(m, norm_inf(d_[k] - other.d_[k]));
    return m;
}

}  // namespace relscat
