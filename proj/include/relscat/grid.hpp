#pragma once

#include <memory>
#include <vector>

#include "relscat/quadrature.hpp"
#include "relscat/vec.hpp"

namespace relscat {

// Chebyshev-Lobatto nodes in the compactified time s = t/(1+|t|), s in [-1,1].
// The endpoint nodes sit at t = -inf / +inf; every finite time falls inside a
// panel. Node count is odd so that s = 0 (t = 0) is a node.
class TimeGrid {
public:
    explicit TimeGrid(int nodes = 401);

    int size() const { return static_cast<int>(s_.size()); }
    int panels() const { return size() - 1; }
    int center() const { return (size() - 1) / 2; }
    double s(int k) const { return s_[k]; }
    double t(int k) const { return t_[k]; }
    const std::vector<double>& nodes_s() const { return s_; }

    static double s_of_t(double t) { return t / (1.0 + std::abs(t)); }
    static double t_of_s(double s) { return s / (1.0 - std::abs(s)); }
    static double jacobian(double s) {
        double om = 1.0 - std::abs(s);
        return 1.0 / (om * om);
    }

    // Panel index k with s in [s_k, s_{k+1}], clamped to [0, panels()-1].
    int panel_of_s(double s) const;

    static std::shared_ptr<const TimeGrid> shared_default();
    static std::shared_ptr<const TimeGrid> make(int nodes);

private:
    std::vector<double> s_, t_;
};

// A curve f : R -> R^n stored by node samples of its derivative, with node
// values reconstructed by panel integration. The two infinite end nodes hold
// the t -> -inf / +inf limits of f'. Ends where the integral of f' diverges
// carry no value; value queries there fall back to a power-law tail model
// with decay exponent alpha (|f'(t) - limit| ~ |t|^{-alpha-...}).
class GridCurve {
public:
    GridCurve() = default;
    GridCurve(std::shared_ptr<const TimeGrid> grid, int dim, double alpha = 1.0);

    const TimeGrid& grid() const { return *grid_; }
    std::shared_ptr<const TimeGrid> grid_ptr() const { return grid_; }
    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    bool empty() const { return !grid_; }
    bool is_zero() const { return zero_; }

    Vec& deriv(int k) { zero_ = false; return d_[k]; }
    const Vec& deriv(int k) const { return d_[k]; }
    const Vec& value(int k) const { return v_[k]; }
    bool value_valid(int k) const { return vvalid_[k] != 0; }

    // Power-law exponents q of |f'(t) - limit| ~ |t|^{-q} used by the value
    // tail model beyond the outermost finite nodes. Defaults to alpha + 1
    // (integrable decay); free-solution deviations decay one power slower.
    void set_tail_exponents(double q_left, double q_right) {
        tail_ql_ = q_left;
        tail_qr_ = q_right;
    }

    void set_derivs(std::vector<Vec> d);
    // Install externally computed node values (all treated as valid).
    void adopt_values(std::vector<Vec> v);

    // Recompute node values as the cumulative integral of the interpolated
    // derivative, anchored at a node. Ends flagged divergent get no value.
    void rebuild_values(int anchor_node, const Vec& anchor_value,
                        bool left_decays, bool right_decays);

    Vec deriv_at(double t) const;  // local cubic interpolation in s
    Vec value_at(double t) const;  // Hermite within panels, tail model at ends

    double sup_deriv_diff(const GridCurve& other) const;  // max-norm over nodes

private:
    Vec tail_value(bool left, double t) const;
    void mark_zero();

    std::shared_ptr<const TimeGrid> grid_;
    int dim_ = 0;
    double alpha_ = 1.0;
    double tail_ql_ = 2.0, tail_qr_ = 2.0;
    bool zero_ = true;
    std::vector<Vec> d_, v_;
    std::vector<char> vvalid_;
};

enum class CumulFrom { left, right };

// Cumulative integral of an external integrand phi(t) along the grid:
//   from left :  C(t) = int_{-inf}^t phi,   C(-inf) = 0
//   from right:  C(t) = int_t^{+inf} phi,   C(+inf) = 0
// Each panel is integrated adaptively in s with the true integrand, so the
// result is a certified quadrature; the returned GridCurve interpolates C
// cheaply anywhere (this is the cache the nested double integrals reuse).
// Note C' = phi from the left and C' = -phi from the right.
template <class Phi>
GridCurve build_cumulative(std::shared_ptr<const TimeGrid> grid, Phi&& phi,
                           int dim, double alpha, CumulFrom from,
                           double panel_tol) {
    const TimeGrid& g = *grid;
    const int N = g.size();
    GridCurve c(grid, dim, alpha);

    AdaptOptions opt;
    opt.abs_tol = panel_tol;
    opt.max_depth = 58;
    opt.throw_on_fail = true;

    std::vector<Vec> derivs(N, Vec::zero(dim));
    for (int k = 0; k < N; ++k) {
        double tk = g.t(k);
        Vec ph = std::isfinite(tk) ? phi(tk) : Vec::zero(dim);
        derivs[k] = (from == CumulFrom::left) ? ph : -ph;
    }
    c.set_derivs(std::move(derivs));

    auto in_s = [&, dim](double s) {
        if (1.0 - std::abs(s) < 1e-100) return Vec::zero(dim);
        return phi(TimeGrid::t_of_s(s)) * TimeGrid::jacobian(s);
    };

    std::vector<Vec> panel(N - 1, Vec::zero(dim));
    for (int k = 0; k + 1 < N; ++k)
        panel[k] = integrate(in_s, g.s(k), g.s(k + 1), dim, opt).value;

    // prefix sums into node values
    std::vector<Vec> vals(N, Vec::zero(dim));
    if (from == CumulFrom::left) {
        for (int k = 1; k < N; ++k) vals[k] = vals[k - 1] + panel[k - 1];
    } else {
        for (int k = N - 2; k >= 0; --k) vals[k] = vals[k + 1] + panel[k];
    }
    c.adopt_values(std::move(vals));
    return c;
}

}  // namespace relscat
