#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "relscat/grid.hpp"
#include "relscat/ode.hpp"
#include "relscat/quadrature.hpp"
#include "relscat/richardson.hpp"

using namespace relscat;

TEST_CASE("adaptive quadrature on finite intervals") {
    auto f = [](double t) { return Vec{t * t}; };
    AdaptOptions opt;
    opt.abs_tol = 1e-14;
    CHECK(integrate(f, 0.0, 1.0, 1, opt).value[0] ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    auto osc = [](double t) { return Vec{std::sin(10.0 * t) * std::exp(-t)}; };
    double exact = 10.0 / 101.0 * (1.0 - std::exp(-M_PI) * std::cos(10.0 * M_PI)) +
                   1.0 / 101.0 * (-std::exp(-M_PI) * std::sin(10.0 * M_PI));
    // int_0^pi sin(10t)e^{-t} dt = (10 - e^{-pi}(10 cos(10pi) + sin(10pi)))/101
    exact = (10.0 - std::exp(-M_PI) * (10.0 * std::cos(10.0 * M_PI) +
                                       std::sin(10.0 * M_PI))) /
            101.0;
    CHECK(integrate(osc, 0.0, M_PI, 1, opt).value[0] ==
          doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("improper integrals by compactifying substitution") {
    AdaptOptions opt;
    opt.abs_tol = 1e-13;
    auto decay = [](double t) { return Vec{std::exp(-t)}; };
    CHECK(integrate_to_pinf(decay, 0.0, 1, opt).value[0] ==
          doctest::Approx(1.0).epsilon(1e-12));

    auto gauss = [](double t) { return Vec{std::exp(-t * t)}; };
    CHECK(integrate_real_line(gauss, 1, opt).value[0] ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

    // the x-ray oracle value: int (1+t^2)^{-3/2} dt = 2
    auto pl = [](double t) { return Vec{std::pow(1.0 + t * t, -1.5)}; };
    CHECK(integrate_real_line(pl, 1, opt).value[0] ==
          doctest::Approx(2.0).epsilon(1e-12));

    // slow power decay, the regime the trajectory tails live in
    auto slow = [](double t) { return Vec{std::pow(1.0 + std::abs(t), -2.0)}; };
    CHECK(integrate_real_line(slow, 1, opt).value[0] ==
          doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("time grid structure") {
    TimeGrid g(401);
    CHECK(g.size() == 401);
    CHECK(g.s(0) == -1.0);
    CHECK(g.s(g.size() - 1) == 1.0);
    CHECK(g.s(g.center()) == 0.0);
    CHECK(g.t(g.center()) == 0.0);
    for (int k = 1; k < g.size(); ++k) CHECK(g.s(k) > g.s(k - 1));

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-0.999999, 0.999999);
    for (int i = 0; i < 2000; ++i) {
        double s = u(rng);
        int p = g.panel_of_s(s);
        CHECK(g.s(p) <= s);
        CHECK(s <= g.s(p + 1));
        double t = TimeGrid::t_of_s(s);
        CHECK(TimeGrid::s_of_t(t) == doctest::Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("grid curve reproduces a known antiderivative") {
    auto grid = TimeGrid::make(401);
    const int N = grid->size();
    GridCurve c(grid, 1, 1.0);
    std::vector<Vec> d(N, Vec::zero(1));
    for (int k = 0; k < N; ++k) {
        double t = grid->t(k);
        d[k] = Vec{std::isfinite(t) ? 1.0 / (1.0 + t * t) : 0.0};
    }
    c.set_derivs(std::move(d));
    c.rebuild_values(grid->center(), Vec::zero(1), true, true);

    for (double t : {0.0, 0.37, -1.4, 5.0, -17.0, 300.0, -4000.0}) {
        CHECK(std::abs(c.value_at(t)[0] - std::atan(t)) <= 5e-9);
        CHECK(c.deriv_at(t)[0] ==
              doctest::Approx(1.0 / (1.0 + t * t)).epsilon(1e-8));
    }
    // converged end values: atan(+-inf)
    CHECK(c.value(N - 1)[0] == doctest::Approx(M_PI / 2).epsilon(1e-7));
    CHECK(c.value(0)[0] == doctest::Approx(-M_PI / 2).epsilon(1e-7));
}

TEST_CASE("cumulative builder matches closed forms and caches well") {
    auto grid = TimeGrid::make(401);
    auto phi = [](double t) { return Vec{1.0 / (1.0 + t * t)}; };
    GridCurve L = build_cumulative(grid, phi, 1, 1.0, CumulFrom::left, 1e-14);
    GridCurve R = build_cumulative(grid, phi, 1, 1.0, CumulFrom::right, 1e-14);
    // node values carry the certified quadrature; between nodes the cubic
    // interpolation of the cache is good to ~1e-9 on an O(1) integrand
    for (int k = 1; k + 1 < grid->size(); ++k) {
        double t = grid->t(k);
        CHECK(L.value(k)[0] == doctest::Approx(std::atan(t) + M_PI / 2).epsilon(1e-12));
        CHECK(R.value(k)[0] == doctest::Approx(M_PI / 2 - std::atan(t)).epsilon(1e-12));
    }
    for (double t : {-300.0, -2.0, 0.0, 1.3, 10.0, 5000.0}) {
        CHECK(std::abs(L.value_at(t)[0] - (std::atan(t) + M_PI / 2)) <= 2e-9);
        CHECK(std::abs(R.value_at(t)[0] - (M_PI / 2 - std::atan(t))) <= 2e-9);
    }
    // total value equals the full line integral
    CHECK(L.value(grid->size() - 1)[0] == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("zero curves stay exactly zero") {
    auto grid = TimeGrid::make(101);
    GridCurve c(grid, 2, 1.0);
    c.rebuild_values(grid->center(), Vec::zero(2), false, false);
    CHECK(c.is_zero());
    CHECK(c.value_at(12.3)[0] == 0.0);
    CHECK(c.deriv_at(-7.0)[1] == 0.0);
}

TEST_CASE("ode integrator hits reference solutions and report times") {
    OdeRhs decay = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = -y[0];
    };
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    std::vector<std::pair<double, double>> seen;
    auto rep = [&](double t, const std::vector<double>& y) { seen.push_back({t, y[0]}); };
    ode_integrate(decay, 0.0, {1.0}, 2.0, opt, {0.5, 1.0}, rep);
    REQUIRE(seen.size() == 4);  // t0, two stops, t1
    CHECK(seen[1].first == 0.5);
    CHECK(seen[1].second == doctest::Approx(std::exp(-0.5)).epsilon(1e-11));
    CHECK(seen[3].second == doctest::Approx(std::exp(-2.0)).epsilon(1e-11));

    // circular motion: energy preserved to tolerance over many periods
    OdeRhs circle = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    std::vector<double> yend;
    ode_integrate(circle, 0.0, {1.0, 0.0}, 20.0 * M_PI, opt, {},
                  [&](double, const std::vector<double>& y) { yend = y; });
    CHECK(yend[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(yend[1] == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("polynomial extrapolation to zero") {
    std::vector<double> h = {0.4, 0.2, 0.1};
    std::vector<Vec> y;
    for (double hh : h) y.push_back(Vec{3.0 + 2.0 * hh, -1.0 + 0.5 * hh});
    PolyExtrapolation p = extrapolate_poly(h, y, 1);
    CHECK(p.value[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(p.value[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(p.rms_residual <= 1e-12);
}

TEST_CASE("power-law extrapolation of asymptote approach") {
    auto f = [](double T) { return Vec{1.0 + 3.0 * std::pow(T, -1.5)}; };
    PowerLawExtrapolation e = extrapolate_power(f(25.0), f(50.0), f(100.0), 1e-15);
    CHECK(e.extrapolated);
    CHECK(e.exponent == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(e.value[0] == doctest::Approx(1.0).epsilon(1e-10));

    // non-Cauchy difference sequence must be rejected
    CHECK_THROWS_AS(extrapolate_power(Vec{0.0}, Vec{1.0}, Vec{3.0}, 1e-15),
                    ExtrapolationDiverged);

    // already converged input returns the last value untouched
    PowerLawExtrapolation flat = extrapolate_power(Vec{2.0}, Vec{2.0}, Vec{2.0}, 1e-12);
    CHECK_FALSE(flat.extrapolated);
    CHECK(flat.value[0] == 2.0);
}
