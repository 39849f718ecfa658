#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "relscat/field.hpp"

using namespace relscat;

namespace {

FieldModel soft(int n, double q_l, double q_s, double m_l, double m_s,
                double alpha = 1.0, double c = 1.0) {
    FieldParams p;
    p.family = FieldFamily::soft_coulomb;
    p.q_l = q_l;
    p.q_s = q_s;
    p.m_l = m_l;
    p.m_s = m_s;
    return FieldModel(n, c, alpha, p);
}

Vec random_vec(std::mt19937& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

}  // namespace

TEST_CASE("zero family evaluates to zero everywhere") {
    FieldModel m(3, 1.0, 1.0, FieldParams{});
    FieldEval e = m.eval(Vec{1.0, -2.0, 0.5});
    CHECK(e.Vl == 0.0);
    CHECK(e.Vs == 0.0);
    CHECK(norm(e.grad_Vl) == 0.0);
    CHECK(norm(m.force(Vec{1.0, 0.0, 0.0}, Vec{0.1, 0.0, 0.0})) == 0.0);
}

TEST_CASE("soft-coulomb point values") {
    FieldModel m = soft(2, 1.0, 0.0, 0.0, 0.0);
    CHECK(m.Vl(Vec{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    Vec x{1.0, 0.0};
    CHECK(m.Vl(x) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
    Vec g = m.grad_Vl(x);
    CHECK(g[0] == doctest::Approx(-std::pow(2.0, -1.5)).epsilon(1e-14));
    CHECK(g[1] == 0.0);
    // force with v = 0 is -grad V
    Vec f = m.force(x, Vec{0.0, 0.0});
    CHECK(f[0] == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
}

TEST_CASE("analytic gradients match central differences") {
    std::mt19937 rng(3);
    FieldModel m = soft(3, 0.8, 0.5, 0.3, 0.2, 0.7);
    for (int k = 0; k < 1000; ++k) {
        Vec x = random_vec(rng, 3, 8.0);
        Vec gl = m.grad_Vl(x), gs = m.grad_Vs(x);
        for (int j = 0; j < 3; ++j) {
            double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            double fdl = (m.Vl(xp) - m.Vl(xm)) / (2.0 * h);
            double fds = (m.Vs(xp) - m.Vs(xm)) / (2.0 * h);
            CHECK(gl[j] == doctest::Approx(fdl).epsilon(2e-6));
            CHECK(gs[j] == doctest::Approx(fds).epsilon(2e-6));
        }
    }
}

TEST_CASE("magnetic force does no work") {
    std::mt19937 rng(5);
    FieldModel m2 = soft(2, 0.0, 0.0, 0.4, 0.2);
    FieldModel m3 = soft(3, 0.0, 0.0, 0.4, 0.2);
    for (int k = 0; k < 10000; ++k) {
        int n = (k % 2) ? 2 : 3;
        const FieldModel& m = (n == 2) ? m2 : m3;
        Vec x = random_vec(rng, n, 5.0);
        Vec v = random_vec(rng, n, 0.4);
        Vec f = m.force(x, v);
        CHECK(std::abs(dot(f, v)) <= 1e-14 * (1.0 + norm(f) * norm(v)));
    }
}

TEST_CASE("B matrices are exactly antisymmetric") {
    std::mt19937 rng(9);
    for (int n : {2, 3, 4}) {
        FieldModel m = soft(n, 0.1, 0.1, 0.7, 0.3, 0.6);
        for (int k = 0; k < 200; ++k) {
            Vec x = random_vec(rng, n, 10.0);
            CHECK(m.Bl(x).max_asymmetry() == 0.0);
            CHECK(m.Bs(x).max_asymmetry() == 0.0);
        }
    }
}

TEST_CASE("speed guard on the force") {
    FieldModel m = soft(2, 1.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS(m.force(Vec{0.0, 0.0}, Vec{1.1, 0.0}), SpeedExceeded);
    // |v| = c exactly is allowed (light-speed line integrals use it)
    CHECK_NOTHROW(m.force(Vec{0.0, 0.0}, Vec{1.0, 0.0}));
}

TEST_CASE("decay verification: zero field and calibrated constants") {
    FieldModel z(2, 1.0, 1.0, FieldParams{});
    auto probes = default_probes(2);
    DecayReport zr = verify_decay(z, probes);
    CHECK(zr.pass);
    CHECK(zr.max_ratio == 0.0);

    for (double alpha : {1.0, 0.6}) {
        FieldModel m = soft(2, 1.3, 0.7, 0.5, 0.25, alpha);
        DecayReport r = verify_decay(m, probes);
        CHECK(r.pass);
        CHECK(r.max_ratio <= 1.0 + 1e-8);
        CHECK(r.max_ratio > 0.5);  // constants are tight, not just huge
    }
}

TEST_CASE("decay verification fails with halved constants, ratio near 2") {
    FieldModel m = soft(2, 1.0, 0.5, 0.3, 0.2).with_betas_scaled(0.5);
    DecayReport r = verify_decay(m, default_probes(2));
    CHECK_FALSE(r.pass);
    CHECK(r.max_ratio == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("decay verification covers n=3 and the gaussian family") {
    FieldModel m3 = soft(3, 0.5, 0.4, 0.6, 0.3, 0.8);
    CHECK(verify_decay(m3, default_probes(3)).pass);

    FieldParams p;
    p.family = FieldFamily::gauss_short;
    p.q_l = 4e-4;
    p.m_l = 2e-4;
    p.gauss_amp = 5e-3;
    p.gauss_center = Vec{0.6, 0.2};
    p.gauss_width = 1.0;
    p.gauss_b_amp = 1e-3;
    FieldModel g(2, 1.0, 1.0, p);
    CHECK(verify_decay(g, default_probes(2)).pass);
}

TEST_CASE("closure condition") {
    auto probes = default_probes(3, 40);
    FieldModel z(3, 1.0, 1.0, FieldParams{});
    CHECK(verify_closure(z, probes) == 0.0);

    // n=2: the cyclic sum over two indices vanishes structurally
    FieldModel m2 = soft(2, 0.0, 0.0, 1.0, 0.5, 0.7);
    CHECK(verify_closure(m2, default_probes(2, 40)) <= 1e-14);

    // n=3: B built from a vector potential is closed; analytic residual is
    // exact, finite differences see only truncation noise
    FieldModel m3 = soft(3, 0.0, 0.0, 1.0, 0.5, 0.7);
    CHECK(verify_closure(m3, probes) <= 1e-12);
    CHECK(verify_closure_fd(m3, probes) <= 1e-6);
}

TEST_CASE("gaussian magnetic component is n=2 only") {
    FieldParams p;
    p.family = FieldFamily::gauss_short;
    p.gauss_b_amp = 1.0;
    CHECK_THROWS_AS(FieldModel(3, 1.0, 1.0, p), ConfigError);
}

TEST_CASE("model surgery helpers") {
    FieldModel m = soft(2, 1.0, 0.5, 0.25, 0.1);
    FieldModel l = m.long_range_only();
    CHECK(l.short_range_zero());
    CHECK_FALSE(l.long_range_zero());
    CHECK(l.Vl(Vec{1.0, 1.0}) == m.Vl(Vec{1.0, 1.0}));
    CHECK(l.Vs(Vec{1.0, 1.0}) == 0.0);

    FieldModel h = m.scaled(0.5);
    Vec x{0.3, -0.7};
    CHECK(h.Vl(x) == doctest::Approx(0.5 * m.Vl(x)).epsilon(1e-15));
    CHECK(h.Vs(x) == doctest::Approx(0.5 * m.Vs(x)).epsilon(1e-15));
}

TEST_CASE("bundled evaluation matches the component calls") {
    std::mt19937 rng(21);
    FieldModel m = soft(3, 0.4, 0.3, 0.2, 0.1, 0.9);
    for (int k = 0; k < 50; ++k) {
        Vec x = random_vec(rng, 3, 6.0);
        FieldEval e = m.eval(x);
        CHECK(e.Vl == m.Vl(x));
        CHECK(e.Vs == m.Vs(x));
        CHECK(norm(e.grad_Vl - m.grad_Vl(x)) == 0.0);
        CHECK(norm(e.grad_Vs - m.grad_Vs(x)) == 0.0);
        CHECK(e.Bl.max_asymmetry() == 0.0);
        CHECK(e.Bs.max_asymmetry() == 0.0);
        CHECK(e.grad_Vl.all_finite());
    }
}

TEST_CASE("force magnitude and Lipschitz envelopes from the decay constants") {
    std::mt19937 rng(31);
    FieldModel m = soft(2, 0.7, 0.4, 0.5, 0.2, 0.8);
    const double a = m.alpha();
    const double n = 2.0, c = 1.0;
    const auto& b = m.betas();

    for (int k = 0; k < 1000; ++k) {
        Vec x = random_vec(rng, 2, 12.0);
        Vec v = random_vec(rng, 2, 0.55);
        double w = 1.0 + norm(x);
        CHECK(norm(m.force_long(x, v)) <=
              2.0 * n * b.beta_l[1] * std::pow(w, -a - 1.0) * (1.0 + 1e-9));
        CHECK(norm(m.force_short(x, v)) <=
              2.0 * n * b.beta_s[1] * std::pow(w, -a - 2.0) * (1.0 + 1e-9));
    }

    // Lipschitz in (x, v) with the sup over the segment sampled on a grid
    for (int k = 0; k < 1000; ++k) {
        Vec x1 = random_vec(rng, 2, 8.0), x2 = random_vec(rng, 2, 8.0);
        Vec v1 = random_vec(rng, 2, 0.55), v2 = random_vec(rng, 2, 0.55);
        double sup1 = 0.0, sup2 = 0.0, sup3 = 0.0;
        for (int i = 0; i <= 100; ++i) {
            double eps = i / 100.0;
            double w = 1.0 + norm(x1 * (1.0 - eps) + x2 * eps);
            sup1 = std::max(sup1, std::pow(w, -a - 1.0));
            sup2 = std::max(sup2, std::pow(w, -a - 2.0));
            sup3 = std::max(sup3, std::pow(w, -a - 3.0));
        }
        double dl = norm(m.force_long(x1, v1) - m.force_long(x2, v2));
        double bl = n * b.beta_l[1] / c * norm(v1 - v2) * sup1 +
                    2.0 * std::pow(n, 1.5) * b.beta_l[2] * norm(x1 - x2) * sup2;
        CHECK(dl <= bl * (1.0 + 1e-6));
        double ds = norm(m.force_short(x1, v1) - m.force_short(x2, v2));
        double bs = n * b.beta_s[1] / c * norm(v1 - v2) * sup2 +
                    2.0 * std::pow(n, 1.5) * b.beta_s[2] * norm(x1 - x2) * sup3;
        CHECK(ds <= bs * (1.0 + 1e-6));
    }
}
