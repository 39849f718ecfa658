#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "relscat/field.hpp"
#include "relscat/kinematics.hpp"

using namespace relscat;

namespace {
Vec random_vec(std::mt19937& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}
}  // namespace

TEST_CASE("g maps zero to zero and stays below c") {
    CHECK(norm(g_map(Vec{0.0, 0.0}, 1.0)) == 0.0);
    CHECK(norm(g_map(Vec{1e8, -3e7}, 1.0)) < 1.0);
}

TEST_CASE("g at a large impulse") {
    Vec v = g_map(Vec{10.0, 0.0}, 1.0);
    CHECK(v[0] == doctest::Approx(10.0 / std::sqrt(101.0)).epsilon(1e-14));
    CHECK(v[1] == 0.0);
}

TEST_CASE("g_inv at 0.6c") {
    Vec p = g_inv(Vec{0.6, 0.0}, 1.0);
    CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("g and g_inv invert each other") {
    Vec v{0.5, 0.0};
    Vec back = g_map(g_inv(v, 1.0), 1.0);
    CHECK(norm(back - v) <= 1e-12);

    std::mt19937 rng(7);
    for (int k = 0; k < 1000; ++k) {
        Vec p = random_vec(rng, 3, 5.0);
        Vec q = g_inv(g_map(p, 2.0), 2.0);
        CHECK(norm(q - p) <= 1e-11 * (1.0 + norm(p)));
    }
}

TEST_CASE("g_inv rejects superluminal input") {
    CHECK_THROWS_AS(g_inv(Vec{1.0, 0.0}, 1.0), SpeedExceeded);
    CHECK_THROWS_AS(g_inv(Vec{0.8, 0.8}, 1.0), SpeedExceeded);
}

TEST_CASE("rest energy and moving energy") {
    FieldModel zero(2, 1.0, 1.0, FieldParams{});
    KinState rest = KinState::from_xv(Vec{1.0, 2.0}, Vec{0.0, 0.0}, 1.0);
    CHECK(energy(zero, rest) == doctest::Approx(1.0).epsilon(1e-14));
    KinState mv = KinState::from_xv(Vec{0.0, 0.0}, Vec{0.6, 0.0}, 1.0);
    CHECK(energy(zero, mv) == doctest::Approx(1.25).epsilon(1e-13));
}

TEST_CASE("mu threshold values") {
    CHECK(mu_threshold(0.0, 1.0) == 0.0);
    CHECK(std::abs(mu_threshold(1e12, 1.0) - 1.0) <= 1e-5);
    CHECK(mu_threshold(1.0, 1.0) ==
          doctest::Approx(std::sqrt(2.0 / (1.0 + std::sqrt(5.0)))).epsilon(1e-14));
    CHECK_THROWS_AS(mu_threshold(-1.0, 1.0), NegativeInput);
}

TEST_CASE("mu is strictly increasing") {
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
        double sigma = std::pow(10.0, -6.0 + 12.0 * i / 40.0);
        double m = mu_threshold(sigma, 1.0);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("gradient rows of g: norm bound and identity") {
    std::mt19937 rng(11);
    const double c = 1.3;
    for (int k = 0; k < 1000; ++k) {
        Vec p = random_vec(rng, 3, 4.0);
        double cap = 1.0 / (1.0 + norm2(p) / (c * c));
        for (int i = 0; i < 3; ++i) {
            Vec gr = grad_g_row(p, c, i);
            CHECK(norm2(gr) <= cap * (1.0 + 1e-12));
        }
    }
    // analytic rows match central differences
    for (int k = 0; k < 50; ++k) {
        Vec p = random_vec(rng, 3, 3.0);
        for (int i = 0; i < 3; ++i) {
            Vec gr = grad_g_row(p, c, i);
            for (int j = 0; j < 3; ++j) {
                double h = 1e-6 * std::max(1.0, std::abs(p[j]));
                Vec pp = p, pm = p;
                pp[j] += h;
                pm[j] -= h;
                double fd = (g_map(pp, c)[i] - g_map(pm, c)[i]) / (2.0 * h);
                CHECK(gr[j] == doctest::Approx(fd).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("Lipschitz bounds for g and its gradient, grid sup") {
    std::mt19937 rng(13);
    const double c = 1.0;
    const int n = 3;
    for (int k = 0; k < 1000; ++k) {
        Vec x = random_vec(rng, n, 6.0), y = random_vec(rng, n, 6.0);
        double sup_g = 0.0, sup_dg = 0.0;
        for (int m = 0; m <= 100; ++m) {
            double eps = m / 100.0;
            Vec mid = x * eps + y * (1.0 - eps);
            double q = 1.0 + norm2(mid) / (c * c);
            sup_g = std::max(sup_g, 1.0 / std::sqrt(q));
            sup_dg = std::max(sup_dg, 1.0 / q);
        }
        CHECK(norm(g_map(x, c) - g_map(y, c)) <=
              std::sqrt((double)n) * norm(x - y) * sup_g * (1.0 + 1e-6));
        for (int i = 0; i < n; ++i) {
            CHECK(norm(grad_g_row(x, c, i) - grad_g_row(y, c, i)) <=
                  3.0 * std::sqrt((double)n) / c * norm(x - y) * sup_dg * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("kinematic state caches the impulse") {
    KinState st = KinState::from_xv(Vec{1.0, -2.0}, Vec{0.3, 0.4}, 1.0);
    CHECK(norm(st.p - g_inv(st.v, 1.0)) <= 1e-12 * norm(st.p));
    CHECK(norm(g_map(st.p, 1.0) - st.v) <= 1e-12);
}
