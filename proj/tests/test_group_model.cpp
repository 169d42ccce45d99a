#include <doctest.h>

#include <cmath>
#include <limits>

#include "homog/group_model.hpp"
#include "homog/model_io.hpp"
#include "homog/quadrature.hpp"
#include "homog/rng.hpp"

using namespace homog;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("quasi-norm basics") {
    auto m3 = GroupModel::euclidean(3, 2.0, 8);
    const double zero[3] = {0, 0, 0};
    CHECK(m3.quasi_norm(std::span<const double>(zero, 3)) == 0.0);
    const double x[3] = {3, 4, 0};
    CHECK(m3.quasi_norm(std::span<const double>(x, 3)) == doctest::Approx(5.0).epsilon(1e-15));

    // anisotropic power norm, value pinned from a high-precision evaluation
    auto spec = QuasiNormSpec::anisotropic({1.0, 2.0}, 4.0);
    const double y[2] = {1, 1};
    CHECK(spec.evaluate(std::span<const double>(y, 2)) ==
          doctest::Approx(1.189207115002721).epsilon(1e-14));

    const double bad[3] = {1.0, std::nan(""), 0.0};
    CHECK_THROWS_AS(m3.quasi_norm(std::span<const double>(bad, 3)), std::invalid_argument);
}

TEST_CASE("quasi-norm homogeneity and symmetry by sampling") {
    Rng rng(7);
    auto p3 = QuasiNormSpec::euclidean(3.0);
    auto aniso = QuasiNormSpec::anisotropic({1.0, 2.0, 0.5}, 8.0);
    for (int trial = 0; trial < 50; ++trial) {
        double x[3], neg[3], dil[3];
        for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-2.0, 2.0);
        const double lambda = std::exp(rng.uniform(-1.5, 1.5));
        for (int i = 0; i < 3; ++i) neg[i] = -x[i];

        // isotropic dilation for the p-norm
        for (int i = 0; i < 3; ++i) dil[i] = lambda * x[i];
        const double n0 = p3.evaluate(std::span<const double>(x, 3));
        CHECK(p3.evaluate(std::span<const double>(dil, 3)) ==
              doctest::Approx(lambda * n0).epsilon(1e-12));
        CHECK(p3.evaluate(std::span<const double>(neg, 3)) == doctest::Approx(n0).epsilon(1e-12));

        // weighted dilation lambda^{nu_i} x_i for the anisotropic norm
        const double nu[3] = {1.0, 2.0, 0.5};
        for (int i = 0; i < 3; ++i) dil[i] = std::pow(lambda, nu[i]) * x[i];
        const double a0 = aniso.evaluate(std::span<const double>(x, 3));
        CHECK(aniso.evaluate(std::span<const double>(dil, 3)) ==
              doctest::Approx(lambda * a0).epsilon(1e-12));
        CHECK(aniso.evaluate(std::span<const double>(neg, 3)) == doctest::Approx(a0).epsilon(1e-12));
    }
}

TEST_CASE("sphere quadrature reproduces the polar measure") {
    SUBCASE("round sphere, n=3") {
        auto nodes = build_sphere_quadrature(QuasiNormSpec::euclidean(2.0), 3, 24);
        double sum = 0.0;
        for (const auto& nd : nodes) {
            CHECK(nd.weight > 0.0);
            const double norm = std::hypot(nd.coords[0], nd.coords[1], nd.coords[2]);
            CHECK(std::abs(norm - 1.0) < 1e-12);
            sum += nd.weight;
        }
        CHECK(sum == doctest::Approx(4.0 * kPi).epsilon(1e-10));
    }
    SUBCASE("circle, n=2") {
        auto nodes = build_sphere_quadrature(QuasiNormSpec::euclidean(2.0), 2, 128);
        double sum = 0.0;
        for (const auto& nd : nodes) sum += nd.weight;
        CHECK(sum == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    }
    SUBCASE("max norm, n=2: |S| = 8") {
        // oracle: int_{S^1} |omega|_inf^{-2} d omega = 8 exactly
        auto nodes = build_sphere_quadrature(
            QuasiNormSpec::euclidean(std::numeric_limits<double>::infinity()), 2, 1 << 18);
        double sum = 0.0;
        for (const auto& nd : nodes) sum += nd.weight;
        CHECK(sum == doctest::Approx(8.0).epsilon(1e-8));
    }
    SUBCASE("max norm, n=3: |S| = Q |B| = 24") {
        auto nodes = build_sphere_quadrature(
            QuasiNormSpec::euclidean(std::numeric_limits<double>::infinity()), 3, 256);
        double sum = 0.0;
        for (const auto& nd : nodes) sum += nd.weight;
        CHECK(sum == doctest::Approx(24.0).epsilon(2e-4));
    }
    SUBCASE("n=1 counting measure") {
        auto nodes = build_sphere_quadrature(QuasiNormSpec::euclidean(2.0), 1, 1);
        REQUIRE(nodes.size() == 2);
        CHECK(nodes[0].weight == doctest::Approx(1.0));
        CHECK(nodes[1].weight == doctest::Approx(1.0));
    }
    SUBCASE("stability under resolution doubling (smooth norms)") {
        for (double p : {2.0, 4.0}) {
            auto lo = build_sphere_quadrature(QuasiNormSpec::euclidean(p), 3, 24);
            auto hi = build_sphere_quadrature(QuasiNormSpec::euclidean(p), 3, 48);
            double slo = 0.0, shi = 0.0;
            for (const auto& nd : lo) slo += nd.weight;
            for (const auto& nd : hi) shi += nd.weight;
            CHECK(slo == doctest::Approx(shi).epsilon(1e-8));
        }
    }
    SUBCASE("anisotropic norms are rejected with guidance") {
        CHECK_THROWS_AS(build_sphere_quadrature(QuasiNormSpec::anisotropic({1, 2}, 4.0), 2, 8),
                        std::invalid_argument);
    }
}

TEST_CASE("polar integration") {
    auto model = std::make_shared<GroupModel>(GroupModel::euclidean(3, 2.0, 16));

    SUBCASE("radial indicator, closed form") {
        RadialGridSpec grid(-4.0, 2.0, 8192);
        const double q = 3.0;
        const double exact = model->sphere_measure() *
                             (std::exp(q * grid.s_max) - std::exp(q * grid.s_min)) / q;
        const double got = polar_integrate(*model, grid, [](double, std::size_t) { return 1.0; });
        CHECK(got == doctest::Approx(exact).epsilon(1e-6));
    }
    SUBCASE("zero integrand") {
        RadialGridSpec grid(-4.0, 2.0, 64);
        CHECK(polar_integrate(*model, grid, [](double, std::size_t) { return 0.0; }) == 0.0);
    }
    SUBCASE("Gaussian, pi^{3/2}") {
        RadialGridSpec grid(-12.0, 4.0, 4096);
        const double got = polar_integrate(
            *model, grid, [](double r, std::size_t) { return std::exp(-r * r); });
        CHECK(got == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-6));
    }
    SUBCASE("NaN integrand is reported with location") {
        RadialGridSpec grid(-4.0, 2.0, 64);
        CHECK_THROWS_AS(polar_integrate(*model, grid,
                                        [](double r, std::size_t) {
                                            return r > 1.0 ? std::nan("") : 1.0;
                                        }),
                        NumericError);
    }
}

TEST_CASE("polar integration agrees with a dense Cartesian Riemann sum (n=2)") {
    auto model = std::make_shared<GroupModel>(GroupModel::euclidean(2, 2.0, 256));
    RadialGridSpec grid(-8.0, 3.0, 4096);
    // radial bump times a first-harmonic angular factor
    auto f = [](double x0, double x1) {
        const double r = std::hypot(x0, x1);
        if (r <= 0.0) return 0.0;
        const double s = std::log(r);
        const double u = (s - 0.2) / 1.1;
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - u * u)) * (1.0 + 0.3 * x0 / r);
    };
    const double polar = polar_integrate(*model, grid, [&](double r, std::size_t k) {
        const auto& y = model->sphere()[k].coords;
        return f(r * y[0], r * y[1]);
    });
    // midpoint Cartesian oracle on [-L, L]^2
    const double big_l = 4.5;
    const int m = 3000;
    const double h = 2.0 * big_l / m;
    double cart = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            cart += f(-big_l + h * (i + 0.5), -big_l + h * (j + 0.5));
    cart *= h * h;
    CHECK(polar == doctest::Approx(cart).epsilon(1e-4));
}

TEST_CASE("dilation covariance of the polar integral") {
    auto model = std::make_shared<GroupModel>(GroupModel::euclidean(3, 2.0, 12));
    RadialGridSpec grid(-10.0, 6.0, 4096);
    auto bump = [](double r) {
        const double u = (std::log(r) - 0.3) / 1.4;
        return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
    };
    const double base = polar_integrate(*model, grid, [&](double r, std::size_t) { return bump(r); });
    for (double lambda : {1.7, 0.41}) {
        const double dilated =
            polar_integrate(*model, grid, [&](double r, std::size_t) { return bump(lambda * r); });
        CHECK(dilated == doctest::Approx(std::pow(lambda, -3.0) * base).epsilon(1e-8));
    }
}

TEST_CASE("ball volume") {
    auto model = GroupModel::euclidean(3, 2.0, 24);
    CHECK(ball_volume(model, 0.0) == 0.0);
    CHECK(ball_volume(model, 1.0) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-10));
    CHECK(ball_volume(model, 2.0) ==
          doctest::Approx(std::pow(2.0, 3.0) * ball_volume(model, 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(ball_volume(model, -1.0), std::invalid_argument);

    auto abs_model = GroupModel::abstract_radial(2.5, 3.0);
    CHECK(ball_volume(abs_model, 2.0) ==
          doctest::Approx(std::pow(2.0, 2.5) * 3.0 / 2.5).epsilon(1e-14));
}

TEST_CASE("Monte Carlo sphere measure matches quadrature and closed forms") {
    // euclidean n=2: |S| = 2 pi
    const double mc2 =
        monte_carlo_sphere_measure(QuasiNormSpec::euclidean(2.0), 2, 2.0, 2000000, 11);
    CHECK(mc2 == doctest::Approx(2.0 * kPi).epsilon(5e-3));
    // anisotropic nu=(1,2), 2N=4, Q=3: x1^4 + x2^2 <= 1 has area 4 int_0^1 sqrt(1-x^4) dx
    const double vol = 4.0 * adaptive_simpson(
                                 [](double x) { return std::sqrt(1.0 - x * x * x * x); }, 0.0, 1.0,
                                 1e-12);
    const double mc_aniso =
        monte_carlo_sphere_measure(QuasiNormSpec::anisotropic({1.0, 2.0}, 4.0), 2, 3.0, 2000000, 5);
    CHECK(mc_aniso == doctest::Approx(3.0 * vol).epsilon(5e-3));
}

TEST_CASE("model JSON loading") {
    nlohmann::json j = {
        {"ambient_dim", 3},
        {"Q", 3.0},
        {"norm", {{"kind", "euclidean"}, {"p", 2.0}}},
        {"sphere_resolution", 16},
        {"grid", {{"s_min", -12.0}, {"s_max", 8.0}, {"N", 4096}}},
    };
    auto cfg = load_model(j);
    CHECK(cfg.model->homogeneous_dimension() == 3.0);
    CHECK(cfg.grid.n == 4096);
    CHECK(cfg.model->sphere_measure() == doctest::Approx(4.0 * kPi).epsilon(1e-10));

    nlohmann::json abstract = {{"Q", 2.5}, {"sphere_measure", 6.0}};
    auto acfg = load_model(abstract);
    CHECK(acfg.model->radial_only());
    CHECK(acfg.model->sphere_measure() == 6.0);

    nlohmann::json bad = j;
    bad["Q"] = 4.0; // isotropic euclidean requires Q = n
    CHECK_THROWS_AS(load_model(bad), std::invalid_argument);
}
