#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "stablecz/density.hpp"

using namespace stablecz;
using density::ProcessKind;
using density::StableSpec;
constexpr double kPi = std::numbers::pi;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> v) {
    Eigen::VectorXd x(v.size());
    int i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

// closed forms at t = 1
double gauss1d(double r) { return std::exp(-0.25 * r * r) / std::sqrt(4 * kPi); }
double cauchy1d(double r) { return 1.0 / (kPi * (1.0 + r * r)); }
double cauchy2d(double r) { return 1.0 / (2 * kPi * std::pow(1.0 + r * r, 1.5)); }
double gauss2d(double r) { return std::exp(-0.25 * r * r) / (4 * kPi); }

}  // namespace

TEST_CASE("closed-form densities at the origin") {
    CHECK(density::eval_density_fourier({2.0, 1}, pt({0.0})) ==
          doctest::Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-10));
    CHECK(density::eval_density_fourier({1.0, 1}, pt({0.0})) ==
          doctest::Approx(1.0 / kPi).epsilon(1e-10));
    CHECK(density::eval_density_fourier({1.0, 2}, pt({0.0, 0.0})) ==
          doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-10));
}

TEST_CASE("closed-form densities on grids") {
    for (int i = 0; i < 25; ++i) {
        const double r1 = 10.0 * i / 24.0;
        const double rg = 6.0 * i / 24.0;
        CHECK(density::eval_density_fourier({1.0, 1}, pt({r1})) ==
              doctest::Approx(cauchy1d(r1)).epsilon(1e-9));
        CHECK(density::eval_density_fourier({2.0, 1}, pt({rg})) ==
              doctest::Approx(gauss1d(rg)).epsilon(1e-9));
        CHECK(density::eval_density_fourier({1.0, 2}, pt({r1, 0.0})) ==
              doctest::Approx(cauchy2d(r1)).epsilon(1e-9));
        CHECK(density::eval_density_fourier({2.0, 2}, pt({0.0, rg})) ==
              doctest::Approx(gauss2d(rg)).epsilon(1e-9));
    }
}

TEST_CASE("radial symmetry is exact by construction") {
    StableSpec s{1.3, 2};
    const double a = density::eval_density_fourier(s, pt({0.3, -0.4}));
    const double b = density::eval_density_fourier(s, pt({-0.3, 0.4}));
    CHECK(a == b);
    CHECK(a > 0.0);
}

TEST_CASE("scaled density") {
    CHECK(density::eval_scaled({1.0, 1}, pt({0.0}), 2.0) ==
          doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-10));
    StableSpec s{1.6, 1};
    CHECK(density::eval_scaled(s, pt({0.7}), 1.0) ==
          doctest::Approx(density::eval_density_fourier(s, pt({0.7})))
              .epsilon(1e-12));
    CHECK_THROWS(density::eval_scaled(s, pt({0.7}), 0.0));
}

TEST_CASE("gradient and Hessian structure") {
    StableSpec s{1.5, 2};
    CHECK(density::grad_density(s, pt({0.0, 0.0})).norm() == 0.0);
    auto g1 = density::grad_density(s, pt({0.4, -1.1}));
    auto g2 = density::grad_density(s, pt({-0.4, 1.1}));
    CHECK((g1 + g2).norm() < 1e-14);

    // alpha=2, n=1: d/dx phi at x=1 is -(1/2) e^{-1/4} / sqrt(4 pi)
    auto g = density::grad_density({2.0, 1}, pt({1.0}));
    CHECK(g[0] == doctest::Approx(-0.5 * std::exp(-0.25) / std::sqrt(4 * kPi))
                      .epsilon(1e-9));

    // Hessian of the 1d Cauchy density: F''(r) = (2/pi)(3r^2-1)/(1+r^2)^3
    auto H = density::second_derivs({1.0, 1}, pt({0.8}));
    const double expect =
        2.0 / kPi * (3 * 0.64 - 1.0) / std::pow(1.64, 3);
    CHECK(H(0, 0) == doctest::Approx(expect).epsilon(1e-9));

    auto H2 = density::second_derivs(s, pt({0.5, 0.2}));
    CHECK(H2(0, 1) == doctest::Approx(H2(1, 0)).epsilon(1e-12));
}

TEST_CASE("normalization of scaled densities") {
    // integral over R of phi_y for n=1 via the radial profile plus the
    // power-law tail
    for (double alpha : {0.7, 1.0, 1.5, 2.0}) {
        StableSpec s{alpha, 1};
        density::RadialDensity f(s);
        for (double y : {0.5, 1.0, 2.0}) {
            auto integrand = [&](double r) {
                return f(r / y) / y;
            };
            auto q = quad::integrate(integrand, 0.0, 1.0, {1e-12, 1e-10, 48});
            double R = y, tail = 0.0;
            quad::QuadResult q2;
            if (alpha < 2.0) {
                R = 1e5 * y;
                q2 = quad::integrate_log(integrand, 1.0, R, {1e-12, 1e-10, 48});
                tail = integrand(R) * R / alpha;  // C r^{-1-alpha} tail
            } else {
                q2 = quad::integrate_log(integrand, 1.0, 40.0 * y,
                                         {1e-12, 1e-10, 48});
            }
            const double total = 2.0 * (q.value + q2.value + tail);
            CHECK(total == doctest::Approx(1.0).epsilon(2e-6));
        }
    }
}

TEST_CASE("subordination route agrees with Fourier inversion") {
    // closed-form anchors
    CHECK(density::eval_density_subordination({1.0, 1}, pt({0.0})) ==
          doctest::Approx(1.0 / kPi).epsilon(1e-8));
    CHECK(density::eval_density_subordination({1.0, 1}, pt({1.0})) ==
          doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-8));
    // alpha=2 degenerate clock
    CHECK(density::eval_density_subordination({2.0, 2}, pt({1.0, 1.0})) ==
          doctest::Approx(gauss2d(std::sqrt(2.0))).epsilon(1e-12));

    for (double alpha : {0.5, 1.5}) {
        for (int n : {1, 2}) {
            StableSpec s{alpha, n};
            for (double r : {0.0, 0.7, 3.0, 10.0}) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
                x[0] = r;
                const double a = density::eval_density_fourier(s, x);
                const double b = density::eval_density_subordination(s, x);
                CHECK(b == doctest::Approx(a).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("relativistic density: routes agree and m=0 reduces to stable") {
    StableSpec rel{1.0, 1, ProcessKind::relativistic, 1.0};
    const double a = density::eval_density_fourier(rel, pt({0.5}));
    const double b = density::eval_density_subordination(rel, pt({0.5}));
    CHECK(b == doctest::Approx(a).epsilon(1e-6));

    StableSpec rel0{1.3, 1, ProcessKind::relativistic, 0.0};
    StableSpec pure{1.3, 1};
    CHECK(density::eval_density_fourier(rel0, pt({0.9})) ==
          density::eval_density_fourier(pure, pt({0.9})));
}

TEST_CASE("profile, decay constants and tail behaviour") {
    StableSpec s{1.0, 1};
    auto p = density::build_profile(s, 1e-3, 1e3, 600);
    CHECK((p.phi > 0.0).all());
    auto d = density::decay_constants(p);
    CHECK(d.conclusive);
    // Cauchy: (1+r^2) phi = 1/pi exactly, c1 -> 2/pi, c2 -> 6/pi
    CHECK(d.c0 == doctest::Approx(1.0 / kPi).epsilon(1e-6));
    CHECK(d.c1 == doctest::Approx(2.0 / kPi).epsilon(1e-4));
    CHECK(d.c2 == doctest::Approx(6.0 / kPi).epsilon(1e-4));
    CHECK(d.c0 >= density::eval_density_fourier(s, pt({0.0})) * (1 - 1e-9));

    // tail: r^{n+alpha} phi varies < 2% over the last decade
    const auto& r = p.radii;
    double lo = 1e300, hi = 0;
    for (int i = 0; i < r.size(); ++i) {
        if (r[i] < 100.0) continue;
        const double w = std::pow(r[i], 2.0) * p.phi[i];
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    CHECK((hi - lo) / hi < 0.02);

    // stability of suprema under table-radius doubling
    StableSpec s15{1.5, 1};
    auto p1 = density::build_profile(s15, 1e-3, 1e3, 500);
    auto p2 = density::build_profile(s15, 1e-3, 2e3, 550);
    auto d1 = density::decay_constants(p1);
    auto d2 = density::decay_constants(p2);
    CHECK(std::abs(d1.c0 - d2.c0) / d2.c0 < 0.01);
    CHECK(std::abs(d1.c1 - d2.c1) / d2.c1 < 0.01);
    CHECK(std::abs(d1.c2 - d2.c2) / d2.c2 < 0.01);
}

TEST_CASE("profile json round trip") {
    StableSpec s{1.5, 2};
    auto p = density::build_profile(s, 1e-2, 1e2, 64);
    const std::string path = "test_profile_tmp.json";
    density::save_profile_json(p, path);
    auto q = density::load_profile_json(path);
    CHECK(q.spec.alpha == p.spec.alpha);
    CHECK(q.spec.dim == p.spec.dim);
    CHECK(q.radii.size() == p.radii.size());
    CHECK(q.phi[10] == p.phi[10]);
    std::filesystem::remove(path);
}

TEST_CASE("interpolant matches direct evaluation") {
    StableSpec s{1.2, 1};
    density::RadialInterpolant itp(s, 1e-3, 1e3, 800);
    density::RadialDensity f(s);
    // where the direct quadrature is itself well-conditioned, the
    // interpolant reproduces it
    for (double r : {0.0, 5e-4, 0.02, 0.5, 3.0, 40.0}) {
        for (int k = 0; k < 4; ++k) {
            const double a = itp.deriv(k, r), b = f.deriv(k, r);
            const double scale = std::max(std::abs(b), 1e-12);
            const double tol = (k == 3) ? 2e-4 : 1e-6;
            CHECK(std::abs(a - b) / scale < tol);
        }
    }
    // beyond the table the continuation follows the decay power law
    for (int k = 0; k < 4; ++k) {
        const double ratio = itp.deriv(k, 4e3) / itp.deriv(k, 2e3);
        CHECK(ratio ==
              doctest::Approx(std::pow(0.5, 1 + 1.2 + k)).epsilon(1e-12));
    }
    // continuity at the table edge
    for (int k = 0; k < 3; ++k) {
        const double in = itp.deriv(k, 1e3 * (1 - 1e-9));
        const double out = itp.deriv(k, 1e3 * (1 + 1e-9));
        CHECK(in == doctest::Approx(out).epsilon(1e-6));
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS(StableSpec{0.0, 1}.validate());
    CHECK_THROWS(StableSpec{2.5, 1}.validate());
    CHECK_THROWS(StableSpec{1.0, 0}.validate());
    CHECK_THROWS((StableSpec{1.0, 1, ProcessKind::pure_stable, 2.0}).validate());
    CHECK_NOTHROW((StableSpec{1.0, 1, ProcessKind::relativistic, 2.0}).validate());
}
