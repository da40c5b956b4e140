#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stablecz/subordinator.hpp"

using namespace stablecz;
using subordinator::SubordinatorSpec;
constexpr double kPi = std::numbers::pi;

namespace {
// 1/2-stable subordinator density: (2 sqrt(pi))^{-1} s^{-3/2} e^{-1/(4s)}
double levy_half(double s) {
    return 0.5 / std::sqrt(kPi) * std::pow(s, -1.5) * std::exp(-0.25 / s);
}
}  // namespace

TEST_CASE("laplace exponent closed forms") {
    CHECK(subordinator::laplace_exponent({0.5, 0.0}, 4.0) == doctest::Approx(2.0));
    CHECK(subordinator::laplace_exponent({0.5, 1.0}, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(subordinator::laplace_exponent({0.75, 2.0}, 5.0) ==
          doctest::Approx(std::pow(5.0 + std::pow(2.0, 4.0 / 3.0), 0.75) - 2.0));
    // Phi(0) = 0 and monotone
    SubordinatorSpec sp{0.3, 0.7};
    CHECK(subordinator::laplace_exponent(sp, 0.0) == doctest::Approx(0.0));
    double prev = -1.0;
    for (double l : {0.1, 1.0, 10.0, 100.0}) {
        const double v = subordinator::laplace_exponent(sp, l);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("index 1/2 closed form and contour route cross-validate") {
    SubordinatorSpec half{0.5, 0.0};
    CHECK(subordinator::eval_eta(half, 1.0) ==
          doctest::Approx(levy_half(1.0)).epsilon(1e-13));
    for (double s : {0.05, 0.3, 1.0, 1.9, 2.5, 20.0, 500.0}) {
        CHECK(subordinator::eval_eta_contour(half, s) ==
              doctest::Approx(levy_half(s)).epsilon(1e-10));
    }
}

TEST_CASE("laplace transform consistency") {
    for (double index : {0.25, 0.5, 0.75}) {
        SubordinatorSpec sp{index, 0.0};
        for (double lam : {0.5, 1.0, 2.0, 4.0}) {
            CHECK(subordinator::laplace_residual(sp, lam) < 1e-6);
        }
        CHECK(subordinator::eta_normalization(sp) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
    // relativistic: factorization keeps the transform consistent
    SubordinatorSpec rel{0.5, 1.0};
    CHECK(subordinator::laplace_residual(rel, 1.0) < 1e-6);
    CHECK(subordinator::eta_normalization(rel) ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("relativistic factorization and m = 0 reduction") {
    SubordinatorSpec rel{0.5, 1.0}, pure{0.5, 0.0};
    // eta_m(1,s) = e^m e^{-m^{1/index} s} eta_0(1,s); at m = 1, s = 1 the
    // two exponentials cancel
    CHECK(subordinator::eval_eta(rel, 1.0) ==
          doctest::Approx(levy_half(1.0)).epsilon(1e-13));
    for (double s : {0.2, 1.0, 3.0}) {
        const double want =
            std::exp(1.0 - s) * subordinator::eval_eta(pure, s);
        CHECK(subordinator::eval_eta(rel, s) == doctest::Approx(want).epsilon(1e-13));
    }
    // bitwise m = 0 reduction
    SubordinatorSpec rel0{0.66, 0.0};
    for (double s : {0.3, 1.1, 8.0})
        CHECK(subordinator::eval_eta(rel0, s) ==
              subordinator::eval_eta({0.66, 0.0}, s));
    CHECK(subordinator::laplace_exponent({0.66, 0.0}, 3.0) ==
          std::pow(3.0, 0.66));
}

TEST_CASE("eta bound supremum") {
    // index 1/2: s^{3/2} eta = (2 sqrt(pi))^{-1} e^{-1/(4s)} increases to
    // (2 sqrt(pi))^{-1}
    auto b = subordinator::check_etabound({0.5, 0.0});
    CHECK(b.stable);
    CHECK(b.constant == doctest::Approx(0.5 / std::sqrt(kPi)).epsilon(1e-6));
    // definition of the supremum
    SubordinatorSpec sp{0.75, 0.0};
    auto b2 = subordinator::check_etabound(sp);
    CHECK(b2.constant > 0.0);
    for (double s : {1e-2, 1.0, 1e2}) {
        CHECK(b2.constant >=
              std::pow(s, 1.75) * subordinator::eval_eta(sp, s) - 1e-12);
    }
    // stability under extension of the default range
    auto b3 = subordinator::check_etabound(sp, 1e-3, 2e3, 660);
    CHECK(std::abs(b3.constant - b2.constant) / b2.constant < 0.01);
}

TEST_CASE("growth exponent of the laplace exponent") {
    CHECK(subordinator::check_growth({0.5, 0.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(subordinator::check_growth({0.9, 0.0}) ==
          doctest::Approx(0.9).epsilon(1e-12));
    // relativistic: Phi(lambda) = sqrt(lambda+1) - 1, whose fitted
    // log-log slope on [1e2,1e6] sits slightly above the limit 1/2
    const double s = subordinator::check_growth({0.5, 1.0});
    CHECK(s >= 0.49);
    CHECK(s <= 0.52);
}

TEST_CASE("fourier ray integral") {
    // alpha = 1 (index 1/2): integral t e^{-4 pi t} dt = 1/(16 pi^2)
    CHECK(subordinator::check_fourierray({0.5, 0.0}) ==
          doctest::Approx(1.0 / (16 * kPi * kPi)).epsilon(1e-9));
    // alpha = 2 (degenerate index 1): integral t e^{-8 pi^2 t^2} dt
    CHECK(subordinator::check_fourierray({1.0, 0.0}) ==
          doctest::Approx(1.0 / (16 * kPi * kPi)).epsilon(1e-9));
    // positive for a generic spec
    CHECK(subordinator::check_fourierray({0.35, 0.5}) > 0.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS(subordinator::eval_eta({1.0, 0.0}, 1.0));
    CHECK_THROWS(subordinator::eval_eta({0.5, -1.0}, 1.0));
    CHECK_THROWS(subordinator::eval_eta({0.5, 0.0}, 0.0));
    CHECK_NOTHROW(subordinator::laplace_exponent({1.0, 0.0}, 1.0));
}
