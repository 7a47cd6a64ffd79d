#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polymerlab/kernels.hpp"
#include "polymerlab/quadrature.hpp"

using namespace polymer;

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_b_closed(double a, double s, double x) {
    return 0.5 * a * std::sqrt(s / kPi) * std::exp(-s * x * x / 4.0);
}

double gaussian_b_prime_closed(double a, double s, double x) {
    return -(a * s * x / 4.0) * std::sqrt(s / kPi) * std::exp(-s * x * x / 4.0);
}

double summable_b_closed(double a, double s, double x) {
    // -(d/dx)^2 of the gaussian-family profile with the same envelope
    return 0.5 * a * std::sqrt(s / kPi) * std::exp(-s * x * x / 4.0) *
           (s / 2.0 - s * s * x * x / 4.0);
}

}  // namespace

TEST_CASE("gaussian family closed form") {
    auto k = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    CHECK(k.b(0.0) == doctest::Approx(0.28209479177387814).epsilon(1e-14));
    for (double x : {0.0, 0.3, 1.0, 2.5}) {
        CHECK(k.b(x) == doctest::Approx(gaussian_b_closed(1.0, 1.0, x)).epsilon(1e-13));
        CHECK(k.b_prime(x) ==
              doctest::Approx(gaussian_b_prime_closed(1.0, 1.0, x)).epsilon(1e-13));
    }
    auto k2 = Kernel::make("gaussian", 0.5, 0.0, 3.0);
    CHECK(k2.b(0.7) == doctest::Approx(gaussian_b_closed(0.5, 3.0, 0.7)).epsilon(1e-13));
}

TEST_CASE("summable family closed form") {
    auto k = Kernel::make("summable", 1.0, 0.0, 1.0);
    CHECK(k.b(0.0) == doctest::Approx(0.14104739588693907).epsilon(1e-14));
    for (double x : {0.0, 0.5, 2.0, 4.0}) {
        CHECK(k.b(x) == doctest::Approx(summable_b_closed(1.0, 1.0, x)).epsilon(1e-12));
    }
    // negative lobe: positive type in p, not in x
    CHECK(k.b(3.0) < 0.0);
}

TEST_CASE("power-ir value at the origin matches the Gamma-function form") {
    for (double alpha : {0.5, -0.5}) {
        auto k = Kernel::make("power-ir", 1.0, alpha, 1.0);
        const double expect = std::tgamma((alpha + 1.0) / 2.0) / (2.0 * kPi);
        CHECK(k.b(0.0) == doctest::Approx(expect).epsilon(1e-11));
    }
    auto k = Kernel::make("power-ir", 1.0, 0.5, 1.0);
    CHECK(k.b(0.0) == doctest::Approx(0.195031125544703).epsilon(1e-11));
    auto k2 = Kernel::make("power-ir", 1.0, -0.5, 1.0);
    CHECK(k2.b(0.0) == doctest::Approx(0.577033738616470).epsilon(1e-11));
}

TEST_CASE("power-ir values away from the origin") {
    auto k = Kernel::make("power-ir", 1.0, 0.5, 1.0);
    CHECK(k.b(1.0) == doctest::Approx(0.131644683418193).epsilon(1e-9));
    auto k2 = Kernel::make("power-ir", 1.0, -0.5, 1.0);
    CHECK(k2.b(1.0) == doctest::Approx(0.511885690629291).epsilon(1e-9));
}

TEST_CASE("b is even") {
    for (const char* fam : {"gaussian", "summable", "power-ir"}) {
        auto k = Kernel::make(fam, 1.0, 0.5, 1.0);
        for (double x : {0.25, 1.0, 3.5, 7.0}) {
            CHECK(std::abs(k.b(x) - k.b(-x)) < 1e-12);
        }
    }
}

TEST_CASE("quadrature inversion agrees with the closed forms") {
    auto g = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    auto s = Kernel::make("summable", 1.0, 0.0, 1.0);
    for (double x : {0.0, 0.5, 1.0, 2.5, 5.0}) {
        CHECK(std::abs(g.b_quadrature(x) - gaussian_b_closed(1.0, 1.0, x)) <
              1e-8 * (1.0 + std::abs(g.b(x))));
        CHECK(std::abs(s.b_quadrature(x) - summable_b_closed(1.0, 1.0, x)) <
              1e-8 * (1.0 + std::abs(s.b(x))));
        CHECK(std::abs(g.b_prime_quadrature(x) - gaussian_b_prime_closed(1.0, 1.0, x)) <
              1e-8);
    }
}

TEST_CASE("windowed transform pair for the slowly decaying family") {
    // Both sides of Parseval's identity against the Gaussian window
    //   w(x) = e^{-x^2/(2 W^2)},  w_hat(k) = W sqrt(2 pi) e^{-W^2 k^2 / 2},
    // evaluated at p = 0.7 with W = 6 for alpha = 1/2.
    const double alpha = 0.5, W = 6.0, p = 0.7;
    auto k = Kernel::make("power-ir", 1.0, alpha, 1.0);

    const double cut = k.spectral_cutoff() + 2.0;
    QuadratureOptions tight{1e-11, 1e-13, 400};
    auto spectral = integrate(
        [&](double q) {
            const double d = p - q;
            return k.b_hat(q) * W * std::sqrt(2.0 * kPi) *
                   std::exp(-W * W * d * d / 2.0) / (2.0 * kPi);
        },
        -cut, cut, {0.0, p}, tight);
    CHECK(spectral.value == doctest::Approx(0.49428617040491).epsilon(1e-9));

    QuadratureOptions outer{1e-8, 1e-12, 200};
    auto spatial = integrate(
        [&](double x) {
            return 2.0 * k.b_quadrature(x) * std::exp(-x * x / (2.0 * W * W)) *
                   std::cos(p * x);
        },
        0.0, 40.0, {}, outer);
    CHECK(spatial.value == doctest::Approx(0.49428617040491).epsilon(1e-6));
    CHECK(spatial.value == doctest::Approx(spectral.value).epsilon(1e-6));
}

TEST_CASE("spectral endpoints by family") {
    CHECK(Kernel::make("gaussian", 1.0, 0.0, 1.0).b_hat(0.0) == 1.0);
    CHECK(Kernel::make("summable", 1.0, 0.0, 1.0).b_hat(0.0) == 0.0);
    CHECK(Kernel::make("power-ir", 1.0, 0.5, 1.0).b_hat(0.0) == 0.0);
    CHECK(std::isinf(Kernel::make("power-ir", 1.0, -0.5, 1.0).b_hat(0.0)));

    auto k = Kernel::make("power-ir", 2.0, 0.5, 1.0);
    CHECK(k.c_hat(0.7) * k.c_hat(0.7) == doctest::Approx(k.b_hat(0.7)).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Kernel::make("nope", 1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::make("power-ir", 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::make("power-ir", 1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::make("gaussian", 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::make("gaussian", -1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("infrared description") {
    auto g = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    REQUIRE(g.infrared_exponent().has_value());
    CHECK(*g.infrared_exponent() == 0.0);
    auto gc = g.infrared();
    CHECK(gc.C1 == doctest::Approx(1.0));
    CHECK(gc.C2 == doctest::Approx(1.0));
    CHECK(gc.delta == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-13));
    CHECK(!gc.rho_finite);

    auto p = Kernel::make("power-ir", 3.0, -0.5, 4.0);
    REQUIRE(p.infrared_exponent().has_value());
    CHECK(*p.infrared_exponent() == -0.5);
    auto pc = p.infrared();
    CHECK(pc.C1 == doctest::Approx(3.0));
    CHECK(pc.delta == doctest::Approx(std::sqrt(4.0 * std::log(2.0))).epsilon(1e-13));

    auto s = Kernel::make("summable", 1.0, 0.0, 1.0);
    CHECK(!s.infrared_exponent().has_value());
    auto sc = s.infrared();
    CHECK(sc.rho_finite);
    CHECK(sc.rho_squared == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("summed interaction strength") {
    auto s = Kernel::make("summable", 1.0, 0.0, 1.0);
    auto r = rho_squared(s);
    REQUIRE(r.finite);
    CHECK(r.value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));

    // scaling in amplitude and envelope width: a sqrt(pi s)
    auto r2 = rho_squared(Kernel::make("summable", 2.0, 0.0, 1.0));
    CHECK(r2.value == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-10));
    auto r3 = rho_squared(Kernel::make("summable", 1.0, 0.0, 4.0));
    CHECK(r3.value == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-10));

    CHECK(!rho_squared(Kernel::make("gaussian", 1.0, 0.0, 1.0)).finite);
    CHECK(!rho_squared(Kernel::make("power-ir", 1.0, 0.5, 1.0)).finite);
    CHECK(!rho_squared(Kernel::make("power-ir", 1.0, -0.5, 1.0)).finite);
}

TEST_CASE("tabulated derivative tracks the analytic one") {
    auto g = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    auto s = Kernel::make("summable", 1.0, 0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -10.0 + 0.05 * i;
        worst = std::max(worst, std::abs(g.b_prime_fast(x) - g.b_prime(x)));
        worst = std::max(worst, std::abs(s.b_prime_fast(x) - s.b_prime(x)));
    }
    CHECK(worst < 1e-8);

    auto p = Kernel::make("power-ir", 1.0, 0.5, 1.0);
    for (double x : {0.3, 1.0, 2.5}) {
        CHECK(std::abs(p.b_prime_fast(x) - p.b_prime_quadrature(x)) < 2e-5);
    }
}

TEST_CASE("tabulated derivative is odd and compactly supported") {
    for (const char* fam : {"gaussian", "summable", "power-ir"}) {
        auto k = Kernel::make(fam, 1.0, -0.5, 1.0);
        for (double x : {0.1, 0.77, 3.0}) {
            CHECK(k.b_prime_fast(-x) == -k.b_prime_fast(x));
        }
        CHECK(k.b_prime_fast(0.0) == 0.0);
        CHECK(k.b_prime_fast(k.update_radius() + 0.1) == 0.0);
        CHECK(k.b_prime_fast(-k.update_radius() - 5.0) == 0.0);
    }
}

TEST_CASE("second derivative at the origin via central differences") {
    auto g = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    const double h = 1e-4;
    const double second = (g.b_prime(h) - g.b_prime(-h)) / (2.0 * h);
    CHECK(second == doctest::Approx(-0.14104739588693907).epsilon(1e-6));
}

TEST_CASE("frequency support bookkeeping") {
    CHECK(Kernel::make("gaussian", 1.0, 0.0, 1.0).spectral_cutoff() ==
          doctest::Approx(8.0));
    CHECK(Kernel::make("gaussian", 1.0, 0.0, 4.0).spectral_cutoff() ==
          doctest::Approx(16.0));
    auto g = Kernel::make("gaussian", 1.0, 0.0, 1.0);
    CHECK(g.update_radius() > 8.0);
    CHECK(g.update_radius() < 16.0);
}

TEST_CASE("amplitude zero gives the free control") {
    auto z = Kernel::make("gaussian", 0.0, 0.0, 1.0);
    CHECK(z.is_zero());
    CHECK(z.b(0.3) == 0.0);
    CHECK(z.b_hat(0.3) == 0.0);
    CHECK(z.b_prime_fast(0.5) == 0.0);
    auto zr = rho_squared(Kernel::make("summable", 0.0, 0.0, 1.0));
    CHECK(zr.finite);
    CHECK(zr.value == 0.0);
}
