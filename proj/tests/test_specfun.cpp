#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lamusic/errors.hpp"
#include "lamusic/specfun.hpp"

using namespace lamusic;
using namespace lamusic::specfun;

namespace {

// Independent oracle: the ascending series in long double. Adequate for
// |x| <~ 5, which is where the J_0 root and the small-x checks live.
long double j0_series_oracle(long double x) {
  long double term = 1.0L;
  long double sum = 1.0L;
  const long double q = -x * x / 4.0L;
  for (int m = 1; m < 80; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
  }
  return sum;
}

long double j0_root_oracle() {
  long double lo = 2.0L;
  long double hi = 3.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (j0_series_oracle(lo) * j0_series_oracle(mid) <= 0.0L) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5L * (lo + hi);
}

}  // namespace

TEST_CASE("J_n at the origin") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(7, 0.0) == 0.0);
}

TEST_CASE("first J_0 root") {
  const long double root = j0_root_oracle();
  // Frozen from the bisection oracle above.
  CHECK(static_cast<double>(root) == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(std::abs(bessel_j(0, 2.404826)) < 1e-5);
  CHECK(std::abs(bessel_j(0, static_cast<double>(root))) < 1e-15);
}

TEST_CASE("J_n matches the long-double series oracle for small arguments") {
  for (double x = 0.05; x < 4.0; x += 0.173) {
    CHECK(std::abs(bessel_j(0, x) - static_cast<double>(j0_series_oracle(x))) < 1e-14);
  }
}

TEST_CASE("uniform bound on J_p") {
  CHECK(std::abs(bessel_j(5, 10.0)) <= 0.674885 / std::cbrt(5.0));
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> order(1, 60);
  std::uniform_real_distribution<double> arg(0.1, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const int p = order(rng);
    const double x = arg(rng);
    CHECK(std::abs(bessel_j(p, x)) <= bessel_uniform_bound(p, x));
  }
  CHECK_THROWS_AS(bessel_uniform_bound(0, 1.0), DomainError);
}

TEST_CASE("J_n agrees with libstdc++ and mpmath reference values") {
  // mpmath, 30 digits.
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.765197686557966551).epsilon(1e-15));
  CHECK(std::abs(bessel_j(100, 150.0) - (-0.0153595261184053906)) < 1e-13);
  CHECK(std::abs(bessel_j(200, 200.0) - 0.0764876089309533197) < 1e-13);
  CHECK(std::abs(bessel_j(3, 45.5) - (-0.0872571222261870402)) < 1e-13);

  double worst = 0.0;
  for (int n = 0; n <= 200; n += 7) {
    for (double x = 0.01; x <= 200.0; x *= 1.37) {
      worst = std::max(worst, std::abs(bessel_j(n, x) - std::cyl_bessel_j(n, x)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("negative arguments use the reflection identity") {
  CHECK(bessel_j(3, -2.5) == doctest::Approx(-bessel_j(3, 2.5)));
  CHECK(bessel_j(4, -2.5) == doctest::Approx(bessel_j(4, 2.5)));
  const auto seq = bessel_j_sequence(5, -7.0);
  CHECK(seq[1] == doctest::Approx(-bessel_j(1, 7.0)));
}

TEST_CASE("sequence agrees with scalar evaluation") {
  for (double x : {0.3, 2.0, 17.5, 41.0, 120.0}) {
    const auto seq = bessel_j_sequence(60, x);
    for (int n = 0; n <= 60; ++n) CHECK(std::abs(seq[n] - bessel_j(n, x)) < 1e-13);
  }
}

TEST_CASE("three-term recurrence") {
  double worst = 0.0;
  for (int n = 1; n <= 50; ++n) {
    for (double x = 0.1; x <= 100.0; x *= 1.21) {
      const double a = bessel_j(n - 1, x);
      const double b = bessel_j(n + 1, x);
      const double c = 2.0 * n / x * bessel_j(n, x);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      worst = std::max(worst, std::abs(a + b - c) / scale);
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("sum of squares normalisation") {
  for (double x : {0.5, 3.0, 10.0, 37.7, 90.0}) {
    const int n_max = static_cast<int>(std::ceil(x)) + 40;
    const auto j = bessel_j_sequence(n_max, x);
    double sum = j[0] * j[0];
    for (int n = 1; n <= n_max; ++n) sum += 2.0 * j[n] * j[n];
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("Y_n values and Wronskian") {
  CHECK(bessel_y(0, 1.0) == doctest::Approx(0.0882569642156769580).epsilon(1e-12));
  CHECK(bessel_y(5, 3.7) == doctest::Approx(-0.979065068233542057).epsilon(1e-12));
  CHECK(bessel_y(1, 45.5) == doctest::Approx(-0.0873151418730383387).epsilon(1e-12));

  for (double x : {1.0, 0.01, 0.7, 5.3, 39.9, 40.1, 150.0}) {
    for (int n : {0, 1, 4, 12}) {
      const double w = bessel_j(n + 1, x) * bessel_y(n, x) - bessel_j(n, x) * bessel_y(n + 1, x);
      const double expected = 2.0 / (std::numbers::pi * x);
      CHECK(std::abs(w - expected) <= 1e-10 * expected);
    }
  }

  double worst = 0.0;
  for (int n = 0; n <= 30; n += 3) {
    for (double x = 0.5; x <= 200.0; x *= 1.29) {
      const double ref = std::cyl_neumann(n, x);
      worst = std::max(worst, std::abs(bessel_y(n, x) - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("Y_n domain handling") {
  CHECK_THROWS_AS(bessel_y(0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_y(0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0, std::nan("")), DomainError);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
  // Logarithmic divergence is still representable at 1e-300.
  const double tiny = bessel_y(0, 1e-300);
  CHECK(std::isfinite(tiny));
  CHECK(tiny < -400.0);
  CHECK_THROWS_AS(bessel_y(40, 1e-300), NumericalError);
}

TEST_CASE("Helmholtz Green's function") {
  const double k = 2.0 * std::numbers::pi / 0.4;
  const Complex g = green_helmholtz(k, 1.0);
  CHECK(g.imag() == doctest::Approx(-0.25 * bessel_j(0, k)));
  CHECK(g.real() == doctest::Approx(0.25 * bessel_y(0, k)));

  const double kd = 50.0;
  const double expected = 0.25 * std::sqrt(2.0 / (std::numbers::pi * kd));
  CHECK(std::abs(green_helmholtz(1.0, kd)) == doctest::Approx(expected).epsilon(0.01));

  const Complex near = green_helmholtz(k, 1.0296);
  CHECK(std::isfinite(near.real()));
  CHECK(std::isfinite(near.imag()));
  CHECK(std::abs(near) > 0.0);

  CHECK_THROWS_AS(green_helmholtz(k, 0.0), DomainError);
  CHECK_THROWS_AS(green_helmholtz(-1.0, 1.0), DomainError);
}
