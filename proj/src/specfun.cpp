#include "lamusic/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lamusic/errors.hpp"

namespace lamusic::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kAsymptoticThreshold = 40.0;

void require_order(int n) {
  if (n < 0) throw DomainError("Bessel order must be non-negative, got " + std::to_string(n));
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("Bessel argument must be finite");
}

// Ascending series sum_m (-1)^m (x/2)^(2m+n) / (m! (m+n)!). Used for |x| < 1,
// where every term is smaller than the previous one and there is no
// cancellation to speak of.
double j_power_series(int n, double x) {
  const double half = 0.5 * x;
  double lead = 1.0;
  for (int i = 1; i <= n; ++i) lead *= half / i;
  if (lead == 0.0) return 0.0;
  const double q = -half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<double>(m) * (m + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return lead * sum;
}

int miller_start(int max_order, double x) {
  const double top = std::max(static_cast<double>(max_order), x);
  int m = static_cast<int>(top + 20.0 + 12.0 * std::cbrt(top + 1.0));
  if (m % 2) ++m;
  return m;
}

// Miller backward recurrence for J_0..J_max_order at x >= 1 (any size),
// normalised with J_0 + 2 sum_k J_2k = 1.
std::vector<double> j_miller(int max_order, double x) {
  const int start = miller_start(max_order, x);
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1e-30;
  double norm = 0.0;
  for (int n = start; n >= 1; --n) {
    f[n - 1] = (2.0 * n / x) * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > 1e250) {
      for (int j = n - 1; j <= start; ++j) f[j] *= 1e-250;
      norm *= 1e-250;
    }
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * f[n - 1];
  }
  norm += f[0];
  std::vector<double> out(f.begin(), f.begin() + max_order + 1);
  for (double& v : out) v /= norm;
  return out;
}

// J_0..J_max_order for x >= 0.
std::vector<double> j_table(int max_order, double x) {
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < 1.0) {
    for (int n = 0; n <= max_order; ++n) out[n] = j_power_series(n, x);
    return out;
  }
  return j_miller(max_order, x);
}

struct HankelPQ {
  double p;
  double q;
};

// P and Q of the Hankel large-argument expansion for order nu (0 or 1).
HankelPQ hankel_pq(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double p = 1.0;
  double q = 0.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;  // asymptotic series started to diverge
    prev = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (std::abs(term) < 1e-17) break;
  }
  return {p, q};
}

struct JY {
  double j;
  double y;
};

// J_nu and Y_nu, nu in {0, 1}, from the asymptotic expansion. The phase
// chi = x - (nu/2 + 1/4) pi is expanded into sin/cos of x directly so that no
// precision is lost subtracting a multiple of pi from a large argument.
JY hankel_asymptotic(int nu, double x) {
  const auto [p, q] = hankel_pq(nu, x);
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double r = std::numbers::sqrt2 / 2.0;
  double cos_chi = 0.0;
  double sin_chi = 0.0;
  if (nu == 0) {
    cos_chi = r * (c + s);
    sin_chi = r * (s - c);
  } else {
    cos_chi = r * (s - c);
    sin_chi = -r * (s + c);
  }
  const double amp = std::sqrt(2.0 / (kPi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

double j_positive(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x < 1.0) return j_power_series(n, x);
  if (x > kAsymptoticThreshold && n < x) {
    const double j0 = hankel_asymptotic(0, x).j;
    if (n == 0) return j0;
    double prev = j0;
    double cur = hankel_asymptotic(1, x).j;
    for (int k = 1; k < n; ++k) {
      const double next = (2.0 * k / x) * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  return j_miller(n, x)[n];
}

// Y_0 and Y_1 for 0 < x <= 40 from the Neumann series
//   (pi/2) Y_0 = (ln(x/2) + gamma) J_0 - 2 sum_k (-1)^k J_2k / k
// and its derivative (Y_1 = -Y_0').
JY y01_neumann(double x) {
  const int top = miller_start(0, x) - 2;
  const std::vector<double> j = j_table(top, x);
  const double log_term = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0;
  double s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= top; ++k) {
    const double sign = (k % 2) ? -1.0 : 1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  const double y0 = (2.0 / kPi) * (log_term * j[0] - 2.0 * s0);
  const double y1 = -(2.0 / kPi) * (j[0] / x - log_term * j[1] - s1);
  return {y0, y1};
}

}  // namespace

double bessel_j(int n, double x) {
  require_order(n);
  require_finite(x);
  const double value = j_positive(n, std::abs(x));
  return (x < 0.0 && (n % 2)) ? -value : value;
}

std::vector<double> bessel_j_sequence(int max_order, double x) {
  require_order(max_order);
  require_finite(x);
  std::vector<double> out = j_table(max_order, std::abs(x));
  if (x < 0.0) {
    for (int n = 1; n <= max_order; n += 2) out[n] = -out[n];
  }
  return out;
}

double bessel_y(int n, double x) {
  require_order(n);
  require_finite(x);
  if (x <= 0.0) throw DomainError("Y_n(x) requires x > 0 (logarithmic singularity at 0)");
  double y0 = 0.0;
  double y1 = 0.0;
  if (x > kAsymptoticThreshold) {
    y0 = hankel_asymptotic(0, x).y;
    y1 = hankel_asymptotic(1, x).y;
  } else {
    const JY v = y01_neumann(x);
    y0 = v.j;
    y1 = v.y;
  }
  double result = y0;
  if (n >= 1) {
    double prev = y0;
    double cur = y1;
    for (int k = 1; k < n && std::isfinite(cur); ++k) {
      const double next = (2.0 * k / x) * cur - prev;
      prev = cur;
      cur = next;
    }
    result = cur;
  }
  if (!std::isfinite(result)) {
    throw NumericalError("Y_" + std::to_string(n) + " overflows at x = " + std::to_string(x));
  }
  return result;
}

Complex hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }

Complex green_helmholtz(double k, double d) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  if (!(d > 0.0)) throw DomainError("Green's function is singular at zero distance");
  const double x = k * d;
  // -(i/4)(J_0 + i Y_0) = Y_0/4 - i J_0/4
  return {0.25 * bessel_y(0, x), -0.25 * bessel_j(0, x)};
}

double bessel_uniform_bound(int p, double x) {
  if (p <= 0 || x == 0.0) throw DomainError("uniform bound needs p > 0 and x != 0");
  constexpr double b = 0.674885;
  constexpr double c = 0.785747;
  return std::max(b / std::cbrt(static_cast<double>(p)), c / std::cbrt(std::abs(x)));
}

}  // namespace lamusic::specfun
