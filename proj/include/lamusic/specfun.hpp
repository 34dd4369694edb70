#pragma once

#include <complex>
#include <vector>

// Integer-order cylinder functions for real arguments.
//
// J_n uses the ascending power series for |x| < 1, Hankel asymptotics for
// J_0/J_1 beyond x = 40 followed by forward recurrence while n < x, and
// Miller's backward recurrence (normalised with J_0 + 2 sum J_2k = 1)
// everywhere else. Y_0/Y_1 come from the Neumann series in J_2k below x = 40
// and from the Hankel asymptotics above; higher orders use forward
// recurrence, which is stable for Y_n.
//
// All functions are pure and thread-safe.

namespace lamusic::specfun {

using Complex = std::complex<double>;

/// J_n(x), n >= 0. Negative x is handled via J_n(-x) = (-1)^n J_n(x).
/// Throws DomainError for non-finite x or n < 0.
double bessel_j(int n, double x);

/// J_0(x) ... J_max_order(x) in one pass. Cheaper than repeated bessel_j
/// calls when a whole series is summed.
std::vector<double> bessel_j_sequence(int max_order, double x);

/// Y_n(x), n >= 0, x > 0. Throws DomainError for x <= 0 and NumericalError
/// when the result overflows (large n at tiny x).
double bessel_y(int n, double x);

/// H^(1)_n(x) = J_n(x) + i Y_n(x).
Complex hankel1(int n, double x);

/// Fundamental solution of the 2-D Helmholtz operator in the sign convention
/// Gamma = -(i/4) H^(1)_0(k d). Throws DomainError for k <= 0 or d <= 0.
Complex green_helmholtz(double k, double d);

/// Landau's uniform bound max(b / p^(1/3), c / |x|^(1/3)) on |J_p(x)|,
/// b = 0.674885, c = 0.785747. Requires p > 0 and x != 0.
double bessel_uniform_bound(int p, double x);

}  // namespace lamusic::specfun
