#include "lamusic/analytic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "lamusic/errors.hpp"
#include "lamusic/specfun.hpp"

namespace lamusic::analytic {
namespace {

constexpr double kDelta = kMusicFloor;

void require_h(int h) {
  if (h != 1 && h != 2) throw ConfigError("axis index h must be 1 or 2");
}

int order_limit(const SeriesTruncation& trunc) {
  if (trunc.max_order < 1) throw ConfigError("series max_order must be >= 1");
  if (!(trunc.tail_tolerance > 0.0)) throw ConfigError("series tail_tolerance must be positive");
  return trunc.max_order;
}

// True once J_p, p > x, is small enough that sum_{q > p} |J_q| * bound stays
// below the tolerance; uses |J_{q+1} / J_q| <= x / (2(q + 1)).
bool tail_done(int p, double x, double jp, double coefficient_bound, double tol) {
  if (p <= x) return false;
  const double r = x / (2.0 * (p + 1));
  if (r >= 1.0) return false;
  return std::abs(jp) * r / (1.0 - r) * coefficient_bound < tol;
}

// int_a^b cos(m t + c) dt and int_a^b sin(m t + c) dt with D = b - a, S = b + a.
double int_cos(int m, double c, double D, double S) {
  return m == 0 ? D * std::cos(c) : 2.0 / m * std::sin(m * D / 2.0) * std::cos(m * S / 2.0 + c);
}
double int_sin(int m, double c, double D, double S) {
  return m == 0 ? D * std::sin(c) : 2.0 / m * std::sin(m * D / 2.0) * std::sin(m * S / 2.0 + c);
}

// 4 sum_p (s i)^p / p J_p sin(pD/2) cos(p(S - 2 phi)/2), s = -1 observation, +1 incidence.
Complex eps_series(const Vec2& d, const ApertureArc& arc, double k, const SeriesTruncation& trunc,
                   Side side) {
  const int P = order_limit(trunc);
  const PolarVector pv = to_polar(d);
  const double x = k * pv.magnitude;
  if (x == 0.0) return 0.0;
  const auto j = specfun::bessel_j_sequence(P, x);
  const Complex unit = side == Side::Observation ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
  const double D = arc.width();
  const double S = arc.angle_sum();
  Complex power = 1.0;
  Complex sum = 0.0;
  for (int p = 1; p <= P; ++p) {
    power *= unit;
    sum += power * (j[p] / p * std::sin(p * D / 2.0) * std::cos(p * (S - 2.0 * pv.angle) / 2.0));
    if (tail_done(p, x, j[p], 4.0 / p, trunc.tail_tolerance)) break;
  }
  return 4.0 * sum;
}

// omega [J_0 A_0 + 2 sum_p (sigma i)^p J_p A_p], A_p = int e_h(t) cos(p(t - phi)) dt.
// With `drop_kernel` the D-proportional part of the p = 1 term (the full-circle
// J_1 kernel) is left out.
Complex weighted_series(const Vec2& d, const ApertureArc& arc, double k, int h,
                        const SeriesTruncation& trunc, Side side, bool drop_kernel) {
  require_h(h);
  const int P = order_limit(trunc);
  const PolarVector pv = to_polar(d);
  const double x = k * pv.magnitude;
  const double phi = pv.angle;
  const double D = arc.width();
  const double S = arc.angle_sum();
  auto integral = [&](int m, double c) { return h == 1 ? int_cos(m, c, D, S) : int_sin(m, c, D, S); };

  const double omega = side == Side::Observation ? -1.0 : 1.0;
  const Complex unit = side == Side::Observation ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
  const auto j = specfun::bessel_j_sequence(std::max(P, 1), x);

  Complex sum = j[0] * integral(1, 0.0);
  Complex power = 1.0;
  for (int p = 1; p <= P; ++p) {
    power *= unit;
    double a = integral(1 + p, -p * phi);
    if (!(drop_kernel && p == 1)) a += integral(1 - p, p * phi);
    sum += 2.0 * power * (0.5 * j[p] * a);
    if (x == 0.0 || tail_done(p, x, j[p], 2.0 * D, trunc.tail_tolerance)) break;
  }
  return omega * sum;
}

double clamp_inverse_root(double v) { return 1.0 / std::sqrt(std::max(v, kDelta * kDelta)); }

}  // namespace

SeriesTruncation default_truncation(double k, double d_max) {
  return {static_cast<int>(std::ceil(k * d_max)) + 40, 1e-14};
}

Complex arc_mean_exponential(const Vec2& d, const ApertureArc& arc, double k,
                             const SeriesTruncation& trunc, Side side) {
  const double x = k * d.norm();
  return specfun::bessel_j(0, x) + eps_series(d, arc, k, trunc, side) / arc.width();
}

Complex lambda_eps(const Vec2& d, const ApertureArc& arc, double k, const SeriesTruncation& trunc,
                   Side side) {
  return eps_series(d, arc, k, trunc, side);
}

Complex arc_mean_weighted(const Vec2& d, const ApertureArc& arc, double k, int h,
                          const SeriesTruncation& trunc, Side side) {
  const double c = aperture_normalizer(arc);
  if (std::abs(c) < 1e-8) throw DomainError("aperture normaliser below 1e-8 (degenerate arc)");
  return weighted_series(d, arc, k, h, trunc, side, false) / c;
}

Complex lambda_mu(const Vec2& d, const ApertureArc& arc, double k, int h,
                  const SeriesTruncation& trunc, Side side) {
  return weighted_series(d, arc, k, h, trunc, side, true);
}

Complex phi_mu(const Vec2& d, const ApertureArc& arc, double k, int h,
               const SeriesTruncation& trunc, Side side) {
  require_h(h);
  const double rho = d.norm();
  Complex kernel = 0.0;
  if (rho > 0.0) {
    const double unit = (h == 1 ? d.x() : d.y()) / rho;
    kernel = Complex(0.0, specfun::bessel_j(1, k * rho) * unit);
  }
  return kernel + lambda_mu(d, arc, k, h, trunc, side) / arc.width();
}

double predicted_noise_norm2_eps(const Vec2& r, const Scene& scene, const ApertureArc& arc,
                                 const SeriesTruncation& trunc, Side side) {
  double sum = 0.0;
  for (const auto& inc : scene.inhomogeneities) {
    sum += std::norm(arc_mean_exponential(r - inc.center, arc, scene.wavenumber, trunc, side));
  }
  return 1.0 - sum;
}

double structure_eps(const Vec2& r, const Scene& scene, const ArcPair& arcs,
                     const SeriesTruncation& trunc) {
  const double a = predicted_noise_norm2_eps(r, scene, arcs.observation, trunc, Side::Observation);
  const double b = predicted_noise_norm2_eps(r, scene, arcs.incidence, trunc, Side::Incidence);
  return 0.5 * clamp_inverse_root(a) + 0.5 * clamp_inverse_root(b);
}

double structure_mu(const Vec2& r, const Scene& scene, const ArcPair& arcs,
                    const SeriesTruncation& trunc) {
  auto side_term = [&](const ApertureArc& arc, Side side) {
    double sum = 0.0;
    for (const auto& inc : scene.inhomogeneities) {
      for (int h = 1; h <= 2; ++h) {
        sum += std::norm(phi_mu(r - inc.center, arc, scene.wavenumber, h, trunc, side));
      }
    }
    return clamp_inverse_root(1.0 - sum);
  };
  return 0.5 * side_term(arcs.observation, Side::Observation) +
         0.5 * side_term(arcs.incidence, Side::Incidence);
}

Complex quadrature_oracle(const Vec2& d, const ApertureArc& arc, double k, Weight weight,
                          Side side) {
  using boost::math::quadrature::gauss_kronrod;
  const double sign = side == Side::Observation ? -1.0 : 1.0;
  auto w = [&](double t) {
    switch (weight) {
      case Weight::Axis1: return sign * std::cos(t);
      case Weight::Axis2: return sign * std::sin(t);
      default: return 1.0;
    }
  };
  auto phase = [&](double t) { return sign * k * (std::cos(t) * d.x() + std::sin(t) * d.y()); };
  auto f = [&](double t) { return w(t) * std::polar(1.0, phase(t)); };

  // One complex integrand so the relative tolerance refers to |integral|;
  // the depth cap bounds the work when the integral itself is ~0.
  double err = 0.0;
  const Complex v = gauss_kronrod<double, 61>::integrate(f, arc.start(), arc.end(), 15, 1e-13, &err);
  const double D = arc.width();
  if (!(err / D < 1e-10)) throw NumericalError("quadrature oracle did not reach 1e-10");
  return v / D;
}

}  // namespace lamusic::analytic
