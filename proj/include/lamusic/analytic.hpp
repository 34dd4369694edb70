#pragma once

#include "lamusic/forward.hpp"
#include "lamusic/imaging.hpp"
#include "lamusic/scene.hpp"

// Arc-restricted Bessel series for the averages
//   (1/D) int_arc e^{-+ik t.d} dt  and  int_arc w_h(t) e^{-+ik t.d} dt,
// the correction terms Lambda that measure their departure from the
// full-circle J_0 / J_1 kernels, and the predicted MUSIC profiles built from
// them. Observation side uses e^{-ik t.d} with weight -t.e_h, incidence side
// e^{+ik t.d} with weight +t.e_h.

namespace lamusic::analytic {

struct SeriesTruncation {
  int max_order = 80;
  double tail_tolerance = 1e-14;
};

/// P = ceil(k * d_max) + 40.
SeriesTruncation default_truncation(double k, double d_max);

struct ArcPair {
  ApertureArc observation;
  ApertureArc incidence;
};

Complex arc_mean_exponential(const Vec2& d, const ApertureArc& arc, double k,
                             const SeriesTruncation& trunc, Side side = Side::Observation);

/// Weighted arc integral divided by aperture_normalizer(arc); h = 1 or 2.
/// Throws DomainError when the normaliser is below 1e-8.
Complex arc_mean_weighted(const Vec2& d, const ApertureArc& arc, double k, int h,
                          const SeriesTruncation& trunc, Side side = Side::Observation);

/// arc_mean_exponential = J_0(k|d|) + lambda_eps / D.
Complex lambda_eps(const Vec2& d, const ApertureArc& arc, double k, const SeriesTruncation& trunc,
                   Side side = Side::Observation);

/// Weighted arc integral = i J_1(k|d|)(unit(d).e_h) D + lambda_mu.
Complex lambda_mu(const Vec2& d, const ApertureArc& arc, double k, int h,
                  const SeriesTruncation& trunc, Side side = Side::Observation);

/// i J_1(k|d|)(unit(d).e_h) + lambda_mu / D, with the unit-vector factor 0 at d = 0.
Complex phi_mu(const Vec2& d, const ApertureArc& arc, double k, int h,
               const SeriesTruncation& trunc, Side side);

/// (1/2) sum over both sides of max(1 - sum_s |Phi(r - r_s)|^2, delta^2)^(-1/2),
/// Phi = J_0 + lambda_eps / D.
double structure_eps(const Vec2& r, const Scene& scene, const ArcPair& arcs,
                     const SeriesTruncation& trunc);

/// Predicted squared projected norm 1 - sum_s |Phi(r - r_s)|^2 for one side.
double predicted_noise_norm2_eps(const Vec2& r, const Scene& scene, const ApertureArc& arc,
                                 const SeriesTruncation& trunc, Side side);

/// Same shape as structure_eps with Phi_h = phi_mu, summed over s and h = 1, 2.
double structure_mu(const Vec2& r, const Scene& scene, const ArcPair& arcs,
                    const SeriesTruncation& trunc);

enum class Weight { None, Axis1, Axis2 };

/// Adaptive Gauss-Kronrod value of (1/D) int_arc w(t) e^{-+ik t.d} dt.
/// Throws NumericalError if the error estimate exceeds 1e-10.
Complex quadrature_oracle(const Vec2& d, const ApertureArc& arc, double k, Weight weight,
                          Side side = Side::Observation);

}  // namespace lamusic::analytic
