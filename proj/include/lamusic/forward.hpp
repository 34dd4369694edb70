#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "lamusic/scene.hpp"

namespace lamusic {

using Complex = std::complex<double>;

enum class ContrastMode { Permittivity, Permeability };
enum class ForwardKind { Asymptotic, FoldyLax };

std::string_view to_string(ContrastMode mode);
std::string_view to_string(ForwardKind kind);

/// Throws ConfigError unless the scene is a pure contrast of the given kind:
/// Permittivity needs every mu_s == mu_b and some eps_s != eps_b,
/// Permeability needs every eps_s == eps_b and some mu_s != mu_b.
void require_contrast(const Scene& scene, ContrastMode mode);

/// (1+i) / (4 sqrt(k pi)), the far-field constant of the outgoing kernel.
Complex farfield_prefactor(double k);

/// Monopole strength k^2 alpha^2 pi (eps_s - eps_b) / sqrt(eps_b mu_b).
double monopole_strength(const Scene& scene, std::size_t s);

/// Dipole strength k^2 alpha^2 pi * 2 mu_b / (mu_s + mu_b).
double dipole_strength(const Scene& scene, std::size_t s);

/// First-order far field of a permittivity contrast,
///   alpha^2 pi k^2 (1+i)/(4 sqrt(k pi)) sum_s (eps_s - eps_b)/sqrt(eps_b mu_b) e^{-ik(obs - inc).r_s}.
/// Throws ConfigError if any mu_s differs from mu_b.
Complex farfield_eps(const Scene& scene, const Vec2& obs, const Vec2& inc);

/// First-order far field of a permeability contrast,
///   alpha^2 pi k^2 (1+i)/(4 sqrt(k pi)) sum_s 2 mu_b/(mu_s + mu_b) (obs.inc) e^{-ik(obs - inc).r_s}.
/// The (eps_s - eps_b) monopole term of the full lemma is not included.
/// Throws ConfigError if any eps_s differs from eps_b.
Complex farfield_mu(const Scene& scene, const Vec2& obs, const Vec2& inc);

/// M x N matrix of farfield_eps / farfield_mu over the direction sets.
Eigen::MatrixXcd asymptotic_matrix(const Scene& scene, std::span<const Vec2> obs,
                                   std::span<const Vec2> inc, ContrastMode mode);

struct FoldyLaxOptions {
  /// With coupling disabled the excitation of every scatterer is the bare
  /// incident wave and the result is bit-identical to asymptotic_matrix.
  bool coupling = true;
  /// Coupling systems with a larger 1-norm condition estimate are rejected.
  double max_condition = 1e12;
};

/// Multiple-scattering far field of point scatterers.
///
/// Permittivity: monopoles with excitation
///   E_s = e^{ik inc.r_s} + sum_{s' != s} c_s' G(r_s, r_s') E_s',
/// G = (i/4) H_0(k|r - r'|) the outgoing kernel, c_s the monopole strength,
/// and u = (1+i)/(4 sqrt(k pi)) sum_s c_s E_s e^{-ik obs.r_s}.
///
/// Permeability: point dipoles whose 2-vector excitation F_s (gradient of the
/// local field over ik) couples through the Hessian of G:
///   F_s = inc e^{ik inc.r_s} - sum_{s' != s} (c_s'/k^2) (grad grad G)(r_s - r_s') F_s',
/// and u = (1+i)/(4 sqrt(k pi)) sum_s c_s (obs.F_s) e^{-ik obs.r_s}.
///
/// Throws NumericalError when the coupling matrix is (near) singular; the
/// message carries the condition estimate.
Eigen::MatrixXcd solve_foldy_lax(const Scene& scene, std::span<const Vec2> obs,
                                 std::span<const Vec2> inc, ContrastMode mode,
                                 const FoldyLaxOptions& options = {});

struct NoisyData {
  Eigen::MatrixXcd data;
  /// 10 log10(|data|_F^2 / |noise|_F^2) of the realised draw; +inf when
  /// noise is disabled.
  double achieved_snr_db = std::numeric_limits<double>::infinity();
};

/// Adds complex white Gaussian noise at a global SNR. Real and imaginary parts
/// are independent N(0, sigma^2/2) with sigma^2 = |data|_F^2 / (MN 10^(snr/10)).
/// snr_db = +inf disables noise. The draw is a pure function of (seed, shape,
/// snr_db). Throws ConfigError for NaN/-inf SNR or all-zero data.
NoisyData add_noise(const Eigen::MatrixXcd& data, double snr_db, std::uint64_t seed);

}  // namespace lamusic
