#include "lamusic/forward.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lamusic/errors.hpp"
#include "lamusic/specfun.hpp"

namespace lamusic {
namespace {

constexpr Complex kI{0.0, 1.0};

Complex plane_wave(double k, const Vec2& dir, const Vec2& r) {
  const double phase = k * dir.dot(r);
  return {std::cos(phase), std::sin(phase)};
}

// Excitation of every scatterer for one incident direction. Monopoles use
// column 0 only; dipoles use both columns (x and y components).
using Excitation = Eigen::Matrix<Complex, Eigen::Dynamic, 2>;

Excitation incident_excitation(const Scene& scene, const Vec2& inc) {
  Excitation e(static_cast<Eigen::Index>(scene.size()), 2);
  for (std::size_t s = 0; s < scene.size(); ++s) {
    const Complex w = plane_wave(scene.wavenumber, inc, scene.inhomogeneities[s].center);
    e(s, 0) = inc.x() * w;
    e(s, 1) = inc.y() * w;
  }
  return e;
}

Excitation monopole_excitation(const Scene& scene, const Vec2& inc) {
  Excitation e(static_cast<Eigen::Index>(scene.size()), 2);
  for (std::size_t s = 0; s < scene.size(); ++s) {
    e(s, 0) = plane_wave(scene.wavenumber, inc, scene.inhomogeneities[s].center);
    e(s, 1) = 0.0;
  }
  return e;
}

// Shared by the first-order formulas and the multiple-scattering solver so
// that the Born truncation of the latter reproduces the former exactly.
Complex radiate(const Scene& scene, ContrastMode mode, const Vec2& obs, const Excitation& exc) {
  const double k = scene.wavenumber;
  Complex sum = 0.0;
  for (std::size_t s = 0; s < scene.size(); ++s) {
    const Complex back = std::conj(plane_wave(k, obs, scene.inhomogeneities[s].center));
    if (mode == ContrastMode::Permittivity) {
      sum += monopole_strength(scene, s) * (exc(s, 0) * back);
    } else {
      sum += dipole_strength(scene, s) * ((obs.x() * exc(s, 0) + obs.y() * exc(s, 1)) * back);
    }
  }
  return farfield_prefactor(k) * sum;
}

void require_same_mu(const Scene& scene) {
  for (const auto& inc : scene.inhomogeneities) {
    if (inc.mu != scene.background.mu_b) {
      throw ConfigError("permittivity far field requires mu_s == mu_b for every inhomogeneity");
    }
  }
}

void require_same_eps(const Scene& scene) {
  for (const auto& inc : scene.inhomogeneities) {
    if (inc.eps != scene.background.eps_b) {
      throw ConfigError("permeability far field requires eps_s == eps_b for every inhomogeneity");
    }
  }
}

// Hessian of the outgoing kernel g(R) = (i/4) H_0(k|R|).
Eigen::Matrix2cd kernel_hessian(double k, const Vec2& R) {
  const double rho = R.norm();
  const Vec2 u = R / rho;
  const double x = k * rho;
  const Complex h0 = specfun::hankel1(0, x);
  const Complex h1 = specfun::hankel1(1, x);
  const Complex g1 = -0.25 * kI * k * h1;                  // g'(rho)
  const Complex g2 = -0.25 * kI * k * k * (h0 - h1 / x);   // g''(rho)
  const Eigen::Matrix2d uu = u * u.transpose();
  const Eigen::Matrix2d perp = Eigen::Matrix2d::Identity() - uu;
  return g2 * uu.cast<Complex>() + (g1 / rho) * perp.cast<Complex>();
}

}  // namespace

std::string_view to_string(ContrastMode mode) {
  return mode == ContrastMode::Permittivity ? "permittivity" : "permeability";
}

std::string_view to_string(ForwardKind kind) {
  return kind == ForwardKind::Asymptotic ? "asymptotic" : "foldy-lax";
}

void require_contrast(const Scene& scene, ContrastMode mode) {
  bool any = false;
  if (mode == ContrastMode::Permittivity) {
    require_same_mu(scene);
    for (const auto& inc : scene.inhomogeneities) any = any || inc.eps != scene.background.eps_b;
    if (!any) throw ConfigError("permittivity mode needs some eps_s != eps_b");
  } else {
    require_same_eps(scene);
    for (const auto& inc : scene.inhomogeneities) any = any || inc.mu != scene.background.mu_b;
    if (!any) throw ConfigError("permeability mode needs some mu_s != mu_b");
  }
}

Complex farfield_prefactor(double k) {
  return Complex(1.0, 1.0) / (4.0 * std::sqrt(k * std::numbers::pi));
}

double monopole_strength(const Scene& scene, std::size_t s) {
  const auto& bg = scene.background;
  const auto& inc = scene.inhomogeneities[s];
  const double k = scene.wavenumber;
  return k * k * inc.radius * inc.radius * std::numbers::pi * (inc.eps - bg.eps_b) /
         std::sqrt(bg.eps_b * bg.mu_b);
}

double dipole_strength(const Scene& scene, std::size_t s) {
  const auto& bg = scene.background;
  const auto& inc = scene.inhomogeneities[s];
  const double k = scene.wavenumber;
  return k * k * inc.radius * inc.radius * std::numbers::pi * (2.0 * bg.mu_b / (inc.mu + bg.mu_b));
}

Complex farfield_eps(const Scene& scene, const Vec2& obs, const Vec2& inc) {
  require_same_mu(scene);
  return radiate(scene, ContrastMode::Permittivity, obs, monopole_excitation(scene, inc));
}

Complex farfield_mu(const Scene& scene, const Vec2& obs, const Vec2& inc) {
  require_same_eps(scene);
  return radiate(scene, ContrastMode::Permeability, obs, incident_excitation(scene, inc));
}

Eigen::MatrixXcd asymptotic_matrix(const Scene& scene, std::span<const Vec2> obs,
                                   std::span<const Vec2> inc, ContrastMode mode) {
  Eigen::MatrixXcd k(static_cast<Eigen::Index>(obs.size()), static_cast<Eigen::Index>(inc.size()));
  for (std::size_t n = 0; n < inc.size(); ++n) {
    for (std::size_t m = 0; m < obs.size(); ++m) {
      k(m, n) = mode == ContrastMode::Permittivity ? farfield_eps(scene, obs[m], inc[n])
                                                   : farfield_mu(scene, obs[m], inc[n]);
    }
  }
  return k;
}

Eigen::MatrixXcd solve_foldy_lax(const Scene& scene, std::span<const Vec2> obs,
                                 std::span<const Vec2> inc, ContrastMode mode,
                                 const FoldyLaxOptions& options) {
  if (mode == ContrastMode::Permittivity) {
    require_same_mu(scene);
  } else {
    require_same_eps(scene);
  }
  const auto S = static_cast<Eigen::Index>(scene.size());
  const double k = scene.wavenumber;
  const Eigen::Index block = mode == ContrastMode::Permittivity ? 1 : 2;

  Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(S * block, S * block);
  for (Eigen::Index s = 0; s < S; ++s) {
    for (Eigen::Index t = 0; t < S; ++t) {
      if (s == t) continue;
      const Vec2 R = scene.inhomogeneities[s].center - scene.inhomogeneities[t].center;
      if (mode == ContrastMode::Permittivity) {
        // outgoing kernel (i/4) H_0 = -green_helmholtz
        const Complex g = -specfun::green_helmholtz(k, R.norm());
        system(s, t) -= monopole_strength(scene, t) * g;
      } else {
        const Eigen::Matrix2cd h = kernel_hessian(k, R);
        system.block(2 * s, 2 * t, 2, 2) += (dipole_strength(scene, t) / (k * k)) * h;
      }
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  if (options.coupling) {
    lu.compute(system);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / options.max_condition)) {
      std::ostringstream msg;
      msg << "Foldy-Lax coupling matrix is singular or resonant (condition estimate "
          << (rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity()) << ")";
      throw NumericalError(msg.str());
    }
  }

  Eigen::MatrixXcd out(static_cast<Eigen::Index>(obs.size()), static_cast<Eigen::Index>(inc.size()));
  for (std::size_t n = 0; n < inc.size(); ++n) {
    Excitation exc = mode == ContrastMode::Permittivity ? monopole_excitation(scene, inc[n])
                                                        : incident_excitation(scene, inc[n]);
    if (options.coupling) {
      Eigen::VectorXcd rhs(S * block);
      for (Eigen::Index s = 0; s < S; ++s) {
        for (Eigen::Index b = 0; b < block; ++b) rhs(s * block + b) = exc(s, b);
      }
      const Eigen::VectorXcd solved = lu.solve(rhs);
      for (Eigen::Index s = 0; s < S; ++s) {
        for (Eigen::Index b = 0; b < block; ++b) exc(s, b) = solved(s * block + b);
      }
    }
    for (std::size_t m = 0; m < obs.size(); ++m) out(m, n) = radiate(scene, mode, obs[m], exc);
  }
  return out;
}

NoisyData add_noise(const Eigen::MatrixXcd& data, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw ConfigError("snr_db must be a number or +inf");
  }
  if (std::isinf(snr_db)) return {data, snr_db};
  const double signal = data.squaredNorm();
  if (!(signal > 0.0)) throw ConfigError("cannot add noise at a given SNR to an all-zero matrix");

  const double variance = signal / (static_cast<double>(data.size()) * std::pow(10.0, snr_db / 10.0));
  const double sd = std::sqrt(variance / 2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sd);

  Eigen::MatrixXcd noise(data.rows(), data.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      noise(i, j) = {re, im};
    }
  }
  NoisyData out{data + noise, 10.0 * std::log10(signal / noise.squaredNorm())};
  return out;
}

}  // namespace lamusic
