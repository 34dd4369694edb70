#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <numbers>

#include "lamusic/errors.hpp"
#include "lamusic/forward.hpp"

using namespace lamusic;
constexpr double kPi = std::numbers::pi;

namespace {

Scene three_disk_scene(bool permeability) {
  Scene s;
  s.wavenumber = 2.0 * kPi / 0.4;
  for (Vec2 c : {Vec2(0.7, 0.5), Vec2(-0.7, 0.0), Vec2(0.2, -0.5)}) {
    Inhomogeneity inc;
    inc.center = c;
    (permeability ? inc.mu : inc.eps) = 5.0;
    s.inhomogeneities.push_back(inc);
  }
  return s;
}

Scene single(Vec2 c, double eps, double mu) {
  Scene s;
  s.wavenumber = 2.0 * kPi / 0.4;
  Inhomogeneity inc;
  inc.center = c;
  inc.eps = eps;
  inc.mu = mu;
  s.inhomogeneities.push_back(inc);
  return s;
}

}  // namespace

TEST_CASE("single permittivity scatterer at the origin") {
  const auto s = single(Vec2::Zero(), 5.0, 1.0);
  const double k = s.wavenumber;
  const Complex expected = 0.01 * kPi * k * k * 4.0 * Complex(1.0, 1.0) / (4.0 * std::sqrt(k * kPi));
  const Complex u = farfield_eps(s, Vec2(1.0, 0.0), Vec2(0.0, 1.0));
  CHECK(std::abs(u - expected) < 1e-12 * std::abs(expected));
  // direction independent at the origin
  CHECK(std::abs(farfield_eps(s, Vec2(0.6, 0.8), Vec2(-1.0, 0.0)) - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("no contrast, no field") {
  const auto s = single(Vec2(0.3, 0.1), 1.0, 1.0);
  CHECK(std::abs(farfield_eps(s, Vec2(1.0, 0.0), Vec2(0.0, 1.0))) == 0.0);
  CHECK_THROWS_AS(require_contrast(s, ContrastMode::Permittivity), ConfigError);
  CHECK_THROWS_AS(require_contrast(s, ContrastMode::Permeability), ConfigError);
}

TEST_CASE("mixed contrasts are rejected") {
  const auto s = single(Vec2(0.3, 0.1), 5.0, 2.0);
  CHECK_THROWS_AS(farfield_eps(s, Vec2(1.0, 0.0), Vec2(0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(farfield_mu(s, Vec2(1.0, 0.0), Vec2(0.0, 1.0)), ConfigError);
}

TEST_CASE("permeability far field carries the obs.inc factor") {
  const auto s = single(Vec2(0.2, -0.3), 1.0, 5.0);
  CHECK(std::abs(farfield_mu(s, Vec2(1.0, 0.0), Vec2(0.0, 1.0))) < 1e-15);
  const Complex a = farfield_mu(s, Vec2(1.0, 0.0), Vec2(1.0, 0.0));
  const double k = s.wavenumber;
  const double mag = 0.01 * kPi * k * k * (2.0 / 6.0) * std::sqrt(2.0) / (4.0 * std::sqrt(k * kPi));
  CHECK(std::abs(a) == doctest::Approx(mag));
  // mu_s == mu_b still radiates through the dipole strength 1
  const auto flat = single(Vec2(0.2, -0.3), 1.0, 1.0);
  CHECK(std::abs(farfield_mu(flat, Vec2(1.0, 0.0), Vec2(1.0, 0.0))) > 0.0);
}

TEST_CASE("phase follows the scatterer position") {
  const Vec2 r(0.3, -0.2);
  const auto s = single(r, 3.0, 1.0);
  const auto s0 = single(Vec2::Zero(), 3.0, 1.0);
  const Vec2 obs(std::cos(2.0), std::sin(2.0));
  const Vec2 inc(std::cos(0.4), std::sin(0.4));
  const double phase = -s.wavenumber * (obs - inc).dot(r);
  const Complex ratio = farfield_eps(s, obs, inc) / farfield_eps(s0, obs, inc);
  CHECK(std::abs(ratio - std::polar(1.0, phase)) < 1e-12);
}

TEST_CASE("asymptotic matrices have rank S and 2S") {
  const ApertureArc obs(kPi / 2, 3 * kPi / 2, 32);
  const ApertureArc inc(-kPi / 2, kPi / 2, 32);
  const auto o = obs.directions();
  const auto i = inc.directions();
  const auto ke = asymptotic_matrix(three_disk_scene(false), o, i, ContrastMode::Permittivity);
  const auto km = asymptotic_matrix(three_disk_scene(true), o, i, ContrastMode::Permeability);
  CHECK(ke.rows() == 32);
  const Eigen::VectorXd se = Eigen::JacobiSVD<Eigen::MatrixXcd>(ke).singularValues();
  const Eigen::VectorXd sm = Eigen::JacobiSVD<Eigen::MatrixXcd>(km).singularValues();
  CHECK(se(2) / se(0) > 1e-3);
  CHECK(se(3) / se(0) < 1e-12);
  CHECK(sm(5) / sm(0) > 1e-3);
  CHECK(sm(6) / sm(0) < 1e-12);
}

TEST_CASE("uncoupled Foldy-Lax is bit-identical to the asymptotic model") {
  const ApertureArc obs(2.0, 4.0, 12);
  const ApertureArc inc(-1.0, 1.0, 9);
  for (bool mu : {false, true}) {
    const auto s = three_disk_scene(mu);
    const auto mode = mu ? ContrastMode::Permeability : ContrastMode::Permittivity;
    const auto a = asymptotic_matrix(s, obs.directions(), inc.directions(), mode);
    const auto b = solve_foldy_lax(s, obs.directions(), inc.directions(), mode, {.coupling = false});
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coupled Foldy-Lax differs but keeps the rank") {
  const ApertureArc obs(kPi / 2, 3 * kPi / 2, 32);
  const ApertureArc inc(-kPi / 2, kPi / 2, 32);
  for (bool mu : {false, true}) {
    const auto s = three_disk_scene(mu);
    const auto mode = mu ? ContrastMode::Permeability : ContrastMode::Permittivity;
    const auto a = asymptotic_matrix(s, obs.directions(), inc.directions(), mode);
    const auto b = solve_foldy_lax(s, obs.directions(), inc.directions(), mode);
    CHECK((a - b).norm() / a.norm() > 1e-3);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues();
    const int r = mu ? 6 : 3;
    CHECK(sv(r) / sv(0) < 1e-12);
  }
}

TEST_CASE("single scatterer has no coupling") {
  const auto s = single(Vec2(0.1, 0.2), 4.0, 1.0);
  const ApertureArc arc(0.0, kPi, 7);
  const auto a = asymptotic_matrix(s, arc.directions(), arc.directions(), ContrastMode::Permittivity);
  const auto b = solve_foldy_lax(s, arc.directions(), arc.directions(), ContrastMode::Permittivity);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("coupling above the condition limit is rejected") {
  auto s = three_disk_scene(false);
  const auto obs = ApertureArc(0.0, 1.0, 4).directions();
  CHECK_THROWS_AS(solve_foldy_lax(s, obs, obs, ContrastMode::Permittivity, {.coupling = true, .max_condition = 1.5}),
                  NumericalError);
}

TEST_CASE("noise calibration and determinism") {
  const ApertureArc obs(kPi / 2, 3 * kPi / 2, 32);
  const ApertureArc inc(-kPi / 2, kPi / 2, 32);
  const auto k = asymptotic_matrix(three_disk_scene(false), obs.directions(), inc.directions(), ContrastMode::Permittivity);
  const auto a = add_noise(k, 20.0, 7);
  const auto b = add_noise(k, 20.0, 7);
  const auto c = add_noise(k, 20.0, 8);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
  CHECK(a.achieved_snr_db > 19.5);
  CHECK(a.achieved_snr_db < 20.5);
  const double measured = 10.0 * std::log10(k.squaredNorm() / (a.data - k).squaredNorm());
  CHECK(measured == doctest::Approx(a.achieved_snr_db));

  const auto clean = add_noise(k, std::numeric_limits<double>::infinity(), 1);
  CHECK(clean.data == k);
  CHECK(std::isinf(clean.achieved_snr_db));
  CHECK_THROWS_AS(add_noise(k, std::nan(""), 1), ConfigError);
  CHECK_THROWS_AS(add_noise(Eigen::MatrixXcd::Zero(3, 3), 20.0, 1), ConfigError);
}
