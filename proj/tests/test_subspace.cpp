#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/QR>
#include <numbers>
#include <random>

#include "lamusic/errors.hpp"
#include "lamusic/subspace.hpp"

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

const ApertureArc kObs(kPi / 2, 3 * kPi / 2, 32);
const ApertureArc kInc(-kPi / 2, kPi / 2, 32);

Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST_CASE("assembled matrix follows the arcs") {
  const auto m = assemble_msr(three_disk_scene(false), kObs, ApertureArc(-1.0, 1.0, 20),
                              ContrastMode::Permittivity, ForwardKind::Asymptotic);
  CHECK(m.entries.rows() == 32);
  CHECK(m.entries.cols() == 20);
  CHECK(m.observation_arc == kObs);
  CHECK(std::isinf(m.achieved_snr_db));
}

TEST_CASE("assembly guards") {
  CHECK_THROWS_AS(assemble_msr(three_disk_scene(true), ApertureArc(0, 1, 6), kInc, ContrastMode::Permeability,
                               ForwardKind::Asymptotic),
                  ConfigError);
  CHECK_NOTHROW(assemble_msr(three_disk_scene(true), ApertureArc(0, 1, 7), kInc, ContrastMode::Permeability,
                             ForwardKind::Asymptotic));
  CHECK_THROWS_AS(assemble_msr(three_disk_scene(false), ApertureArc(0, 1, 3), kInc, ContrastMode::Permittivity,
                               ForwardKind::Asymptotic),
                  ConfigError);
  Scene empty;
  empty.wavenumber = 1.0;
  CHECK_THROWS_AS(assemble_msr(empty, kObs, kInc, ContrastMode::Permittivity, ForwardKind::Asymptotic), ConfigError);
  CHECK_THROWS_AS(assemble_msr(three_disk_scene(false), kObs, kInc, ContrastMode::Permeability, ForwardKind::Asymptotic),
                  ConfigError);
}

TEST_CASE("noisy assembly records the achieved SNR") {
  const auto m = assemble_msr(three_disk_scene(false), kObs, kInc, ContrastMode::Permittivity, ForwardKind::FoldyLax,
                              NoiseSpec{20.0, 3});
  CHECK(m.achieved_snr_db > 19.5);
  CHECK(m.achieved_snr_db < 20.5);
}

TEST_CASE("SVD of a rank-one outer product") {
  std::mt19937_64 rng(5);
  const Eigen::VectorXcd a = random_vector(7, rng);
  const Eigen::VectorXcd b = random_vector(5, rng);
  const Eigen::MatrixXcd k = a * b.adjoint();
  const Svd s = compute_svd(k);
  CHECK(s.singular_values(0) == doctest::Approx(a.norm() * b.norm()));
  CHECK(s.singular_values(1) < 1e-12 * s.singular_values(0));
  const Svd s2 = compute_svd(2.0 * k);
  CHECK(s2.singular_values(0) == doctest::Approx(2.0 * s.singular_values(0)));
}

TEST_CASE("SVD reconstructs and orders") {
  std::mt19937_64 rng(9);
  Eigen::MatrixXcd k(9, 6);
  for (Eigen::Index j = 0; j < 6; ++j) k.col(j) = random_vector(9, rng);
  const Svd s = compute_svd(k);
  for (Eigen::Index i = 1; i < s.singular_values.size(); ++i) {
    CHECK(s.singular_values(i) <= s.singular_values(i - 1));
  }
  const Eigen::MatrixXcd rebuilt = s.u.leftCols(6) * s.singular_values.cast<Complex>().asDiagonal() * s.v.adjoint();
  CHECK((rebuilt - k).norm() / k.norm() < 1e-12);
  CHECK((s.u.adjoint() * s.u - Eigen::MatrixXcd::Identity(9, 9)).norm() < 1e-10);
  Eigen::MatrixXcd bad = k;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(compute_svd(bad), NumericalError);
}

TEST_CASE("selection rules") {
  Eigen::VectorXd sv(6);
  sv << 1.0, 0.9, 0.8, 1e-14, 1e-15, 1e-16;
  CHECK(select_signal_dim(sv, Threshold{0.01}, 6, 6).dim == 3);
  CHECK(select_signal_dim(sv, LargestLogGap{}, 6, 6).dim == 3);
  const auto fixed = select_signal_dim(sv, Fixed{2}, 6, 6);
  CHECK(fixed.dim == 2);
  CHECK_FALSE(fixed.clamped);

  Eigen::VectorXd five(5);
  five << 1.0, 0.5, 0.2, 0.1, 0.05;
  const auto c = select_signal_dim(five, Fixed{6}, 5, 5);
  CHECK(c.dim == 4);
  CHECK(c.clamped);
  CHECK(select_signal_dim(five, Threshold{1e-9}, 5, 5).dim == 4);
  CHECK(select_signal_dim(five, Threshold{1e-9}, 5, 5).clamped);

  CHECK_THROWS_AS(select_signal_dim(Eigen::VectorXd::Zero(4), Threshold{0.1}, 4, 4), NumericalError);
  CHECK(describe(Threshold{0.01}) == "threshold(0.01)");
  CHECK(describe(Fixed{3}) == "fixed(3)");
  CHECK(describe(LargestLogGap{}) == "largest-log-gap");
}

TEST_CASE("noiseless rank law") {
  for (bool mu : {false, true}) {
    const auto mode = mu ? ContrastMode::Permeability : ContrastMode::Permittivity;
    const auto m = assemble_msr(three_disk_scene(mu), kObs, kInc, mode, ForwardKind::Asymptotic);
    const auto d = decompose(m, Threshold{1e-8});
    CHECK(d.signal_dim == (mu ? 6 : 3));
    CHECK(decompose(m, LargestLogGap{}).signal_dim == (mu ? 6 : 3));
    CHECK(d.left_signal.cols() == d.right_signal.cols());
    const auto n = d.left_signal.cols();
    CHECK((d.left_signal.adjoint() * d.left_signal - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-10);
    CHECK((d.right_signal.adjoint() * d.right_signal - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-10);
  }
  const auto m = assemble_msr(three_disk_scene(false), kObs, kInc, ContrastMode::Permittivity, ForwardKind::Asymptotic);
  const Svd s = compute_svd(m.entries);
  int above = 0;
  for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) above += s.singular_values(i) > 1e-10 * s.singular_values(0);
  CHECK(above == 3);
}

TEST_CASE("right signal basis spans the range of the transpose") {
  const auto m = assemble_msr(three_disk_scene(false), kObs, kInc, ContrastMode::Permittivity, ForwardKind::Asymptotic);
  const auto d = decompose(m, Fixed{3});
  const Eigen::MatrixXcd kt = m.entries.transpose();
  for (Eigen::Index j = 0; j < kt.cols(); ++j) {
    CHECK(project_noise(d.right_signal, kt.col(j)).norm() < 1e-10 * kt.norm());
  }
}

TEST_CASE("projection properties") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXcd a(10, 3);
  for (int j = 0; j < 3; ++j) a.col(j) = random_vector(10, rng);
  const Eigen::MatrixXcd basis = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ() *
                                 Eigen::MatrixXcd::Identity(10, 3);

  CHECK(project_noise(basis, basis.col(1)).norm() < 1e-12);
  const Eigen::MatrixXcd full = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
  const Eigen::VectorXcd orth = full.col(5);
  CHECK((project_noise(basis, orth) - orth).norm() < 1e-12);

  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXcd v = random_vector(10, rng);
    const Eigen::VectorXcd p = project_noise(basis, v);
    const Eigen::VectorXcd q = v - p;
    CHECK(std::abs(p.squaredNorm() + q.squaredNorm() - v.squaredNorm()) < 1e-10 * v.squaredNorm());
    CHECK((basis.adjoint() * p).norm() < 1e-10);
    CHECK((project_noise(basis, p) - p).norm() < 1e-12 * v.norm());
    CHECK(p.norm() <= v.norm() * (1.0 + 1e-15));
    CHECK(noise_norm(basis, v) == doctest::Approx(p.norm()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(project_noise(basis, Eigen::VectorXcd::Zero(4)), ConfigError);
}
