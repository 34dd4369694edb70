#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "lamusic/forward.hpp"
#include "lamusic/scene.hpp"

namespace lamusic {

struct MsrMatrix {
  Eigen::MatrixXcd entries;  // rows: observation directions, cols: incident directions
  ApertureArc observation_arc;
  ApertureArc incident_arc;
  ContrastMode mode = ContrastMode::Permittivity;
  double achieved_snr_db = std::numeric_limits<double>::infinity();
};

struct NoiseSpec {
  std::optional<double> snr_db;  // nullopt: noiseless
  std::uint64_t seed = 1;
};

/// Builds K(m, n) = u_inf(obs_m, inc_n) from the chosen forward model, then
/// applies noise. Requires M, N > S (permittivity) or > 2S (permeability).
MsrMatrix assemble_msr(const Scene& scene, const ApertureArc& observation,
                       const ApertureArc& incident, ContrastMode mode, ForwardKind kind,
                       const NoiseSpec& noise = {});

struct Svd {
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXcd u;               // M x M
  Eigen::MatrixXcd v;               // N x N, K = U S V*
};

/// Full SVD. Throws NumericalError on non-finite input or a reconstruction
/// that misses 1e-12 relative accuracy.
Svd compute_svd(const Eigen::MatrixXcd& k);

struct Threshold {
  double tau = 1e-2;
};
struct Fixed {
  int dim = 1;
};
struct LargestLogGap {};

using SelectionRule = std::variant<Threshold, Fixed, LargestLogGap>;

std::string describe(const SelectionRule& rule);

struct Selection {
  int dim = 0;
  bool clamped = false;
};

/// Number of retained singular values. The result always lies in
/// [1, min(M, N) - 1]; `clamped` reports whether the rule had to be bent.
/// Throws NumericalError when every singular value is zero.
Selection select_signal_dim(const Eigen::VectorXd& singular_values, const SelectionRule& rule,
                            Eigen::Index rows, Eigen::Index cols);

struct SubspaceDecomposition {
  Eigen::VectorXd singular_values;
  int signal_dim = 0;
  bool clamped = false;
  Eigen::MatrixXcd left_signal;   // U[:, :d], spans range(K)
  Eigen::MatrixXcd right_signal;  // conj(V[:, :d]), spans range(K^T)
};

SubspaceDecomposition decompose(const MsrMatrix& msr, const SelectionRule& rule);
SubspaceDecomposition decompose(const Eigen::MatrixXcd& k, const SelectionRule& rule);

/// v - sum_j <v, b_j> b_j for orthonormal basis columns b_j.
Eigen::VectorXcd project_noise(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& v);

/// |project_noise(basis, v)| without forming the projected vector,
/// sqrt(max(|v|^2 - |B* v|^2, 0)).
double noise_norm(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& v);

}  // namespace lamusic
