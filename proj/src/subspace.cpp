#include "lamusic/subspace.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "lamusic/errors.hpp"

namespace lamusic {

MsrMatrix assemble_msr(const Scene& scene, const ApertureArc& observation,
                       const ApertureArc& incident, ContrastMode mode, ForwardKind kind,
                       const NoiseSpec& noise) {
  if (scene.inhomogeneities.empty()) throw ConfigError("scene has no inhomogeneities");
  require_contrast(scene, mode);
  const int per = mode == ContrastMode::Permittivity ? 1 : 2;
  const int need = per * static_cast<int>(scene.size());
  if (observation.count() <= need || incident.count() <= need) {
    std::ostringstream msg;
    msg << "arc counts must exceed " << need << " for " << to_string(mode) << " with S = "
        << scene.size();
    throw ConfigError(msg.str());
  }

  const auto obs = observation.directions();
  const auto inc = incident.directions();
  MsrMatrix out{kind == ForwardKind::Asymptotic ? asymptotic_matrix(scene, obs, inc, mode)
                                                : solve_foldy_lax(scene, obs, inc, mode),
                observation, incident, mode};
  if (noise.snr_db) {
    auto noisy = add_noise(out.entries, *noise.snr_db, noise.seed);
    out.entries = std::move(noisy.data);
    out.achieved_snr_db = noisy.achieved_snr_db;
  }
  return out;
}

Svd compute_svd(const Eigen::MatrixXcd& k) {
  if (!k.allFinite()) throw NumericalError("MSR matrix contains non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out{svd.singularValues(), svd.matrixU(), svd.matrixV()};
  const auto r = out.singular_values.size();
  const Eigen::MatrixXcd rebuilt =
      out.u.leftCols(r) * out.singular_values.cast<Complex>().asDiagonal() * out.v.leftCols(r).adjoint();
  const double scale = k.norm();
  if (scale > 0.0 && (rebuilt - k).norm() > 1e-12 * scale) {
    throw NumericalError("SVD reconstruction error above 1e-12");
  }
  return out;
}

std::string describe(const SelectionRule& rule) {
  std::ostringstream s;
  if (const auto* t = std::get_if<Threshold>(&rule)) {
    s << "threshold(" << t->tau << ")";
  } else if (const auto* f = std::get_if<Fixed>(&rule)) {
    s << "fixed(" << f->dim << ")";
  } else {
    s << "largest-log-gap";
  }
  return s.str();
}

Selection select_signal_dim(const Eigen::VectorXd& sv, const SelectionRule& rule,
                            Eigen::Index rows, Eigen::Index cols) {
  if (sv.size() == 0 || !(sv(0) > 0.0)) throw NumericalError("all singular values are zero");
  const int upper = static_cast<int>(std::min(rows, cols)) - 1;
  if (upper < 1) throw ConfigError("matrix too small for a noise subspace");

  int d = 0;
  if (const auto* t = std::get_if<Threshold>(&rule)) {
    for (Eigen::Index j = 0; j < sv.size(); ++j) d += sv(j) / sv(0) >= t->tau ? 1 : 0;
  } else if (const auto* f = std::get_if<Fixed>(&rule)) {
    d = f->dim;
  } else {
    const int last = std::min<int>(static_cast<int>(std::min(rows, cols)) / 2,
                                   static_cast<int>(sv.size()) - 1);
    double best = -1.0;
    d = 1;
    for (int j = 1; j <= last; ++j) {
      // zero singular values are treated as a very deep gap
      const double a = std::log(std::max(sv(j - 1), 1e-300));
      const double b = std::log(std::max(sv(j), 1e-300));
      if (a - b > best) {
        best = a - b;
        d = j;
      }
    }
  }
  Selection out{std::clamp(d, 1, upper), false};
  out.clamped = out.dim != d;
  return out;
}

SubspaceDecomposition decompose(const Eigen::MatrixXcd& k, const SelectionRule& rule) {
  const Svd svd = compute_svd(k);
  const Selection sel = select_signal_dim(svd.singular_values, rule, k.rows(), k.cols());
  SubspaceDecomposition out;
  out.singular_values = svd.singular_values;
  out.signal_dim = sel.dim;
  out.clamped = sel.clamped;
  out.left_signal = svd.u.leftCols(sel.dim);
  // Incidence-side test vectors live in range(K^T) = conj(range(V)).
  out.right_signal = svd.v.leftCols(sel.dim).conjugate();
  return out;
}

SubspaceDecomposition decompose(const MsrMatrix& msr, const SelectionRule& rule) {
  return decompose(msr.entries, rule);
}

Eigen::VectorXcd project_noise(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& v) {
  if (basis.rows() != v.size()) throw ConfigError("basis and vector dimensions differ");
  return v - basis * (basis.adjoint() * v);
}

double noise_norm(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& v) {
  if (basis.rows() != v.size()) throw ConfigError("basis and vector dimensions differ");
  const double full = v.squaredNorm();
  const double signal = (basis.adjoint() * v).squaredNorm();
  const double rest = full - signal;
  // cancellation is severe near the signal space; fall back to the explicit form
  if (rest < 1e-6 * full) return project_noise(basis, v).norm();
  return std::sqrt(rest);
}

}  // namespace lamusic
