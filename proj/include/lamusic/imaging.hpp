#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lamusic/forward.hpp"
#include "lamusic/scene.hpp"
#include "lamusic/subspace.hpp"

namespace lamusic {

inline constexpr double kMusicFloor = 1e-8;
inline constexpr double kMusicCap = 1e8;

/// Axis-aligned node grid. Nodes are x_min + i * step for i = 0 .. nx() - 1
/// (the last node is the largest one not beyond x_max + step/1e6), likewise y.
struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  double step = 0.02;

  /// Throws ConfigError unless step > 0 and both axes hold >= 2 nodes.
  void validate() const;
  int nx() const;
  int ny() const;
  double x(int i) const { return x_min + i * step; }
  double y(int j) const { return y_min + j * step; }
};

enum class Side { Observation, Incidence };
enum class TestKind { Plain, Dipole };

std::string_view to_string(TestKind kind);

/// Observation: (1/sqrt M)[e^{-ik obs_m.r}]; Incidence: (1/sqrt N)[e^{ik inc_n.r}].
Eigen::VectorXcd test_vector_eps(const Vec2& r, const ApertureArc& arc, Side side, double k);

/// (D/2) + (1/2) cos(end + start) sin(end - start), D the arc width.
double aperture_normalizer(const ApertureArc& arc);

/// Direction-weighted test vector (1/sqrt C)[(-d.xi) e^{-+ik d.r}] with d the
/// arc directions and C = aperture_normalizer(arc). Throws ConfigError for
/// xi = 0 and DomainError when |C| < 1e-8.
Eigen::VectorXcd test_vector_mu(const Vec2& r, const ApertureArc& arc, Side side, double k,
                                const Vec2& xi);

struct TestSpec {
  TestKind kind = TestKind::Plain;
  Vec2 xi = Vec2(1.0, 0.0);  // only used by Dipole
};

struct ImagingSetup {
  ApertureArc observation;
  ApertureArc incidence;
  double wavenumber = 0.0;
  TestSpec test;
};

/// (1/2)(1/max(|P f|, delta) + 1/max(|Q g|, delta)), capped at 1e8. P projects
/// onto the complement of the left signal space, Q onto the complement of the
/// right one. Throws ConfigError when arc counts do not match the bases.
double music_value(const Vec2& r, const SubspaceDecomposition& dec, const ImagingSetup& setup);

/// |P f(r)| with the observation-side plain test vector.
double projected_norm_eps(const Vec2& r, const SubspaceDecomposition& dec, const ApertureArc& obs,
                          double k);

struct MapMetadata {
  std::string mode;
  std::string selection;
  std::string test_kind;
  int signal_dim = 0;
  std::uint64_t seed = 0;
};

struct ImagingMap {
  Eigen::MatrixXd values;  // values(j, i) at (x(i), y(j))
  Grid grid;
  MapMetadata metadata;
};

/// Evaluates music_value on every node. Rows are shared out among
/// `threads` workers (0: hardware concurrency).
ImagingMap music_map(const Grid& grid, const SubspaceDecomposition& dec, const ImagingSetup& setup,
                     unsigned threads = 0);

struct Peak {
  int i = 0;
  int j = 0;
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

/// Interior nodes strictly greater than all 8 neighbours, by decreasing value.
std::vector<Peak> local_maxima(const ImagingMap& map);

/// The `count` largest local maxima, skipping any closer than min_separation
/// to one already taken.
std::vector<Peak> find_peaks(const ImagingMap& map, std::size_t count, double min_separation);

}  // namespace lamusic
