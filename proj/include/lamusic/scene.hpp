#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace lamusic {

using Vec2 = Eigen::Vector2d;

/// Relative permittivity and permeability of the homogeneous background.
struct Background {
  double eps_b = 1.0;
  double mu_b = 1.0;
};

/// A small disk r_s + alpha * B, B the unit disk.
struct Inhomogeneity {
  Vec2 center = Vec2::Zero();
  double radius = 0.1;
  double eps = 1.0;
  double mu = 1.0;
};

struct Scene {
  Background background;
  std::vector<Inhomogeneity> inhomogeneities;
  double wavenumber = 0.0;

  std::size_t size() const { return inhomogeneities.size(); }
  double wavelength() const;
};

/// Contiguous arc of directions [start, end] sampled at `count` equally
/// spaced angles, both endpoints included. A full-circle arc therefore
/// repeats its first direction at the end.
class ApertureArc {
 public:
  /// Throws ConfigError unless end > start, end - start <= 2 pi and count >= 2.
  ApertureArc(double start_angle, double end_angle, int count);

  double start() const { return start_; }
  double end() const { return end_; }
  int count() const { return count_; }
  double width() const { return end_ - start_; }
  double angle_sum() const { return end_ + start_; }

  double angle(int i) const;
  std::vector<double> angles() const;
  std::vector<Vec2> directions() const;

  /// Same endpoints, different sample count.
  ApertureArc with_count(int count) const { return {start_, end_, count}; }

  bool operator==(const ApertureArc&) const = default;

 private:
  double start_;
  double end_;
  int count_;
};

inline std::vector<Vec2> directions(const ApertureArc& arc) { return arc.directions(); }

struct PolarVector {
  double magnitude = 0.0;
  double angle = 0.0;  // [-pi, pi)
};

/// Polar form of v. Vectors shorter than 1e-12 get angle 0.
PolarVector to_polar(const Vec2& v);

struct ValidationReport {
  bool pass = true;
  double min_distance = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> violating_pairs;
  std::vector<std::string> issues;
};

/// Checks the standing assumptions on a scene: at least one inhomogeneity,
/// positive background constants and wavenumber, a single shared radius, and
/// pairwise separation |r_s - r_s'| > margin * 3/(4k) with non-overlapping
/// disks. Never throws.
ValidationReport validate_scene(const Scene& scene, double margin = 5.0);

}  // namespace lamusic
