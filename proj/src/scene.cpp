#include "lamusic/scene.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lamusic/errors.hpp"

namespace lamusic {

double Scene::wavelength() const { return 2.0 * std::numbers::pi / wavenumber; }

ApertureArc::ApertureArc(double start_angle, double end_angle, int count)
    : start_(start_angle), end_(end_angle), count_(count) {
  if (!std::isfinite(start_angle) || !std::isfinite(end_angle)) {
    throw ConfigError("arc endpoints must be finite");
  }
  if (count < 2) throw ConfigError("arc count must satisfy count >= 2");
  if (!(end_angle > start_angle)) throw ConfigError("arc end angle must exceed start angle");
  if (end_angle - start_angle > 2.0 * std::numbers::pi + 1e-12) {
    throw ConfigError("arc width must not exceed 2*pi");
  }
}

double ApertureArc::angle(int i) const {
  return start_ + static_cast<double>(i) / static_cast<double>(count_ - 1) * (end_ - start_);
}

std::vector<double> ApertureArc::angles() const {
  std::vector<double> out(static_cast<std::size_t>(count_));
  for (int i = 0; i < count_; ++i) out[i] = angle(i);
  return out;
}

std::vector<Vec2> ApertureArc::directions() const {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (int i = 0; i < count_; ++i) {
    const double t = angle(i);
    out.emplace_back(std::cos(t), std::sin(t));
  }
  return out;
}

PolarVector to_polar(const Vec2& v) {
  const double r = v.norm();
  if (r < 1e-12) return {r, 0.0};
  double a = std::atan2(v.y(), v.x());
  if (a >= std::numbers::pi) a = -std::numbers::pi;
  return {r, a};
}

ValidationReport validate_scene(const Scene& scene, double margin) {
  ValidationReport report;
  report.min_distance = std::numeric_limits<double>::infinity();
  auto fail = [&report](std::string msg) {
    report.pass = false;
    report.issues.push_back(std::move(msg));
  };

  if (scene.inhomogeneities.empty()) fail("scene has no inhomogeneities");
  if (!(scene.wavenumber > 0.0)) fail("wavenumber must be positive");
  if (!(scene.background.eps_b > 0.0) || !(scene.background.mu_b > 0.0)) {
    fail("background eps_b and mu_b must be positive");
  }
  if (scene.inhomogeneities.empty() || !(scene.wavenumber > 0.0)) return report;

  const double radius = scene.inhomogeneities.front().radius;
  for (std::size_t s = 0; s < scene.size(); ++s) {
    const auto& inc = scene.inhomogeneities[s];
    if (!(inc.radius > 0.0)) fail("inhomogeneity " + std::to_string(s) + " has non-positive radius");
    if (inc.radius != radius) fail("all inhomogeneities must share one radius");
  }

  const double threshold = margin * 3.0 / (4.0 * scene.wavenumber);
  for (std::size_t s = 0; s < scene.size(); ++s) {
    for (std::size_t t = s + 1; t < scene.size(); ++t) {
      const auto& a = scene.inhomogeneities[s];
      const auto& b = scene.inhomogeneities[t];
      const double d = (a.center - b.center).norm();
      report.min_distance = std::min(report.min_distance, d);
      if (!(d > threshold) || !(d > a.radius + b.radius)) {
        report.violating_pairs.emplace_back(s, t);
        std::ostringstream msg;
        msg << "inhomogeneities " << s << " and " << t << " are " << d
            << " apart; need > " << threshold << " and no overlap";
        fail(msg.str());
      }
    }
  }
  return report;
}

}  // namespace lamusic
