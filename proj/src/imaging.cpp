#include "lamusic/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "lamusic/errors.hpp"

namespace lamusic {
namespace {

int axis_count(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-6)) + 1;
}

double plain_norm(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& v) {
  return noise_norm(basis, v);
}

}  // namespace

void Grid::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be positive");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw ConfigError("grid bounds must be finite");
  }
  if (!(x_max > x_min) || !(y_max > y_min) || nx() < 2 || ny() < 2) {
    throw ConfigError("grid needs at least 2 points per axis");
  }
}

int Grid::nx() const { return x_max > x_min ? axis_count(x_min, x_max, step) : 1; }
int Grid::ny() const { return y_max > y_min ? axis_count(y_min, y_max, step) : 1; }

std::string_view to_string(TestKind kind) { return kind == TestKind::Plain ? "plain" : "dipole"; }

Eigen::VectorXcd test_vector_eps(const Vec2& r, const ApertureArc& arc, Side side, double k) {
  const auto dirs = arc.directions();
  const double sign = side == Side::Observation ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dirs.size()));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t m = 0; m < dirs.size(); ++m) {
    const double phase = sign * k * dirs[m].dot(r);
    v(m) = Complex(scale * std::cos(phase), scale * std::sin(phase));
  }
  return v;
}

double aperture_normalizer(const ApertureArc& arc) {
  return 0.5 * arc.width() + 0.5 * std::cos(arc.angle_sum()) * std::sin(arc.width());
}

Eigen::VectorXcd test_vector_mu(const Vec2& r, const ApertureArc& arc, Side side, double k,
                                const Vec2& xi) {
  if (!(xi.norm() > 0.0)) throw ConfigError("dipole test vector needs a nonzero xi");
  const double c = aperture_normalizer(arc);
  if (std::abs(c) < 1e-8) throw DomainError("aperture normaliser below 1e-8 (degenerate arc)");
  const auto dirs = arc.directions();
  const double sign = side == Side::Observation ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(c);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t m = 0; m < dirs.size(); ++m) {
    const double phase = sign * k * dirs[m].dot(r);
    const double w = -dirs[m].dot(xi) * scale;
    v(m) = Complex(w * std::cos(phase), w * std::sin(phase));
  }
  return v;
}

double projected_norm_eps(const Vec2& r, const SubspaceDecomposition& dec, const ApertureArc& obs,
                          double k) {
  return plain_norm(dec.left_signal, test_vector_eps(r, obs, Side::Observation, k));
}

double music_value(const Vec2& r, const SubspaceDecomposition& dec, const ImagingSetup& setup) {
  if (dec.left_signal.rows() != setup.observation.count() ||
      dec.right_signal.rows() != setup.incidence.count()) {
    throw ConfigError("arc counts do not match the decomposition");
  }
  const double k = setup.wavenumber;
  Eigen::VectorXcd f;
  Eigen::VectorXcd g;
  if (setup.test.kind == TestKind::Plain) {
    f = test_vector_eps(r, setup.observation, Side::Observation, k);
    g = test_vector_eps(r, setup.incidence, Side::Incidence, k);
  } else {
    f = test_vector_mu(r, setup.observation, Side::Observation, k, setup.test.xi);
    g = test_vector_mu(r, setup.incidence, Side::Incidence, k, setup.test.xi);
  }
  const double pf = std::max(plain_norm(dec.left_signal, f), kMusicFloor);
  const double qg = std::max(plain_norm(dec.right_signal, g), kMusicFloor);
  return std::min(0.5 * (1.0 / pf + 1.0 / qg), kMusicCap);
}

ImagingMap music_map(const Grid& grid, const SubspaceDecomposition& dec, const ImagingSetup& setup,
                     unsigned threads) {
  grid.validate();
  // fail early, on the calling thread
  (void)music_value(Vec2(grid.x(0), grid.y(0)), dec, setup);

  ImagingMap map;
  map.grid = grid;
  map.values.resize(grid.ny(), grid.nx());
  map.metadata.signal_dim = dec.signal_dim;
  map.metadata.test_kind = std::string(to_string(setup.test.kind));

  const int rows = grid.ny();
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(rows));
  auto work = [&](unsigned w) {
    for (int j = static_cast<int>(w); j < rows; j += static_cast<int>(workers)) {
      for (int i = 0; i < grid.nx(); ++i) map.values(j, i) = music_value(Vec2(grid.x(i), grid.y(j)), dec, setup);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return map;
}

std::vector<Peak> local_maxima(const ImagingMap& map) {
  const auto& v = map.values;
  std::vector<Peak> out;
  for (Eigen::Index j = 1; j + 1 < v.rows(); ++j) {
    for (Eigen::Index i = 1; i + 1 < v.cols(); ++i) {
      const double c = v(j, i);
      bool top = true;
      for (int dj = -1; dj <= 1 && top; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if ((di || dj) && !(c > v(j + dj, i + di))) {
            top = false;
            break;
          }
        }
      }
      if (top) {
        out.push_back({static_cast<int>(i), static_cast<int>(j), map.grid.x(static_cast<int>(i)),
                       map.grid.y(static_cast<int>(j)), c});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return out;
}

std::vector<Peak> find_peaks(const ImagingMap& map, std::size_t count, double min_separation) {
  std::vector<Peak> out;
  for (const Peak& p : local_maxima(map)) {
    if (out.size() == count) break;
    const bool clear = std::none_of(out.begin(), out.end(), [&](const Peak& q) {
      return std::hypot(p.x - q.x, p.y - q.y) < min_separation;
    });
    if (clear) out.push_back(p);
  }
  return out;
}

}  // namespace lamusic
