#include "lamusic/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lamusic/errors.hpp"

namespace lamusic {
namespace {

using Json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

const std::set<std::string> kOutputs{"singular_values", "map_csv", "map_pgm", "peaks", "metadata"};

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return item.key() == a; });
    if (!ok) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
  }
}

double number(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("'" + where + "." + key + "' must be finite");
  return d;
}

double number_or(const Json& obj, const char* key, const std::string& where, double fallback) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::int64_t integer(const Json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError("'" + name + "' must be an integer");
  return v.get<std::int64_t>();
}

Vec2 pair_of(const Json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("'" + name + "' must be an array of two numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ApertureArc parse_arc(const Json& j, const std::string& name) {
  check_keys(j, name, {"start", "end", "count"});
  if (!j.contains("start") || !j.contains("end")) throw ConfigError("'" + name + "' needs start and end");
  const std::int64_t count = j.contains("count") ? integer(j.at("count"), name + ".count") : 32;
  if (count < 2) throw ConfigError("'" + name + ".count' must satisfy count >= 2");
  if (count > 4096) throw ConfigError("'" + name + ".count' must be <= 4096");
  try {
    return {number(j, "start", name), number(j, "end", name), static_cast<int>(count)};
  } catch (const ConfigError& e) {
    throw ConfigError("'" + name + "': " + e.what());
  }
}

Scene parse_scene(const Json& j) {
  check_keys(j, "scene", {"wavelength", "wavenumber", "background", "inhomogeneities"});
  Scene scene;
  const bool has_l = j.contains("wavelength");
  const bool has_k = j.contains("wavenumber");
  if (has_l == has_k) throw ConfigError("'scene' needs exactly one of wavelength, wavenumber");
  if (has_l) {
    const double l = number(j, "wavelength", "scene");
    if (!(l > 0.0)) throw ConfigError("'scene.wavelength' must be positive");
    scene.wavenumber = 2.0 * kPi / l;
  } else {
    scene.wavenumber = number(j, "wavenumber", "scene");
    if (!(scene.wavenumber > 0.0)) throw ConfigError("'scene.wavenumber' must be positive");
  }
  if (j.contains("background")) {
    const auto& b = j.at("background");
    check_keys(b, "scene.background", {"eps", "mu"});
    scene.background.eps_b = number_or(b, "eps", "scene.background", 1.0);
    scene.background.mu_b = number_or(b, "mu", "scene.background", 1.0);
    if (!(scene.background.eps_b > 0.0) || !(scene.background.mu_b > 0.0)) {
      throw ConfigError("'scene.background' eps and mu must be positive");
    }
  }
  if (!j.contains("inhomogeneities") || !j.at("inhomogeneities").is_array() ||
      j.at("inhomogeneities").empty()) {
    throw ConfigError("'scene.inhomogeneities' must be a non-empty array");
  }
  std::size_t idx = 0;
  for (const auto& item : j.at("inhomogeneities")) {
    const std::string where = "scene.inhomogeneities[" + std::to_string(idx++) + "]";
    check_keys(item, where, {"center", "radius", "eps", "mu"});
    if (!item.contains("center")) throw ConfigError("'" + where + ".center' is required");
    Inhomogeneity inc;
    inc.center = pair_of(item.at("center"), where + ".center");
    inc.radius = number_or(item, "radius", where, 0.1);
    inc.eps = number_or(item, "eps", where, scene.background.eps_b);
    inc.mu = number_or(item, "mu", where, scene.background.mu_b);
    if (!(inc.radius > 0.0)) throw ConfigError("'" + where + ".radius' must be positive");
    if (!(inc.eps > 0.0) || !(inc.mu > 0.0)) throw ConfigError("'" + where + "' eps and mu must be positive");
    scene.inhomogeneities.push_back(inc);
  }
  return scene;
}

SelectionRule parse_selection(const Json& j) {
  if (!j.is_object() || !j.contains("rule") || !j.at("rule").is_string()) {
    throw ConfigError("'selection' must be an object with a string 'rule'");
  }
  const auto rule = j.at("rule").get<std::string>();
  if (rule == "threshold") {
    check_keys(j, "selection", {"rule", "tau"});
    const double tau = number_or(j, "tau", "selection", 1e-2);
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("'selection.tau' must lie in (0, 1)");
    return Threshold{tau};
  }
  if (rule == "fixed") {
    check_keys(j, "selection", {"rule", "dim"});
    if (!j.contains("dim")) throw ConfigError("'selection.dim' is required for rule fixed");
    const auto d = integer(j.at("dim"), "selection.dim");
    if (d < 1) throw ConfigError("'selection.dim' must be >= 1");
    return Fixed{static_cast<int>(d)};
  }
  if (rule == "largest-log-gap") {
    check_keys(j, "selection", {"rule"});
    return LargestLogGap{};
  }
  throw ConfigError("'selection.rule' must be threshold, fixed or largest-log-gap");
}

Json selection_json(const SelectionRule& rule) {
  Json j;
  if (const auto* t = std::get_if<Threshold>(&rule)) {
    j["rule"] = "threshold";
    j["tau"] = t->tau;
  } else if (const auto* f = std::get_if<Fixed>(&rule)) {
    j["rule"] = "fixed";
    j["dim"] = f->dim;
  } else {
    j["rule"] = "largest-log-gap";
  }
  return j;
}

Json arc_json(const ApertureArc& a) {
  Json j;
  j["start"] = a.start();
  j["end"] = a.end();
  j["count"] = a.count();
  return j;
}

Json config_json(const ExperimentConfig& c) {
  Json scene;
  scene["wavenumber"] = c.scene.wavenumber;
  scene["background"] = {{"eps", c.scene.background.eps_b}, {"mu", c.scene.background.mu_b}};
  scene["inhomogeneities"] = Json::array();
  for (const auto& inc : c.scene.inhomogeneities) {
    Json item;
    item["center"] = {inc.center.x(), inc.center.y()};
    item["radius"] = inc.radius;
    item["eps"] = inc.eps;
    item["mu"] = inc.mu;
    scene["inhomogeneities"].push_back(item);
  }
  Json j;
  j["scene"] = scene;
  j["incident_arc"] = arc_json(c.incident_arc);
  j["observation_arc"] = arc_json(c.observation_arc);
  j["mode"] = std::string(to_string(c.mode));
  j["forward"] = std::string(to_string(c.forward));
  j["snr_db"] = c.snr_db ? Json(*c.snr_db) : Json(nullptr);
  j["seed"] = c.seed;
  j["selection"] = selection_json(c.selection);
  j["grid"] = {{"x", {c.grid.x_min, c.grid.x_max}}, {"y", {c.grid.y_min, c.grid.y_max}}, {"step", c.grid.step}};
  Json tv;
  tv["kind"] = std::string(to_string(c.test.kind));
  if (c.test.kind == TestKind::Dipole) tv["xi"] = {c.test.xi.x(), c.test.xi.y()};
  j["test_vectors"] = tv;
  j["truncation"] = {{"max_order", c.truncation_order ? Json(*c.truncation_order) : Json(nullptr)},
                     {"tail_tolerance", c.tail_tolerance}};
  j["separation_margin"] = c.separation_margin;
  j["analytic_check"] = c.analytic_check;
  j["outputs"] = c.outputs;
  return j;
}

void require_valid_scene(const ExperimentConfig& c) {
  const auto report = validate_scene(c.scene, c.separation_margin);
  if (!report.pass) {
    std::string msg = "scene validation failed:";
    for (const auto& issue : report.issues) msg += " " + issue + ";";
    throw ConfigError(msg);
  }
}

double max_extent(const Grid& grid, const Scene& scene) {
  double d = 0.0;
  for (const auto& inc : scene.inhomogeneities) {
    for (double x : {grid.x_min, grid.x_max}) {
      for (double y : {grid.y_min, grid.y_max}) d = std::max(d, (Vec2(x, y) - inc.center).norm());
    }
  }
  return d;
}

analytic::SeriesTruncation truncation_for(const ExperimentConfig& c) {
  auto t = analytic::default_truncation(c.scene.wavenumber, max_extent(c.grid, c.scene));
  if (c.truncation_order) t.max_order = *c.truncation_order;
  t.tail_tolerance = c.tail_tolerance;
  return t;
}

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) std::filesystem::remove(f, ec);
    if (created_dir_) std::filesystem::remove(dir_, ec);
  }
  void open_dir() {
    if (!std::filesystem::exists(dir_)) {
      std::filesystem::create_directories(dir_);
      created_dir_ = true;
    }
  }
  std::ofstream create(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    files_.push_back(path);
    return out;
  }
  void commit() { committed_ = true; }
  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

void write_map_csv(std::ostream& out, const ImagingMap& map) {
  out << "y/x";
  for (int i = 0; i < map.grid.nx(); ++i) out << ',' << fmt(map.grid.x(i));
  out << '\n';
  for (int j = 0; j < map.grid.ny(); ++j) {
    out << fmt(map.grid.y(j));
    for (int i = 0; i < map.grid.nx(); ++i) out << ',' << fmt(map.values(j, i));
    out << '\n';
  }
}

void write_pgm(std::ostream& out, const ImagingMap& map) {
  const int nx = map.grid.nx();
  const int ny = map.grid.ny();
  const Eigen::MatrixXd v = map.values.cwiseMin(kMusicCap);
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  out << "P5\n" << nx << ' ' << ny << "\n255\n";
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      const double t = hi > lo ? (v(j, i) - lo) / (hi - lo) : 0.0;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"scene", "incident_arc", "observation_arc", "mode", "forward", "snr_db", "seed",
              "selection", "grid", "test_vectors", "truncation", "separation_margin",
              "analytic_check", "outputs"});
  for (const char* key : {"scene", "incident_arc", "observation_arc", "mode"}) {
    if (!j.contains(key)) throw ConfigError(std::string("'") + key + "' is required");
  }

  ExperimentConfig c;
  c.scene = parse_scene(j.at("scene"));
  c.incident_arc = parse_arc(j.at("incident_arc"), "incident_arc");
  c.observation_arc = parse_arc(j.at("observation_arc"), "observation_arc");

  const auto& mode = j.at("mode");
  if (mode == "permittivity") {
    c.mode = ContrastMode::Permittivity;
  } else if (mode == "permeability") {
    c.mode = ContrastMode::Permeability;
  } else {
    throw ConfigError("'mode' must be permittivity or permeability");
  }

  if (j.contains("forward")) {
    const auto& f = j.at("forward");
    if (f == "asymptotic") {
      c.forward = ForwardKind::Asymptotic;
    } else if (f == "foldy-lax") {
      c.forward = ForwardKind::FoldyLax;
    } else {
      throw ConfigError("'forward' must be asymptotic or foldy-lax");
    }
  }

  if (j.contains("snr_db") && !j.at("snr_db").is_null()) c.snr_db = number(j, "snr_db", "config");
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("selection")) {
    c.selection = parse_selection(j.at("selection"));
  } else if (c.snr_db) {
    c.selection = LargestLogGap{};
  } else {
    c.selection = Threshold{1e-8};
  }

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    check_keys(g, "grid", {"x", "y", "step"});
    if (g.contains("x")) {
      const Vec2 x = pair_of(g.at("x"), "grid.x");
      c.grid.x_min = x.x();
      c.grid.x_max = x.y();
    }
    if (g.contains("y")) {
      const Vec2 y = pair_of(g.at("y"), "grid.y");
      c.grid.y_min = y.x();
      c.grid.y_max = y.y();
    }
    c.grid.step = number_or(g, "step", "grid", c.grid.step);
    try {
      c.grid.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("'grid': ") + e.what());
    }
  }

  if (j.contains("test_vectors")) {
    const auto& t = j.at("test_vectors");
    check_keys(t, "test_vectors", {"kind", "xi"});
    const auto kind = t.value("kind", std::string("plain"));
    if (kind == "plain") {
      c.test.kind = TestKind::Plain;
      if (t.contains("xi")) throw ConfigError("'test_vectors.xi' only applies to kind dipole");
    } else if (kind == "dipole") {
      c.test.kind = TestKind::Dipole;
      if (t.contains("xi")) c.test.xi = pair_of(t.at("xi"), "test_vectors.xi");
      if (!(c.test.xi.norm() > 0.0)) throw ConfigError("'test_vectors.xi' must be nonzero");
    } else {
      throw ConfigError("'test_vectors.kind' must be plain or dipole");
    }
  }

  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    check_keys(t, "truncation", {"max_order", "tail_tolerance"});
    if (t.contains("max_order") && !t.at("max_order").is_null()) {
      const auto p = integer(t.at("max_order"), "truncation.max_order");
      if (p < 1 || p > 100000) throw ConfigError("'truncation.max_order' must lie in [1, 100000]");
      c.truncation_order = static_cast<int>(p);
    }
    c.tail_tolerance = number_or(t, "tail_tolerance", "truncation", c.tail_tolerance);
    if (!(c.tail_tolerance > 0.0)) throw ConfigError("'truncation.tail_tolerance' must be positive");
  }

  c.separation_margin = number_or(j, "separation_margin", "config", c.separation_margin);
  if (!(c.separation_margin > 0.0)) throw ConfigError("'separation_margin' must be positive");

  if (j.contains("analytic_check")) {
    if (!j.at("analytic_check").is_boolean()) throw ConfigError("'analytic_check' must be a boolean");
    c.analytic_check = j.at("analytic_check").get<bool>();
  }

  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (!o.is_array()) throw ConfigError("'outputs' must be an array of strings");
    c.outputs.clear();
    for (const auto& item : o) {
      if (!item.is_string() || !kOutputs.count(item.get<std::string>())) {
        throw ConfigError("'outputs' entries must be among singular_values, map_csv, map_pgm, peaks, metadata");
      }
      c.outputs.push_back(item.get<std::string>());
    }
  }

  require_valid_scene(c);
  return c;
}

std::string dump_config(const ExperimentConfig& config) { return config_json(config).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << h;
  return s.str();
}

RunResult compute_experiment(const ExperimentConfig& config) {
  require_valid_scene(config);
  config.grid.validate();
  NoiseSpec noise{config.snr_db, config.seed};
  const MsrMatrix msr = assemble_msr(config.scene, config.observation_arc, config.incident_arc,
                                     config.mode, config.forward, noise);
  RunResult out;
  out.decomposition = decompose(msr, config.selection);
  out.achieved_snr_db = msr.achieved_snr_db;

  const ImagingSetup setup{config.observation_arc, config.incident_arc, config.scene.wavenumber, config.test};
  out.map = music_map(config.grid, out.decomposition, setup);
  out.map.metadata.mode = std::string(to_string(config.mode));
  out.map.metadata.selection = describe(config.selection);
  out.map.metadata.seed = config.seed;
  out.peaks = find_peaks(out.map, config.scene.size(), config.scene.wavelength() / 4.0);
  return out;
}

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  OutputSet files(out_dir);
  RunResult result = compute_experiment(config);
  files.open_dir();
  auto wants = [&](const char* name) {
    return std::find(config.outputs.begin(), config.outputs.end(), name) != config.outputs.end();
  };

  if (wants("singular_values")) {
    auto out = files.create("singular_values.csv");
    out << "sigma\n";
    for (Eigen::Index i = 0; i < result.decomposition.singular_values.size(); ++i) {
      out << fmt(result.decomposition.singular_values(i)) << '\n';
    }
  }
  if (wants("map_csv")) {
    auto out = files.create("map.csv");
    write_map_csv(out, result.map);
  }
  if (wants("map_pgm")) {
    auto out = files.create("map.pgm");
    write_pgm(out, result.map);
  }
  if (wants("peaks")) {
    auto out = files.create("peaks.csv");
    out << "rank,x,y,value\n";
    for (std::size_t r = 0; r < result.peaks.size(); ++r) {
      const auto& p = result.peaks[r];
      out << r + 1 << ',' << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.value) << '\n';
    }
  }
  if (config.analytic_check) {
    const auto trunc = truncation_for(config);
    const analytic::ArcPair arcs{config.observation_arc, config.incident_arc};
    auto out = files.create("analytic_check.csv");
    out << "x,y,direct,predicted,discrepancy\n";
    const Grid& g = result.map.grid;
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const Vec2 r(g.x(i), g.y(j));
        const double direct = result.map.values(j, i);
        const double predicted = config.mode == ContrastMode::Permittivity
                                     ? analytic::structure_eps(r, config.scene, arcs, trunc)
                                     : analytic::structure_mu(r, config.scene, arcs, trunc);
        out << fmt(r.x()) << ',' << fmt(r.y()) << ',' << fmt(direct) << ',' << fmt(predicted) << ','
            << fmt(std::abs(direct - predicted)) << '\n';
      }
    }
  }
  if (wants("metadata")) {
    Json meta;
    meta["config"] = config_json(config);
    meta["config_hash"] = config_hash(config);
    meta["signal_dim"] = result.decomposition.signal_dim;
    meta["selection"] = describe(config.selection);
    meta["selection_clamped"] = result.decomposition.clamped;
    meta["achieved_snr_db"] =
        std::isfinite(result.achieved_snr_db) ? Json(result.achieved_snr_db) : Json(nullptr);
    meta["floor"] = kMusicFloor;
    meta["cap"] = kMusicCap;
    meta["grid_nodes"] = {result.map.grid.nx(), result.map.grid.ny()};
    auto out = files.create("metadata.json");
    out << meta.dump(2) << '\n';
  }
  for (const auto& f : files.files()) {
    if (!std::filesystem::exists(f)) throw ConfigError("failed to write " + f.string());
  }
  result.files = files.files();
  files.commit();
  return result;
}

Example parse_example(const std::string& name) {
  if (name == "EPS1") return Example::EPS1;
  if (name == "EPS2") return Example::EPS2;
  if (name == "MU1") return Example::MU1;
  if (name == "MU2") return Example::MU2;
  throw ConfigError("unknown example '" + name + "'; valid: EPS1, EPS2, MU1, MU2");
}

std::string_view to_string(Example example) {
  switch (example) {
    case Example::EPS1: return "EPS1";
    case Example::EPS2: return "EPS2";
    case Example::MU1: return "MU1";
    default: return "MU2";
  }
}

Scene example_scene(Example example) {
  Scene scene;
  scene.wavenumber = 2.0 * kPi / 0.4;
  const Vec2 centers[3] = {{0.7, 0.5}, {-0.7, 0.0}, {0.2, -0.5}};
  const double graded[3] = {5.0, 3.0, 2.0};
  for (int s = 0; s < 3; ++s) {
    Inhomogeneity inc;
    inc.center = centers[s];
    inc.radius = 0.1;
    const double value = (example == Example::EPS1 || example == Example::MU1) ? 5.0 : graded[s];
    if (example == Example::EPS1 || example == Example::EPS2) {
      inc.eps = value;
    } else {
      inc.mu = value;
    }
    scene.inhomogeneities.push_back(inc);
  }
  return scene;
}

CaseDescriptor case_descriptor(int id, int count) {
  if (id < 1 || id > 8) throw ConfigError("case id must be one of 1, 2, 3, 4, 5, 6, 7, 8");
  const double half_inc = id <= 4 ? kPi / 4.0 : kPi / 2.0;
  const double widths[4] = {kPi / 2.0, 2.0 * kPi / 3.0, 5.0 * kPi / 6.0, kPi};
  const double w = widths[(id - 1) % 4];
  return {id, ApertureArc(-half_inc, half_inc, count), ApertureArc(kPi - w / 2.0, kPi + w / 2.0, count)};
}

ExperimentConfig case_config(int id, Example example, std::uint64_t seed) {
  const CaseDescriptor cd = case_descriptor(id);
  ExperimentConfig c;
  c.scene = example_scene(example);
  c.incident_arc = cd.incident;
  c.observation_arc = cd.observation;
  c.mode = (example == Example::EPS1 || example == Example::EPS2) ? ContrastMode::Permittivity
                                                                   : ContrastMode::Permeability;
  c.forward = ForwardKind::FoldyLax;
  c.snr_db = 20.0;
  c.seed = seed;
  c.selection = LargestLogGap{};
  return c;
}

std::vector<SweepPoint> aperture_sweep(Example example, const std::vector<double>& widths,
                                       const Grid& grid, int count) {
  if (example != Example::EPS1 && example != Example::EPS2) {
    throw ConfigError("aperture sweep is defined for permittivity examples (EPS1, EPS2)");
  }
  grid.validate();
  const Scene scene = example_scene(example);
  const double k = scene.wavenumber;
  const auto trunc = analytic::default_truncation(k, max_extent(grid, scene));
  std::vector<SweepPoint> out;
  for (double w : widths) {
    if (!(w > 0.0) || w > 2.0 * kPi) throw ConfigError("sweep widths must lie in (0, 2*pi]");
    const ApertureArc obs(kPi - w / 2.0, kPi + w / 2.0, count);
    const ApertureArc inc(-w / 2.0, w / 2.0, count);
    const MsrMatrix msr = assemble_msr(scene, obs, inc, ContrastMode::Permittivity, ForwardKind::Asymptotic);
    const SubspaceDecomposition dec = decompose(msr, Threshold{1e-8});
    SweepPoint p{w, 0.0, 0.0};
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        const Vec2 r(grid.x(i), grid.y(j));
        const double direct = std::pow(projected_norm_eps(r, dec, obs, k), 2);
        const double predicted = analytic::predicted_noise_norm2_eps(r, scene, obs, trunc, Side::Observation);
        const double gap = std::abs(direct - predicted);
        p.max_discrepancy = std::max(p.max_discrepancy, gap);
        p.mean_discrepancy += gap;
      }
    }
    p.mean_discrepancy /= static_cast<double>(grid.nx()) * grid.ny();
    out.push_back(p);
  }
  return out;
}

double parse_angle(const std::string& raw) {
  std::string t;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  }
  auto to_number = [&](const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ConfigError("cannot parse angle '" + raw + "'");
    }
    return v;
  };
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return to_number(t);
  std::string coef = t.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (!coef.empty()) {
    c = to_number(coef);
  }
  std::string rest = t.substr(pos + 2);
  double div = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError("cannot parse angle '" + raw + "'");
    div = to_number(rest.substr(1));
    if (div == 0.0) throw ConfigError("cannot parse angle '" + raw + "'");
  }
  return c * kPi / div;
}

}  // namespace lamusic
