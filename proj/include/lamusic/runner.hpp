#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lamusic/analytic.hpp"
#include "lamusic/imaging.hpp"
#include "lamusic/subspace.hpp"

namespace lamusic {

struct ExperimentConfig {
  Scene scene;
  ApertureArc incident_arc{-std::numbers::pi / 2.0, std::numbers::pi / 2.0, 32};
  ApertureArc observation_arc{std::numbers::pi / 2.0, 3.0 * std::numbers::pi / 2.0, 32};
  ContrastMode mode = ContrastMode::Permittivity;
  ForwardKind forward = ForwardKind::FoldyLax;
  std::optional<double> snr_db;
  std::uint64_t seed = 1;
  SelectionRule selection = Threshold{1e-8};
  Grid grid;
  TestSpec test;
  std::optional<int> truncation_order;  // nullopt: derived from the grid extent
  double tail_tolerance = 1e-14;
  double separation_margin = 5.0;
  bool analytic_check = false;
  std::vector<std::string> outputs{"singular_values", "map_csv", "map_pgm", "peaks", "metadata"};
};

/// Parses and validates a JSON config, filling defaults. Unknown keys and
/// schema violations throw ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON with every field present; parse_config(dump) reproduces it.
std::string dump_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct RunResult {
  SubspaceDecomposition decomposition;
  double achieved_snr_db = std::numeric_limits<double>::infinity();
  ImagingMap map;
  std::vector<Peak> peaks;
  std::vector<std::filesystem::path> files;
};

/// Assembles data, decomposes, images and writes the requested files into
/// out_dir. Deterministic given the config. Files written before a failure
/// are removed again.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Same as run_experiment without touching the file system.
RunResult compute_experiment(const ExperimentConfig& config);

enum class Example { EPS1, EPS2, MU1, MU2 };

Example parse_example(const std::string& name);
std::string_view to_string(Example example);

/// The three-disk scene at wavelength 0.4 with the example's materials.
Scene example_scene(Example example);

struct CaseDescriptor {
  int id = 0;
  ApertureArc incident;
  ApertureArc observation;
};

/// Cases 1-4: incident [-pi/4, pi/4]; Cases 5-8: incident [-pi/2, pi/2];
/// observation arcs centred at pi of widths pi/2, 2pi/3, 5pi/6, pi.
/// Throws ConfigError for ids outside 1..8.
CaseDescriptor case_descriptor(int id, int count = 32);

/// Foldy-Lax data at 20 dB for the case and example.
ExperimentConfig case_config(int id, Example example, std::uint64_t seed);

struct SweepPoint {
  double width = 0.0;
  double max_discrepancy = 0.0;
  double mean_discrepancy = 0.0;
};

/// For each width: noiseless asymptotic data, both arcs of that width (observation
/// centred at pi, incidence at 0), and the grid maximum / mean of
/// |(1 - sum|Phi|^2) - |P f|^2| on the observation side.
std::vector<SweepPoint> aperture_sweep(Example example, const std::vector<double>& widths,
                                       const Grid& grid = {}, int count = 32);

/// Accepts plain numbers and pi fractions such as "pi", "pi/3", "2pi/3", "2*pi/3".
double parse_angle(const std::string& text);

}  // namespace lamusic
