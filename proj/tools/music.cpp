#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lamusic/errors.hpp"
#include "lamusic/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lamusic::ConfigError("cannot read config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<double> parse_widths(const std::string& list) {
  std::vector<double> out;
  std::stringstream s(list);
  std::string item;
  while (std::getline(s, item, ',')) out.push_back(lamusic::parse_angle(item));
  if (out.empty()) throw lamusic::ConfigError("--widths needs at least one value");
  return out;
}

void report(const lamusic::RunResult& r, const std::string& out_dir) {
  std::cout << "signal_dim " << r.decomposition.signal_dim << "\n";
  for (std::size_t i = 0; i < r.peaks.size(); ++i) {
    std::printf("peak %zu  x=%.3f  y=%.3f  value=%.4g\n", i + 1, r.peaks[i].x, r.peaks[i].y, r.peaks[i].value);
  }
  std::cout << "wrote " << r.files.size() << " files to " << out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limited-aperture MUSIC imaging of small inhomogeneities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string case_out;
  std::string sweep_out;
  bool analytic_check = false;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_flag("--analytic-check", analytic_check, "Also write analytic_check.csv");

  int case_id = 0;
  std::string example = "EPS1";
  std::uint64_t seed = 1;
  auto* cs = app.add_subcommand("case", "Run a built-in case");
  cs->add_option("--id", case_id, "Case id 1-8")->required();
  cs->add_option("--example", example, "EPS1, EPS2, MU1 or MU2")->required();
  cs->add_option("--seed", seed, "Noise seed")->default_val(1);
  cs->add_option("--out", case_out, "Output directory (default case<id>_<example>)");

  std::string widths = "pi/3,pi/2,2pi/3,pi";
  auto* sweep = app.add_subcommand("sweep-aperture", "Series-vs-direct discrepancy over arc widths");
  sweep->add_option("--example", example, "EPS1 or EPS2")->default_val("EPS1");
  sweep->add_option("--widths", widths, "Comma-separated widths, e.g. pi/3,pi/2,pi");
  sweep->add_option("--out", sweep_out, "Optional CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      auto config = lamusic::parse_config(read_file(config_path));
      config.analytic_check = config.analytic_check || analytic_check;
      report(lamusic::run_experiment(config, out_dir), out_dir);
    } else if (*cs) {
      const auto ex = lamusic::parse_example(example);
      const auto config = lamusic::case_config(case_id, ex, seed);
      if (case_out.empty()) case_out = "case" + std::to_string(case_id) + "_" + example;
      report(lamusic::run_experiment(config, case_out), case_out);
    } else if (*sweep) {
      const auto points = lamusic::aperture_sweep(lamusic::parse_example(example), parse_widths(widths));
      std::ostringstream csv;
      csv << "width,max_discrepancy,mean_discrepancy\n";
      for (const auto& p : points) {
        char line[128];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.width, p.max_discrepancy, p.mean_discrepancy);
        csv << line;
      }
      if (sweep_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(sweep_out);
        if (!out) throw lamusic::ConfigError("cannot write " + sweep_out);
        out << csv.str();
      }
    }
  } catch (const lamusic::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lamusic::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lamusic::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
