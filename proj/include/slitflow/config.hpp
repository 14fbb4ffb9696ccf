#pragma once

// Run configuration shared by all subcommands.
//
// The file format is flat key = value text, one setting per line, '#'
// starting a comment. Keys are listed in README.md; every key has a default.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slitflow/model.hpp"
#include "slitflow/radial.hpp"
#include "slitflow/trace.hpp"

namespace slitflow {

enum class SeedSpacing { flux, uniform };
enum class FieldKind { two_slit, single_slit };

struct GridSpec {
  double x_min = 1.0;
  double x_max = 100.0;
  double y_min = -50.0;
  double y_max = 50.0;
  std::size_t nx = 100;
  std::size_t ny = 101;
};

struct SeedSpec {
  double x0 = 2.0;
  double y_min = -30.0;
  double y_max = 30.0;
  std::size_t count = 41;
  SeedSpacing spacing = SeedSpacing::flux;
  std::vector<double> y;  ///< explicit seed ordinates; overrides the line spec when set
  Direction direction = Direction::downstream;
};

struct RadialSweep {
  std::vector<double> k_over_kappa{0.90, 0.95, 0.99};
  double nonlinear = 0.05;
  double r_start = 10.0;
  double r_end = 200.0;
  std::size_t samples = 1801;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct SvgSpec {
  double x_min = -10.0;
  double x_max = 100.0;
  double y_min = -60.0;
  double y_max = 60.0;
  double k = 1.0;  ///< axis labels show x / k
};

struct RunConfig {
  double kd = 20.0;
  double exclusion_radius = kDefaultExclusionRadius;
  FieldKind field = FieldKind::two_slit;
  GridSpec grid;
  SeedSpec seeds;
  IntegratorConfig integrator;
  RadialSweep radial;
  SvgSpec svg;
  double fd_step = 1e-3;
  double density_floor = 1e-12;
  std::size_t validate_points = 1000;
  std::uint64_t validate_seed = 20240601;
  std::optional<double> validate_fd_step;  ///< default: 1e-5 wavelengths
  unsigned jobs = 1;
  std::string out;       ///< empty writes to stdout
  std::string svg_path;  ///< empty skips the figure

  SlitGeometry geometry() const { return {kd, exclusion_radius}; }
};

/// Applies one setting. Throws ConfigError (carrying `line`) for unknown keys
/// or unparsable values.
void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value,
                   std::size_t line = 0);

/// Applies every setting of a config file on top of `cfg`.
void read_config(std::istream &in, RunConfig &cfg);
RunConfig load_config_file(const std::string &path);

/// Checks cross-field invariants; throws ConfigError.
void validate_config(const RunConfig &cfg);

/// Keys accepted by apply_setting, in documentation order.
const std::vector<std::string> &config_keys();

}  // namespace slitflow
