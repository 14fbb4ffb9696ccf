#pragma once

// Subcommand bodies. Each takes a validated RunConfig and writes to streams;
// the executable only handles argument parsing, files and exit codes.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "slitflow/config.hpp"
#include "slitflow/radial.hpp"
#include "slitflow/trace.hpp"

namespace slitflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  ///< failed check, or no streamline could be traced
  kExitConfig = 2,
  kExitIo = 3,
};

/// Grid of x, y, valid, re_psi, im_psi, n, jx, jy, Q.
void write_field_csv(const RunConfig &cfg, std::ostream &out);

/// Owns the fields a family was traced in.
struct StreamlineRun {
  std::shared_ptr<const ComplexField> field;
  std::shared_ptr<const CurrentField> current;
  std::vector<FamilyMember> family;

  std::size_t completed() const;
  std::size_t failed() const { return family.size() - completed(); }
};

std::unique_ptr<CurrentField> make_current_field(const RunConfig &cfg,
                                                 std::shared_ptr<const ComplexField> *field_out);
std::vector<Seed> make_seeds(const RunConfig &cfg, const CurrentField &field);
StreamlineRun run_streamlines(const RunConfig &cfg);

/// Rows streamline_id, point_index, s, x, y, jx, jy, termination; failed
/// seeds follow as '#' comment lines.
void write_streamlines_csv(const StreamlineRun &run, std::ostream &out);
void write_streamlines_svg(const StreamlineRun &run, const RunConfig &cfg, std::ostream &out);

/// Fraction of streamline points with both slit distances >= r_min and
/// density at least `node_fraction` of the constructive envelope
/// (1/sqrt(r1) + 1/sqrt(r2))^2 / 2 whose force-balance residual is at most
/// `threshold`. `sampled` receives the number of points considered.
double force_law_fraction(const std::vector<FamilyMember> &family, const ComplexField &field,
                          const SlitGeometry &geom, double r_min, double node_fraction,
                          double threshold, std::size_t *sampled = nullptr);

struct RadialRunEntry {
  double k_over_kappa = 1.0;
  std::optional<RadialSolution> solution;
  std::string error;
};

std::vector<RadialRunEntry> run_radial(const RunConfig &cfg);

/// Rows k_over_kappa, r_tilde, re_f, im_f, abs_f, arg_f, then a '#' summary
/// block with one flatness line per parameter set.
void write_radial_csv(const std::vector<RadialRunEntry> &entries, const RunConfig &cfg,
                      std::ostream &out);

struct CheckResult {
  enum class Bound { at_most, at_least, below };

  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::at_most;

  bool pass() const;
};

std::vector<CheckResult> run_validation(const RunConfig &cfg);

/// One "name measured tolerance PASS|FAIL" line per check. Returns true if all pass.
bool print_validation(const std::vector<CheckResult> &checks, std::ostream &out);

}  // namespace slitflow
