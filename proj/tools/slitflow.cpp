// slitflow: field grids, streamline families, radial envelope runs and the
// validation suite for the two-slit current model.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slitflow/commands.hpp"
#include "slitflow/config.hpp"
#include "slitflow/csv.hpp"
#include "slitflow/errors.hpp"

using namespace slitflow;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> kd;
  std::optional<double> x0;
  std::optional<std::string> seeds;
  std::optional<double> xmax;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<double> fd_step;
  std::optional<double> k_label;
  std::vector<std::string> sets;
};

void add_common(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--config", o.config_path, "flat key = value config file");
  cmd->add_option("--kd", o.kd, "slit separation k*d");
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--out", o.out, "output CSV path (default stdout)");
  cmd->add_option("--set", o.sets, "extra key=value setting, repeatable");
}

std::string fmt(double v) { return format_number(v); }

RunConfig build_config(const Overrides &o, const std::string &command) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config_file(o.config_path);
  auto set = [&](const char *key, const std::string &value) { apply_setting(cfg, key, value); };
  if (o.kd) set("kd", fmt(*o.kd));
  if (o.x0) set("seeds.x0", fmt(*o.x0));
  if (o.seeds) set("seeds.y", *o.seeds);
  if (o.xmax) {
    // Far limit of the run: grid edge for field, tracing radius for streamlines.
    set(command == "field" ? "grid.x_max" : "trace.boundary_radius", fmt(*o.xmax));
  }
  if (o.out) set("out", *o.out);
  if (o.svg) set("svg", *o.svg);
  if (o.jobs) set("jobs", std::to_string(*o.jobs));
  if (o.seed) set("validate.seed", std::to_string(*o.seed));
  if (o.fd_step) set("validate.fd_step", fmt(*o.fd_step));
  if (o.k_label) set("svg.k", fmt(*o.k_label));
  for (const auto &kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate_config(cfg);
  return cfg;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Fn>
void with_output(const std::string &path, Fn &&fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  fn(f);
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

int run(const std::string &command, const RunConfig &cfg) {
  if (command == "field") {
    with_output(cfg.out, [&](std::ostream &os) { write_field_csv(cfg, os); });
    return kExitOk;
  }
  if (command == "streamlines") {
    const auto result = run_streamlines(cfg);
    with_output(cfg.out, [&](std::ostream &os) { write_streamlines_csv(result, os); });
    if (!cfg.svg_path.empty()) {
      with_output(cfg.svg_path, [&](std::ostream &os) { write_streamlines_svg(result, cfg, os); });
    }
    for (const auto &m : result.family) {
      if (!m.line) std::cerr << "warning: seed y0=" << fmt(m.seed.y0) << ": " << m.error << '\n';
    }
    if (result.failed()) std::cerr << result.failed() << " warning(s)\n";
    return result.completed() == 0 ? kExitValidation : kExitOk;
  }
  if (command == "radial") {
    const auto entries = run_radial(cfg);
    with_output(cfg.out, [&](std::ostream &os) { write_radial_csv(entries, cfg, os); });
    bool any_failed = false;
    for (const auto &e : entries) {
      if (!e.solution) {
        std::cerr << "warning: k_over_kappa=" << fmt(e.k_over_kappa) << ": " << e.error << '\n';
        any_failed = true;
      }
    }
    return any_failed ? kExitValidation : kExitOk;
  }
  const auto checks = run_validation(cfg);
  bool ok = true;
  with_output(cfg.out, [&](std::ostream &os) { ok = print_validation(checks, os); });
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Streamlines of the two-slit current in dimensionless k*r units"};
  app.require_subcommand(1);

  Overrides o;
  auto *field = app.add_subcommand("field", "write psi, n, j and Q on a grid");
  add_common(field, o);
  field->add_option("--xmax", o.xmax, "grid x_max");

  auto *lines = app.add_subcommand("streamlines", "trace a streamline family");
  add_common(lines, o);
  lines->add_option("--x0", o.x0, "seed line position k*x0");
  lines->add_option("--seeds", o.seeds, "comma-separated seed ordinates k*y0");
  lines->add_option("--xmax", o.xmax, "tracing radius");
  lines->add_option("--svg", o.svg, "also write an SVG figure");
  lines->add_option("--k", o.k_label, "wavenumber used only to label SVG axes in x / k");

  auto *radial = app.add_subcommand("radial", "solve the radial envelope equation");
  add_common(radial, o);

  auto *validate = app.add_subcommand("validate", "run the cross-check suite");
  add_common(validate, o);
  validate->add_option("--seed", o.seed, "sampling seed");
  validate->add_option("--fd-step", o.fd_step, "finite-difference step of the closed-form check");
  validate->add_option("--x0", o.x0, "seed line position k*x0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = build_config(o, command);
    return run(command, cfg);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError &e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}
