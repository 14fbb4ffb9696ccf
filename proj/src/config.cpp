#include "slitflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

#include "slitflow/errors.hpp"

namespace slitflow {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Ctx {
  std::string_view key;
  std::size_t line;

  [[noreturn]] void fail(const std::string &why) const {
    throw ConfigError(std::string(key) + ": " + why, line);
  }
};

double parse_real(std::string_view v, const Ctx &ctx) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    ctx.fail("expected a number, got '" + std::string(v) + "'");
  }
  if (!std::isfinite(out)) ctx.fail("value must be finite");
  return out;
}

double parse_positive(std::string_view v, const Ctx &ctx) {
  const double x = parse_real(v, ctx);
  if (!(x > 0.0)) ctx.fail("must be positive");
  return x;
}

std::uint64_t parse_unsigned(std::string_view v, const Ctx &ctx) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    ctx.fail("expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::vector<double> parse_list(std::string_view v, const Ctx &ctx) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) return out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse_real(v.substr(0, comma), ctx));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(RunConfig &, std::string_view, const Ctx &)>;

const std::vector<std::pair<std::string, Setter>> &setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"kd", [](RunConfig &c, auto v, auto &x) { c.kd = parse_positive(v, x); }},
      {"exclusion_radius",
       [](RunConfig &c, auto v, auto &x) { c.exclusion_radius = parse_positive(v, x); }},
      {"field",
       [](RunConfig &c, auto v, auto &x) {
         v = trim(v);
         if (v == "two_slit") c.field = FieldKind::two_slit;
         else if (v == "single_slit") c.field = FieldKind::single_slit;
         else x.fail("expected two_slit or single_slit");
       }},
      {"grid.x_min", [](RunConfig &c, auto v, auto &x) { c.grid.x_min = parse_real(v, x); }},
      {"grid.x_max", [](RunConfig &c, auto v, auto &x) { c.grid.x_max = parse_real(v, x); }},
      {"grid.y_min", [](RunConfig &c, auto v, auto &x) { c.grid.y_min = parse_real(v, x); }},
      {"grid.y_max", [](RunConfig &c, auto v, auto &x) { c.grid.y_max = parse_real(v, x); }},
      {"grid.nx", [](RunConfig &c, auto v, auto &x) { c.grid.nx = parse_unsigned(v, x); }},
      {"grid.ny", [](RunConfig &c, auto v, auto &x) { c.grid.ny = parse_unsigned(v, x); }},
      {"seeds.x0", [](RunConfig &c, auto v, auto &x) { c.seeds.x0 = parse_real(v, x); }},
      {"seeds.y_min", [](RunConfig &c, auto v, auto &x) { c.seeds.y_min = parse_real(v, x); }},
      {"seeds.y_max", [](RunConfig &c, auto v, auto &x) { c.seeds.y_max = parse_real(v, x); }},
      {"seeds.count", [](RunConfig &c, auto v, auto &x) { c.seeds.count = parse_unsigned(v, x); }},
      {"seeds.spacing",
       [](RunConfig &c, auto v, auto &x) {
         v = trim(v);
         if (v == "flux") c.seeds.spacing = SeedSpacing::flux;
         else if (v == "uniform") c.seeds.spacing = SeedSpacing::uniform;
         else x.fail("expected flux or uniform");
       }},
      {"seeds.y", [](RunConfig &c, auto v, auto &x) { c.seeds.y = parse_list(v, x); }},
      {"seeds.direction",
       [](RunConfig &c, auto v, auto &x) {
         v = trim(v);
         if (v == "downstream") c.seeds.direction = Direction::downstream;
         else if (v == "upstream") c.seeds.direction = Direction::upstream;
         else x.fail("expected downstream or upstream");
       }},
      {"trace.rel_tol",
       [](RunConfig &c, auto v, auto &x) { c.integrator.rel_tol = parse_positive(v, x); }},
      {"trace.abs_tol",
       [](RunConfig &c, auto v, auto &x) { c.integrator.abs_tol = parse_positive(v, x); }},
      {"trace.max_arc_length",
       [](RunConfig &c, auto v, auto &x) { c.integrator.max_arc_length = parse_positive(v, x); }},
      {"trace.min_current",
       [](RunConfig &c, auto v, auto &x) { c.integrator.min_current = parse_positive(v, x); }},
      {"trace.max_steps",
       [](RunConfig &c, auto v, auto &x) { c.integrator.max_steps = parse_unsigned(v, x); }},
      {"trace.boundary_radius",
       [](RunConfig &c, auto v, auto &x) { c.integrator.boundary_radius = parse_positive(v, x); }},
      {"trace.record_interval",
       [](RunConfig &c, auto v, auto &x) { c.integrator.record_interval = parse_positive(v, x); }},
      {"trace.max_step",
       [](RunConfig &c, auto v, auto &x) { c.integrator.max_step = parse_positive(v, x); }},
      {"radial.k_over_kappa",
       [](RunConfig &c, auto v, auto &x) { c.radial.k_over_kappa = parse_list(v, x); }},
      {"radial.nonlinear",
       [](RunConfig &c, auto v, auto &x) { c.radial.nonlinear = parse_real(v, x); }},
      {"radial.r_start",
       [](RunConfig &c, auto v, auto &x) { c.radial.r_start = parse_positive(v, x); }},
      {"radial.r_end", [](RunConfig &c, auto v, auto &x) { c.radial.r_end = parse_positive(v, x); }},
      {"radial.samples",
       [](RunConfig &c, auto v, auto &x) { c.radial.samples = parse_unsigned(v, x); }},
      {"radial.rel_tol",
       [](RunConfig &c, auto v, auto &x) { c.radial.rel_tol = parse_positive(v, x); }},
      {"radial.abs_tol",
       [](RunConfig &c, auto v, auto &x) { c.radial.abs_tol = parse_positive(v, x); }},
      {"svg.x_min", [](RunConfig &c, auto v, auto &x) { c.svg.x_min = parse_real(v, x); }},
      {"svg.x_max", [](RunConfig &c, auto v, auto &x) { c.svg.x_max = parse_real(v, x); }},
      {"svg.y_min", [](RunConfig &c, auto v, auto &x) { c.svg.y_min = parse_real(v, x); }},
      {"svg.y_max", [](RunConfig &c, auto v, auto &x) { c.svg.y_max = parse_real(v, x); }},
      {"svg.k", [](RunConfig &c, auto v, auto &x) { c.svg.k = parse_positive(v, x); }},
      {"fd_step", [](RunConfig &c, auto v, auto &x) { c.fd_step = parse_positive(v, x); }},
      {"density_floor",
       [](RunConfig &c, auto v, auto &x) { c.density_floor = parse_positive(v, x); }},
      {"validate.points",
       [](RunConfig &c, auto v, auto &x) { c.validate_points = parse_unsigned(v, x); }},
      {"validate.seed",
       [](RunConfig &c, auto v, auto &x) { c.validate_seed = parse_unsigned(v, x); }},
      {"validate.fd_step",
       [](RunConfig &c, auto v, auto &x) { c.validate_fd_step = parse_positive(v, x); }},
      {"jobs",
       [](RunConfig &c, auto v, auto &x) {
         const auto n = parse_unsigned(v, x);
         if (n == 0 || n > 1024) x.fail("must be between 1 and 1024");
         c.jobs = static_cast<unsigned>(n);
       }},
      {"out", [](RunConfig &c, auto v, auto &) { c.out = std::string(trim(v)); }},
      {"svg", [](RunConfig &c, auto v, auto &) { c.svg_path = std::string(trim(v)); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto &[k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value,
                   std::size_t line) {
  key = trim(key);
  for (const auto &[name, set] : setters()) {
    if (name == key) {
      set(cfg, value, Ctx{key, line});
      return;
    }
  }
  throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

void read_config(std::istream &in, RunConfig &cfg) {
  std::string text;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t, std::less<>> seen;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view line = text;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError("duplicate key '" + key + "' (first set on line " +
                            std::to_string(it->second) + ")",
                        line_no);
    }
    seen.emplace(key, line_no);
    apply_setting(cfg, key, line.substr(eq + 1), line_no);
  }
}

RunConfig load_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RunConfig cfg;
  read_config(in, cfg);
  return cfg;
}

void validate_config(const RunConfig &c) {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.kd > 0.0, "kd must be positive");
  require(c.exclusion_radius > 0.0, "exclusion_radius must be positive");
  require(c.exclusion_radius < c.kd / 2, "exclusion disks of the two slits overlap");
  require(c.grid.nx >= 2 && c.grid.ny >= 2, "grid.nx and grid.ny must be at least 2");
  require(c.grid.x_min < c.grid.x_max, "grid.x_min must be below grid.x_max");
  require(c.grid.y_min < c.grid.y_max, "grid.y_min must be below grid.y_max");
  require(c.seeds.y_min <= c.seeds.y_max, "seeds.y_min must not exceed seeds.y_max");
  require(c.seeds.x0 != 0.0, "seeds.x0 lies on the barrier");
  require(c.integrator.max_steps > 0, "trace.max_steps must be positive");
  require(!c.radial.k_over_kappa.empty(), "radial.k_over_kappa must list at least one value");
  for (double q : c.radial.k_over_kappa) {
    require(q > 0.0 && q <= 1.0, "radial.k_over_kappa values must lie in (0, 1]");
  }
  require(c.radial.r_start <= c.radial.r_end, "radial.r_start must not exceed radial.r_end");
  require(c.radial.samples >= 1, "radial.samples must be at least 1");
  require(c.svg.x_min < c.svg.x_max && c.svg.y_min < c.svg.y_max, "empty svg view box");
  require(c.validate_points > 0, "validate.points must be positive");
}

}  // namespace slitflow
