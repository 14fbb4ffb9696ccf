#include <sstream>

#include "doctest.h"
#include "slitflow/config.hpp"
#include "slitflow/errors.hpp"

using namespace slitflow;

namespace {

RunConfig parse(const std::string &text) {
  std::istringstream in(text);
  RunConfig cfg;
  read_config(in, cfg);
  return cfg;
}

std::size_t error_line(const std::string &text) {
  try {
    parse(text);
  } catch (const ConfigError &e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("defaults describe the kd = 20 family run") {
  const RunConfig cfg;
  CHECK(cfg.kd == 20.0);
  CHECK(cfg.seeds.x0 == 2.0);
  CHECK(cfg.seeds.count == 41);
  CHECK(cfg.seeds.y_min == -30.0);
  CHECK(cfg.seeds.y_max == 30.0);
  CHECK(cfg.integrator.boundary_radius == 500.0);
  CHECK(cfg.integrator.rel_tol == 1e-8);
  CHECK(cfg.integrator.abs_tol == 1e-8);
  CHECK(cfg.integrator.record_interval == 0.1);
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("parsing") {
  const auto cfg = parse(
      "# comment\n"
      "kd = 12.5\n"
      "\n"
      "  grid.nx=3   # trailing comment\n"
      "seeds.y = 1, -2.5,3e0\n"
      "seeds.spacing = uniform\n"
      "radial.k_over_kappa = 0.9\n"
      "field = single_slit\n"
      "out = result.csv\n");
  CHECK(cfg.kd == 12.5);
  CHECK(cfg.grid.nx == 3);
  CHECK(cfg.seeds.y == std::vector<double>{1.0, -2.5, 3.0});
  CHECK(cfg.seeds.spacing == SeedSpacing::uniform);
  CHECK(cfg.radial.k_over_kappa == std::vector<double>{0.9});
  CHECK(cfg.field == FieldKind::single_slit);
  CHECK(cfg.out == "result.csv");
}

TEST_CASE("every documented key is accepted") {
  for (const auto &key : config_keys()) {
    RunConfig cfg;
    std::string value = "1";
    if (key == "field") value = "two_slit";
    if (key == "seeds.spacing") value = "flux";
    if (key == "seeds.direction") value = "upstream";
    CHECK_NOTHROW(apply_setting(cfg, key, value));
  }
}

TEST_CASE("errors carry the offending line") {
  CHECK(error_line("kd = 20\nbogus = 1\n") == 2);
  CHECK(error_line("kd = 20\n\n\nkd = twenty\n") == 4);
  CHECK(error_line("kd = -1\n") == 1);
  CHECK(error_line("# c\nno equals sign\n") == 2);
  CHECK(error_line("kd = 1\nkd = 2\n") == 2);
  CHECK(error_line("grid.nx = 2.5\n") == 1);
  CHECK(error_line("seeds.spacing = random\n") == 1);
  CHECK(error_line("jobs = 0\n") == 1);
  try {
    parse("x = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).starts_with("line 1: "));
  }
}

TEST_CASE("cross-field validation") {
  auto invalid = [](auto mutate) {
    RunConfig cfg;
    mutate(cfg);
    return [&] {
      try {
        validate_config(cfg);
      } catch (const ConfigError &) {
        return true;
      }
      return false;
    }();
  };
  CHECK(invalid([](RunConfig &c) { c.grid.nx = 1; }));
  CHECK(invalid([](RunConfig &c) { c.grid.x_min = c.grid.x_max; }));
  CHECK(invalid([](RunConfig &c) { c.grid.y_min = 60.0; }));
  CHECK(invalid([](RunConfig &c) { c.radial.k_over_kappa.clear(); }));
  CHECK(invalid([](RunConfig &c) { c.radial.k_over_kappa = {1.2}; }));
  CHECK(invalid([](RunConfig &c) { c.seeds.x0 = 0.0; }));
  CHECK(invalid([](RunConfig &c) { c.exclusion_radius = 15.0; }));
  CHECK_FALSE(invalid([](RunConfig &c) { c.grid.nx = 2; }));
}

TEST_CASE("empty sweep list in a file is rejected by validation") {
  const auto cfg = parse("radial.k_over_kappa =\n");
  CHECK(cfg.radial.k_over_kappa.empty());
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}
