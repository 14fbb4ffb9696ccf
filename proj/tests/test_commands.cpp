#include <charconv>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "slitflow/commands.hpp"
#include "slitflow/csv.hpp"

using namespace slitflow;

namespace {

std::vector<std::string> split(const std::string &line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

double to_double(const std::string &s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::size_t count_of(const std::string &hay, const std::string &needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, -2.5e-300, 1.0 / 3.0, 123456789.123456789, 0.0, 5e-324, 1e308}) {
    CHECK(to_double(format_number(x)) == x);
  }
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("field grid CSV") {
  RunConfig cfg;
  SUBCASE("2x2 grid has a header and four rows") {
    cfg.grid = {1.0, 3.0, -2.0, 2.0, 2, 2};
    std::ostringstream out;
    write_field_csv(cfg, out);
    const auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "x,y,valid,re_psi,im_psi,n,jx,jy,Q");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split(rows[i]).size() == 9);
  }
  SUBCASE("invalid points are flagged with blank fields") {
    cfg.grid = {0.0, 1.0, 9.5, 10.5, 3, 3};
    std::ostringstream out;
    write_field_csv(cfg, out);
    const auto rows = lines_of(out.str());
    int invalid = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cells = split(rows[i]);
      if (cells[2] == "0") {
        ++invalid;
        for (std::size_t c = 3; c < cells.size(); ++c) CHECK(cells[c].empty());
      }
    }
    CHECK(invalid == 6);  // the barrier column plus the disk around (0, 10)
  }
  SUBCASE("mirror rows") {
    cfg.grid = {5.0, 60.0, -40.0, 40.0, 4, 9};
    std::ostringstream out;
    write_field_csv(cfg, out);
    const auto rows = lines_of(out.str());
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 9; ++j) {
        const auto a = split(rows[1 + i * 9 + j]);
        const auto b = split(rows[1 + i * 9 + (8 - j)]);
        CHECK(to_double(a[1]) == -to_double(b[1]));
        CHECK(a[5] == b[5]);
        CHECK(a[6] == b[6]);
        CHECK(to_double(a[7]) == -to_double(b[7]));
        CHECK(a[8] == b[8]);
      }
    }
  }
  SUBCASE("output does not depend on worker count") {
    cfg.grid = {1.0, 40.0, -20.0, 20.0, 12, 13};
    std::ostringstream one;
    std::ostringstream four;
    write_field_csv(cfg, one);
    cfg.jobs = 4;
    write_field_csv(cfg, four);
    CHECK(one.str() == four.str());
  }
}

TEST_CASE("streamline CSV and SVG") {
  RunConfig cfg;
  cfg.integrator.boundary_radius = 100.0;
  SUBCASE("single on-axis seed") {
    cfg.seeds.y = {0.0};
    const auto run = run_streamlines(cfg);
    REQUIRE(run.completed() == 1);
    std::ostringstream out;
    write_streamlines_csv(run, out);
    const auto rows = lines_of(out.str());
    CHECK(rows[0] == "streamline_id,point_index,s,x,y,jx,jy,termination");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto c = split(rows[i]);
      CHECK(c[0] == "0");
      CHECK(c[4] == "0");
      CHECK(c[7] == "reached_boundary");
    }
    std::ostringstream svg;
    write_streamlines_svg(run, cfg, svg);
    CHECK(count_of(svg.str(), "<polyline") == 1);
  }
  SUBCASE("seeds inside exclusion disks produce warnings, no streamlines") {
    cfg.seeds.x0 = 0.5;
    cfg.seeds.y = {10.0, -10.2};
    const auto run = run_streamlines(cfg);
    CHECK(run.completed() == 0);
    CHECK(run.failed() == 2);
    std::ostringstream out;
    write_streamlines_csv(run, out);
    const auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].starts_with("# failed seed 0"));
  }
  SUBCASE("family output is deterministic and has one polyline per streamline") {
    cfg.seeds.count = 9;
    cfg.jobs = 3;
    const auto a = run_streamlines(cfg);
    cfg.jobs = 1;
    const auto b = run_streamlines(cfg);
    std::ostringstream ca, cb, svg;
    write_streamlines_csv(a, ca);
    write_streamlines_csv(b, cb);
    CHECK(ca.str() == cb.str());
    write_streamlines_svg(a, cfg, svg);
    const std::string s = svg.str();
    CHECK(count_of(s, "<polyline") == a.completed());
    CHECK(s.starts_with("<?xml"));
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(count_of(s, "<line") >= 3);
    CHECK(count_of(s, "<circle") == 2);
  }
}

TEST_CASE("radial CSV") {
  RunConfig cfg;
  cfg.radial.k_over_kappa = {1.0};
  cfg.radial.samples = 100;
  std::ostringstream out;
  write_radial_csv(run_radial(cfg), cfg, out);
  const auto rows = lines_of(out.str());
  CHECK(rows[0] == "k_over_kappa,r_tilde,re_f,im_f,abs_f,arg_f");
  std::size_t data = 0;
  while (data + 1 < rows.size() && !rows[data + 1].starts_with("#")) ++data;
  CHECK(data == 100);
  CHECK(rows[data + 1] == "# summary");
  CHECK(rows.back().ends_with(",ok"));

  cfg.radial.k_over_kappa = {0.90, 0.95, 0.99};
  const auto sweep = run_radial(cfg);
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].solution->flatness > sweep[1].solution->flatness);
  CHECK(sweep[1].solution->flatness > sweep[2].solution->flatness);
}

TEST_CASE("validation report") {
  RunConfig cfg;
  cfg.validate_points = 200;
  const auto checks = run_validation(cfg);
  std::ostringstream out;
  CHECK(print_validation(checks, out));
  for (const auto &line : lines_of(out.str())) {
    const auto parts = split(line, ' ');
    REQUIRE(parts.size() == 4);
    CHECK((parts[3] == "PASS" || parts[3] == "FAIL"));
  }

  cfg.validate_fd_step = 1.0;
  bool closed_form_failed = false;
  for (const auto &c : run_validation(cfg)) {
    if (c.name == "closed_form_vs_generic") closed_form_failed = !c.pass();
  }
  CHECK(closed_form_failed);
}

TEST_CASE("check bounds") {
  CHECK(CheckResult{"a", 1.0, 1.0}.pass());
  CHECK_FALSE(CheckResult{"a", 1.0, 1.0, CheckResult::Bound::below}.pass());
  CHECK(CheckResult{"a", 0.96, 0.95, CheckResult::Bound::at_least}.pass());
  CHECK_FALSE(CheckResult{"a", std::numeric_limits<double>::quiet_NaN(), 1.0}.pass());
}
