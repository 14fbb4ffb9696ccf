// Acceptance run: one PASS/FAIL line per criterion, sub-results indented
// below it. `--only N` runs a single criterion. Exit status is non-zero when
// any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "slitflow/commands.hpp"
#include "slitflow/current.hpp"
#include "slitflow/errors.hpp"
#include "slitflow/fields.hpp"
#include "slitflow/radial.hpp"
#include "slitflow/trace.hpp"

using namespace slitflow;

namespace {

constexpr double kK = 1.0;
constexpr std::uint64_t kSeed = 20240601;
const SlitGeometry kGeom{20.0};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void part(const std::string &name, bool ok, const char *fmt, double measured, double limit) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, measured, limit);
    notes.push_back(name + ": " + buf + (ok ? "  ok" : "  MISS"));
    pass = pass && ok;
  }
};

Vec2 sample_point(std::mt19937_64 &rng, double r_lo, double r_hi) {
  std::uniform_real_distribution<double> xd(0.0, r_hi);
  std::uniform_real_distribution<double> yd(-r_hi, r_hi);
  while (true) {
    const Vec2 p{xd(rng), yd(rng)};
    if (p.x <= 0.0) continue;
    const auto [r1, r2] = slit_radii(p.x, p.y, kGeom);
    if (kK * r1 >= r_lo && kK * r1 <= r_hi && kK * r2 >= r_lo && kK * r2 <= r_hi) return p;
  }
}

std::vector<FamilyMember> default_family(const IntegratorConfig &cfg = {}) {
  const RunConfig run;  // default reproduction protocol
  const TwoSlitCurrentField field(kK, kGeom);
  return trace_family(make_seeds(run, field), field, cfg, 4);
}

Outcome closed_form_equivalence() {
  Outcome o;
  const DoubleSlitField psi(kK, kGeom);
  const ValueOnlyField fd_only(psi);
  const double h = 1e-5 * 2.0 * std::numbers::pi / kK;
  std::mt19937_64 rng(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p = sample_point(rng, 5.0, 200.0);
    const Vec2 closed = current_two_slit(p, kK, kGeom).j;
    const Vec2 generic = current_generic(fd_only, p, h);
    worst = std::max(worst, norm(generic - closed) / norm(closed));
  }
  o.part("max relative error over 1000 points", worst <= 1e-6, "%.3e (limit %.0e)", worst, 1e-6);
  return o;
}

Outcome conservation() {
  Outcome o;
  const DoubleSlitField psi(kK, kGeom);
  std::mt19937_64 rng(kSeed + 1);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p = sample_point(rng, 50.0, 500.0);
    const double div = divergence(psi, p, 1e-3);
    worst = std::max(worst, std::abs(div) / (kK * norm(current_two_slit(p, kK, kGeom).j)));
  }
  o.part("max |div j| / (k |j|), k r >= 50", worst <= 1e-3, "%.3e (limit %.0e)", worst, 1e-3);
  return o;
}

Outcome symmetry() {
  Outcome o;
  const DoubleSlitField psi(kK, kGeom);
  std::mt19937_64 rng(kSeed + 2);
  double jx = 0.0, jy = 0.0, n = 0.0, q = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p = sample_point(rng, 5.0, 200.0);
    const Vec2 m{p.x, -p.y};
    const Vec2 a = current_two_slit(p, kK, kGeom).j;
    const Vec2 b = current_two_slit(m, kK, kGeom).j;
    jx = std::max(jx, std::abs(a.x - b.x) / norm(a));
    jy = std::max(jy, std::abs(a.y + b.y) / norm(a));
    const double na = std::norm(psi.value(p));
    n = std::max(n, std::abs(na - std::norm(psi.value(m))) / na);
    const double qa = quantum_potential(psi, p, 1e-3, 0.0, false).q;
    const double qb = quantum_potential(psi, m, 1e-3, 0.0, false).q;
    q = std::max(q, std::abs(qa - qb) / std::abs(qa));
  }
  o.part("j_x symmetry", jx <= 1e-12, "%.3e (limit %.0e)", jx, 1e-12);
  o.part("j_y antisymmetry", jy <= 1e-12, "%.3e (limit %.0e)", jy, 1e-12);
  o.part("n symmetry", n <= 1e-12, "%.3e (limit %.0e)", n, 1e-12);
  o.part("Q symmetry", q <= 1e-12, "%.3e (limit %.0e)", q, 1e-12);

  const TwoSlitCurrentField field(kK, kGeom);
  const auto axis = integrate_streamline({2.0, 0.0}, field, {});
  double y = 0.0;
  for (const auto &pt : axis.points) y = std::max(y, std::abs(pt.y));
  const bool reached = axis.termination == Termination::reached_boundary &&
                       axis.points.back().x >= 500.0 * (1 - 1e-12);
  o.part("on-axis max |y| over k x in [2, 500]", reached && y < 1e-6, "%.3e (limit %.0e)", y, 1e-6);
  return o;
}

Outcome streamline_family() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto family = default_family();
  std::vector<Streamline> lines;
  for (const auto &m : family) {
    if (m.line) lines.push_back(*m.line);
  }
  o.part("(a) streamlines traced", lines.size() == 41, "%.0f of %.0f", static_cast<double>(lines.size()), 41.0);

  std::vector<double> stations;
  for (double x = 3.0; x <= 500.0; x += 1.0) stations.push_back(x);
  const auto order = check_ordering(lines, stations);
  o.part("(a) ordering violations at unit x-stations", order.violations == 0, "%.0f (limit %.0f)",
         static_cast<double>(order.violations), 0.0);

  int wiggly = 0;
  int most = 0;
  for (const auto &l : lines) {
    const int w = wiggle_count(l, kK);
    most = std::max(most, w);
    wiggly += w >= 3;
  }
  o.part("(b) streamlines with >= 3 smoothed curvature sign changes", wiggly >= 10,
         "%.0f (need %.0f)", wiggly, 10.0);
  o.notes.push_back("    largest smoothed sign-change count on any streamline: " + std::to_string(most));

  std::vector<double> angles;
  for (const auto &l : lines) angles.push_back(asymptotic_angle(l, 500.0 * (1 - 1e-9)));
  const auto peaks = angle_density_peaks(angles);
  for (int n = -3; n <= 3; ++n) {
    const double fringe = std::asin(2.0 * std::numbers::pi * n / 20.0);
    double best = 1e9;
    for (double p : peaks) best = std::min(best, std::abs(p - fringe));
    o.part("(c) fringe n = " + std::to_string(n) + " nearest angle-density peak", best <= 0.05,
           "%.4f rad (limit %.2f)", best, 0.05);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.part("runtime", secs <= 60.0, "%.2f s (limit %.0f)", secs, 60.0);
  return o;
}

Outcome single_slit() {
  Outcome o;
  const SingleSlitField psi(kK);
  const FieldCurrent field(psi, 1e-3);
  double angular = 0.0;
  double speed = 0.0;
  for (const Seed seed : {Seed{2.0, 0.0}, Seed{2.0, 1.5}, Seed{1.0, -3.0}, Seed{0.3, 4.0},
                          Seed{5.0, -0.2}}) {
    const auto line = integrate_streamline(seed, field, {});
    const double theta = std::atan2(seed.y0, seed.x0);
    for (const auto &p : line.points) {
      angular = std::max(angular, std::abs(std::atan2(p.y, p.x) - theta));
      speed = std::max(speed, std::abs(norm(velocity(psi, {p.x, p.y}, 1e-3)) - kK));
    }
  }
  o.part("max angular deviation from the seed ray", angular <= 1e-6, "%.3e (limit %.0e)", angular, 1e-6);
  o.part("max | |v| - k |", speed <= 1e-10, "%.3e (limit %.0e)", speed, 1e-10);
  return o;
}

Outcome quantum_force() {
  Outcome o;
  const auto family = default_family();
  const DoubleSlitField psi(kK, kGeom);
  std::size_t sampled = 0;
  const double frac = force_law_fraction(family, psi, kGeom, 50.0, 0.01, 0.02, &sampled);
  o.part("fraction of streamline points with residual <= 0.02", frac >= 0.95 && sampled > 0,
         "%.4f (need %.2f)", frac, 0.95);
  o.notes.push_back("    points sampled: " + std::to_string(sampled));
  return o;
}

Outcome radial() {
  Outcome o;
  const auto base = solve_radial(200.0, {1.0, 0.0}, {10.0, {1.0, 0.0}, {0.0, 0.0}});
  o.part("flatness, beta = 0, k = kappa, [10, 200]", base.flatness <= 0.01, "%.3e (limit %.2f)",
         base.flatness, 0.01);
  constexpr double g = 0.05;
  double prev = std::numeric_limits<double>::infinity();
  for (double q : {0.90, 0.95, 0.99}) {
    const auto sol = solve_radial(200.0, {q, g}, {20.0, {1.0, 0.0}, {0.0, 0.0}});
    o.part("flatness at k/kappa = " + std::to_string(q).substr(0, 4) + ", g = 0.05, [20, 200]",
           sol.flatness < prev, "%.4e (previous %.4e)", sol.flatness, prev);
    prev = sol.flatness;
  }
  return o;
}

// Error of an FD diagnostic against its analytic value, max over points.
double fd_error(const std::vector<Vec2> &pts, const std::function<double(Vec2)> &err) {
  double worst = 0.0;
  for (const Vec2 p : pts) worst = std::max(worst, err(p));
  return worst;
}

Outcome hygiene() {
  Outcome o;
  IntegratorConfig half;
  half.rel_tol /= 2;
  half.abs_tol /= 2;
  const auto a = default_family();
  const auto b = default_family(half);
  double drift = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto &pa = a[i].line->points;
    const auto &pb = b[i].line->points;
    for (std::size_t q = 0; q < std::min(pa.size(), pb.size()); ++q) {
      drift = std::max(drift, std::hypot(pa[q].x - pb[q].x, pa[q].y - pb[q].y));
    }
  }
  o.part("max point drift on halving tolerances", drift < 1e-6, "%.3e (limit %.0e)", drift, 1e-6);

  const DoubleSlitField psi(kK, kGeom);
  const ValueOnlyField fd_only(psi);
  std::mt19937_64 rng(kSeed + 3);
  std::vector<Vec2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(sample_point(rng, 10.0, 200.0));

  auto current_err = [&](double h) {
    return fd_error(pts, [&](Vec2 p) {
      return norm(current_generic(fd_only, p, h) - current_two_slit(p, kK, kGeom).j);
    });
  };
  auto q_err = [&](double h) {
    return fd_error(pts, [&](Vec2 p) {
      const double exact = quantum_potential(psi, p, h, 0.0, false).q;
      return std::abs(quantum_potential(fd_only, p, h, 0.0, false).q - exact);
    });
  };
  const double h = 0.02;
  const double rc = current_err(h) / current_err(h / 2);
  const double rq = q_err(h) / q_err(h / 2);
  o.part("current error ratio on halving fd_step", std::abs(rc - 4.0) <= 0.5, "%.4f (target 4 +- %.1f)", rc, 0.5);
  o.part("Q error ratio on halving fd_step", std::abs(rq - 4.0) <= 0.5, "%.4f (target 4 +- %.1f)", rq, 0.5);
  return o;
}

}  // namespace

int main(int argc, char **argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"closed-form current matches finite differences", closed_form_equivalence},
      {"far-field conservation", conservation},
      {"mirror symmetry and on-axis confinement", symmetry},
      {"kd = 20 streamline family", streamline_family},
      {"single-slit trajectories", single_slit},
      {"quantum-force law along streamlines", quantum_force},
      {"radial envelope flatness", radial},
      {"numerical hygiene", hygiene},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu %s: %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL");
    for (const auto &n : o.notes) std::printf("  %s\n", n.c_str());
    all = all && o.pass;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
