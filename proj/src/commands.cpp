#include "slitflow/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "slitflow/csv.hpp"
#include "slitflow/current.hpp"
#include "slitflow/errors.hpp"
#include "slitflow/fields.hpp"
#include "slitflow/model.hpp"

namespace slitflow {

namespace {

// Dimensionless units: lengths are k*r, so k = 1 throughout the commands.
constexpr double kUnitK = 1.0;

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn &&fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

// Symmetric about the interval midpoint, so a grid with y_min = -y_max holds
// exact mirror pairs.
double grid_coord(double lo, double hi, std::size_t i, std::size_t n) {
  const double step = (hi - lo) / static_cast<double>(n - 1);
  const double centre = 0.5 * static_cast<double>(n - 1);
  return 0.5 * (lo + hi) + (static_cast<double>(i) - centre) * step;
}

std::shared_ptr<const ComplexField> make_field(const RunConfig &cfg) {
  if (cfg.field == FieldKind::single_slit) {
    return std::make_shared<SingleSlitField>(kUnitK, cfg.exclusion_radius);
  }
  return std::make_shared<DoubleSlitField>(kUnitK, cfg.geometry());
}

struct FieldRow {
  bool valid = false;
  Complex psi;
  double n = 0.0;
  Vec2 j;
  std::optional<double> q;
};

FieldRow field_row(const RunConfig &cfg, const ComplexField &field, Vec2 p) {
  FieldRow row;
  if (!field.contains(p)) return row;
  row.valid = true;
  row.psi = field.value(p);
  row.n = std::norm(row.psi);
  row.j = cfg.field == FieldKind::two_slit ? current_two_slit(p, kUnitK, cfg.geometry()).j
                                           : current_generic(field, p, cfg.fd_step);
  try {
    row.q = quantum_potential(field, p, cfg.fd_step, cfg.density_floor, false).q;
  } catch (const DegenerateDensityError &) {
  } catch (const DomainError &) {
  }
  return row;
}

}  // namespace

void write_field_csv(const RunConfig &cfg, std::ostream &out) {
  const auto field = make_field(cfg);
  const auto &g = cfg.grid;
  std::vector<FieldRow> rows(g.nx * g.ny);
  std::vector<Vec2> where(rows.size());
  for (std::size_t i = 0; i < g.nx; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      where[i * g.ny + j] = {grid_coord(g.x_min, g.x_max, i, g.nx),
                             grid_coord(g.y_min, g.y_max, j, g.ny)};
    }
  }
  parallel_for(rows.size(), cfg.jobs, [&](std::size_t i) { rows[i] = field_row(cfg, *field, where[i]); });

  CsvWriter csv(out);
  csv.header({"x", "y", "valid", "re_psi", "im_psi", "n", "jx", "jy", "Q"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    csv.cell(where[i].x).cell(where[i].y).cell(static_cast<long long>(r.valid));
    if (r.valid) {
      csv.cell(r.psi.real()).cell(r.psi.imag()).cell(r.n).cell(r.j.x).cell(r.j.y).cell(r.q);
    } else {
      for (int c = 0; c < 6; ++c) csv.blank();
    }
    csv.end_row();
  }
}

std::size_t StreamlineRun::completed() const {
  return static_cast<std::size_t>(
      std::count_if(family.begin(), family.end(), [](const FamilyMember &m) { return m.line.has_value(); }));
}

std::unique_ptr<CurrentField> make_current_field(const RunConfig &cfg,
                                                 std::shared_ptr<const ComplexField> *field_out) {
  auto field = make_field(cfg);
  std::unique_ptr<CurrentField> current;
  if (cfg.field == FieldKind::two_slit) {
    current = std::make_unique<TwoSlitCurrentField>(kUnitK, cfg.geometry());
  } else {
    current = std::make_unique<FieldCurrent>(*field, cfg.fd_step);
  }
  if (field_out) *field_out = field;
  return current;
}

std::vector<Seed> make_seeds(const RunConfig &cfg, const CurrentField &field) {
  const auto &s = cfg.seeds;
  if (!s.y.empty()) {
    std::vector<Seed> seeds;
    for (double y : s.y) seeds.push_back({s.x0, y, s.direction});
    return seeds;
  }
  if (s.spacing == SeedSpacing::flux) {
    return flux_weighted_seeds(field, s.x0, s.y_min, s.y_max, s.count, s.direction);
  }
  // Evenly spaced seeds that fall inside an exclusion disk are dropped.
  auto seeds = uniform_seeds(s.x0, s.y_min, s.y_max, s.count, s.direction);
  std::erase_if(seeds, [&](const Seed &q) { return !field.contains({q.x0, q.y0}); });
  return seeds;
}

StreamlineRun run_streamlines(const RunConfig &cfg) {
  StreamlineRun run;
  std::shared_ptr<const ComplexField> field;
  auto current = make_current_field(cfg, &field);
  const auto seeds = make_seeds(cfg, *current);
  run.family = trace_family(seeds, *current, cfg.integrator, cfg.jobs);
  run.field = field;
  run.current = std::move(current);
  return run;
}

void write_streamlines_csv(const StreamlineRun &run, std::ostream &out) {
  CsvWriter csv(out);
  csv.header({"streamline_id", "point_index", "s", "x", "y", "jx", "jy", "termination"});
  long long id = 0;
  for (const auto &m : run.family) {
    if (!m.line) continue;
    const char *term = to_string(m.line->termination);
    for (std::size_t i = 0; i < m.line->points.size(); ++i) {
      const auto &p = m.line->points[i];
      csv.cell(id).cell(static_cast<long long>(i)).cell(p.s).cell(p.x).cell(p.y).cell(p.jx)
          .cell(p.jy).cell(term);
      csv.end_row();
    }
    ++id;
  }
  for (std::size_t i = 0; i < run.family.size(); ++i) {
    const auto &m = run.family[i];
    if (m.line) continue;
    out << "# failed seed " << i << " x0=" << format_number(m.seed.x0)
        << " y0=" << format_number(m.seed.y0) << ": " << m.error << '\n';
  }
}

std::vector<RadialRunEntry> run_radial(const RunConfig &cfg) {
  const auto &r = cfg.radial;
  std::vector<RadialRunEntry> entries(r.k_over_kappa.size());
  RadialConfig rc;
  rc.rel_tol = r.rel_tol;
  rc.abs_tol = r.abs_tol;
  rc.samples = r.samples;
  parallel_for(entries.size(), cfg.jobs, [&](std::size_t i) {
    entries[i].k_over_kappa = r.k_over_kappa[i];
    try {
      entries[i].solution = solve_radial(r.r_end, {r.k_over_kappa[i], r.nonlinear},
                                         RadialState{r.r_start, {1.0, 0.0}, {0.0, 0.0}}, rc);
    } catch (const std::exception &e) {
      entries[i].error = e.what();
    }
  });
  return entries;
}

void write_radial_csv(const std::vector<RadialRunEntry> &entries, const RunConfig &cfg,
                      std::ostream &out) {
  CsvWriter csv(out);
  csv.header({"k_over_kappa", "r_tilde", "re_f", "im_f", "abs_f", "arg_f"});
  for (const auto &e : entries) {
    if (!e.solution) continue;
    for (const auto &s : e.solution->samples) {
      csv.cell(e.k_over_kappa).cell(s.r_tilde).cell(s.f.real()).cell(s.f.imag())
          .cell(std::abs(s.f)).cell(std::arg(s.f));
      csv.end_row();
    }
  }
  out << "# summary\n# k_over_kappa,nonlinear,flatness,status\n";
  for (const auto &e : entries) {
    out << "# " << format_number(e.k_over_kappa) << ',' << format_number(cfg.radial.nonlinear)
        << ',';
    if (e.solution) {
      out << format_number(e.solution->flatness) << ",ok\n";
    } else {
      out << ",failed: " << e.error << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Validation suite

bool CheckResult::pass() const {
  switch (bound) {
    case Bound::at_most: return measured <= tolerance;
    case Bound::at_least: return measured >= tolerance;
    case Bound::below: return measured < tolerance;
  }
  return false;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  const SlitGeometry geom;

  // Uniform in the box x in (0, r_max], |y| <= r_max, keeping points with
  // both slit distances in [r_lo, r_hi].
  Vec2 two_slit_point(double r_lo, double r_hi) {
    std::uniform_real_distribution<double> xd(0.0, r_hi);
    std::uniform_real_distribution<double> yd(-r_hi, r_hi);
    while (true) {
      const Vec2 p{xd(rng), yd(rng)};
      if (p.x <= 0.0) continue;
      const auto [r1, r2] = slit_radii(p.x, p.y, geom);
      if (r1 >= r_lo && r1 <= r_hi && r2 >= r_lo && r2 <= r_hi) return p;
    }
  }
};

double rel_diff(Vec2 a, Vec2 b) { return norm(a - b) / std::max(norm(b), 1e-300); }

void model_checks(const RunConfig &cfg, Sampler &smp, std::vector<CheckResult> &out) {
  double modulus = 0.0;
  double swap = 0.0;
  double round_trip = 0.0;
  double range_violations = 0.0;
  std::uniform_real_distribution<double> rd(1.0, 1e4);
  std::uniform_real_distribution<double> kappa_d(0.1, 10.0);
  std::uniform_real_distribution<double> frac_d(0.0, 0.999);
  for (std::size_t i = 0; i < cfg.validate_points; ++i) {
    const double r = rd(smp.rng);
    for (Branch b : {Branch::outgoing, Branch::ingoing}) {
      modulus = std::max(modulus, std::abs(std::abs(psi_single_slit(r, kUnitK, b)) * std::sqrt(r) - 1.0));
    }
    const Vec2 p = smp.two_slit_point(5.0, 200.0);
    swap = std::max(swap, std::abs(psi_double_slit(p.x, -p.y, kUnitK, smp.geom) -
                                   psi_double_slit(p.x, p.y, kUnitK, smp.geom)));
    const double kappa = kappa_d(smp.rng);
    const double frac = frac_d(smp.rng);
    const double back = nonlinear_fraction(kappa, wavenumber_from_medium(kappa, frac, 1.0));
    round_trip = std::max(round_trip, std::abs(back - frac));
    if (!(back >= 0.0 && back < 1.0)) range_violations += 1.0;
  }
  out.push_back({"modulus_law", modulus, 1e-13});
  out.push_back({"psi_swap_symmetry", swap, 0.0});
  out.push_back({"dispersion_round_trip", round_trip, 1e-12});
  out.push_back({"nonlinear_fraction_range_violations", range_violations, 0.0});
}

void current_checks(const RunConfig &cfg, Sampler &smp, std::vector<CheckResult> &out) {
  const SlitGeometry geom = smp.geom;
  const DoubleSlitField field(kUnitK, geom);
  const ValueOnlyField value_only(field);
  const double wavelength = 2.0 * std::numbers::pi / kUnitK;
  const double fd = cfg.validate_fd_step.value_or(1e-5 * wavelength);

  double closed_vs_generic = 0.0;
  double mirror_j = 0.0;
  double mirror_nq = 0.0;
  double grad_r = 0.0;
  double vel_consistency = 0.0;
  for (std::size_t i = 0; i < cfg.validate_points; ++i) {
    const Vec2 p = smp.two_slit_point(5.0, 200.0);
    const auto cf = current_two_slit(p, kUnitK, geom);
    try {
      closed_vs_generic = std::max(closed_vs_generic, rel_diff(current_generic(value_only, p, fd), cf.j));
    } catch (const DomainError &) {
      // The stencil itself is unusable at this point.
      closed_vs_generic = std::numeric_limits<double>::infinity();
    }

    const Vec2 m{p.x, -p.y};
    const auto cm = current_two_slit(m, kUnitK, geom);
    mirror_j = std::max({mirror_j, std::abs(cm.j.x - cf.j.x) / norm(cf.j),
                         std::abs(cm.j.y + cf.j.y) / norm(cf.j)});
    const double n_p = std::norm(field.value(p));
    const double n_m = std::norm(field.value(m));
    const double q_p = quantum_potential(field, p, cfg.fd_step, 0.0, false).q;
    const double q_m = quantum_potential(field, m, cfg.fd_step, 0.0, false).q;
    mirror_nq = std::max({mirror_nq, std::abs(n_m - n_p) / n_p,
                          std::abs(q_m - q_p) / std::max(std::abs(q_p), 1e-300)});

    grad_r = std::max({grad_r, std::abs(norm(cf.parts.grad_r1) - 1.0),
                       std::abs(norm(cf.parts.grad_r2) - 1.0)});

    try {
      const Vec2 v = velocity(field, p, cfg.fd_step, cfg.density_floor);
      const Vec2 jg = current_generic(field, p, cfg.fd_step);
      vel_consistency = std::max(vel_consistency, rel_diff(v, jg / (2.0 * n_p)));
    } catch (const DegenerateDensityError &) {
    }
  }
  out.push_back({"closed_form_vs_generic", closed_vs_generic, 1e-6});
  out.push_back({"current_mirror_symmetry", mirror_j, 1e-12});
  out.push_back({"density_q_mirror_symmetry", mirror_nq, 1e-12});
  out.push_back({"grad_r_unit_length", grad_r, 1e-12});
  out.push_back({"velocity_current_consistency", vel_consistency, 1e-12});

  // Far-field divergence of the ansatz current.
  double div_ratio = 0.0;
  for (std::size_t i = 0; i < cfg.validate_points; ++i) {
    const Vec2 p = smp.two_slit_point(50.0, 500.0);
    const double div = divergence(field, p, cfg.fd_step);
    div_ratio = std::max(div_ratio, std::abs(div) / (kUnitK * norm(current_two_slit(p, kUnitK, geom).j)));
  }
  out.push_back({"divergence_bound", div_ratio, 1e-3});

  const PlaneWaveField plane(kUnitK, 2.5);
  const SingleSlitField single(kUnitK, geom.exclusion_radius);
  double plane_q = 0.0;
  double speed = 0.0;
  std::uniform_real_distribution<double> coord(-200.0, 200.0);
  for (std::size_t i = 0; i < cfg.validate_points; ++i) {
    const Vec2 p{coord(smp.rng), coord(smp.rng)};
    plane_q = std::max(plane_q, std::abs(quantum_potential(plane, p, cfg.fd_step).q));
    if (single.contains(p)) {
      speed = std::max(speed, std::abs(norm(velocity(single, p, cfg.fd_step)) - kUnitK));
    }
  }
  out.push_back({"constant_modulus_q", plane_q, 1e-12});
  out.push_back({"single_slit_speed", speed, 1e-10});
}

}  // namespace

double force_law_fraction(const std::vector<FamilyMember> &family, const ComplexField &field,
                          const SlitGeometry &geom, double r_min, double node_fraction,
                          double threshold, std::size_t *sampled) {
  std::size_t total = 0;
  std::size_t good = 0;
  for (const auto &m : family) {
    if (!m.line) continue;
    for (const auto &pt : m.line->points) {
      const auto [r1, r2] = slit_radii(pt.x, pt.y, geom);
      if (r1 < r_min || r2 < r_min) continue;
      const double envelope = 0.5 * std::pow(1.0 / std::sqrt(r1) + 1.0 / std::sqrt(r2), 2);
      const Vec2 p{pt.x, pt.y};
      if (std::norm(field.value(p)) < node_fraction * envelope) continue;
      ++total;
      if (quantum_force_residual(field, p, 1e-3).residual <= threshold) ++good;
    }
  }
  if (sampled) *sampled = total;
  return total ? static_cast<double>(good) / static_cast<double>(total) : 0.0;
}

namespace {

double max_point_drift(const std::vector<FamilyMember> &a, const std::vector<FamilyMember> &b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (!a[i].line || !b[i].line) continue;
    const auto &pa = a[i].line->points;
    const auto &pb = b[i].line->points;
    const std::size_t n = std::min(pa.size(), pb.size());
    for (std::size_t q = 0; q < n; ++q) {
      worst = std::max(worst, std::hypot(pa[q].x - pb[q].x, pa[q].y - pb[q].y));
    }
  }
  return worst;
}

void trace_checks(const RunConfig &cfg, std::vector<CheckResult> &out) {
  const SlitGeometry geom = cfg.geometry();
  const TwoSlitCurrentField current(kUnitK, geom);
  const DoubleSlitField field(kUnitK, geom);
  const auto seeds = flux_weighted_seeds(current, cfg.seeds.x0, cfg.seeds.y_min, cfg.seeds.y_max,
                                         cfg.seeds.count);
  const auto family = trace_family(seeds, current, cfg.integrator, cfg.jobs);

  double tangent = 0.0;
  double outside = 0.0;
  std::vector<Streamline> lines;
  for (const auto &m : family) {
    if (!m.line) continue;
    tangent = std::max(tangent, m.line->max_tangent_deviation);
    for (const auto &p : m.line->points) {
      if (!in_two_slit_domain(p.x, p.y, kUnitK, geom)) outside += 1.0;
    }
    lines.push_back(*m.line);
  }
  out.push_back({"trace_failed_seeds", static_cast<double>(family.size() - lines.size()), 0.0});
  out.push_back({"tangent_parallelism", tangent, 10.0 * cfg.integrator.rel_tol, CheckResult::Bound::below});
  out.push_back({"points_outside_domain", outside, 0.0});

  std::vector<double> stations;
  for (double x = 5.0; x <= cfg.integrator.boundary_radius; x += 5.0) stations.push_back(x);
  const auto order = check_ordering(lines, stations);
  out.push_back({"non_crossing_violations", static_cast<double>(order.violations), 0.0});

  IntegratorConfig half = cfg.integrator;
  half.rel_tol /= 2;
  half.abs_tol /= 2;
  const auto refined = trace_family(seeds, current, half, cfg.jobs);
  out.push_back({"tolerance_halving_drift", max_point_drift(family, refined), 1e-6});

  std::vector<Seed> mirrored;
  for (double y : {1.0, 3.0, 5.5, 8.0, 12.5, 20.0}) {
    mirrored.push_back({cfg.seeds.x0, y});
    mirrored.push_back({cfg.seeds.x0, -y});
  }
  const auto pairs = trace_family(mirrored, current, cfg.integrator, cfg.jobs);
  double mirror = 0.0;
  for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
    if (!pairs[i].line || !pairs[i + 1].line) {
      mirror = std::numeric_limits<double>::infinity();
      continue;
    }
    const auto &a = pairs[i].line->points;
    const auto &b = pairs[i + 1].line->points;
    if (a.size() != b.size()) mirror = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < std::min(a.size(), b.size()); ++q) {
      mirror = std::max({mirror, std::abs(a[q].x - b[q].x), std::abs(a[q].y + b[q].y)});
    }
  }
  out.push_back({"family_mirror_symmetry", mirror, 1e-9});

  const auto axis = integrate_streamline({cfg.seeds.x0, 0.0}, current, cfg.integrator);
  double axis_y = 0.0;
  for (const auto &p : axis.points) axis_y = std::max(axis_y, std::abs(p.y));
  out.push_back({"on_axis_confinement", axis_y, 1e-6, CheckResult::Bound::below});

  std::size_t sampled = 0;
  const double frac = force_law_fraction(family, field, geom, 50.0, 0.01, 0.02, &sampled);
  out.push_back({"quantum_force_fraction", frac, 0.95, CheckResult::Bound::at_least});
}

void radial_checks(const RunConfig &cfg, std::vector<CheckResult> &out) {
  double bracket = 0.0;
  for (double r : {0.5, 1.0, 10.0, 123.0, 1e4}) {
    bracket = std::max(bracket, std::abs(radial_bracket(r, 0.7, {1.0, 0.0}) - 0.25 / (r * r)));
  }
  out.push_back({"radial_bracket_limit", bracket, 0.0});

  double linear = 0.0;
  for (double q : {0.9, 1.0}) {
    const RadialState s{15.0, {0.3, -0.8}, {0.05, 0.2}};
    const RadialState d{15.0, 2.0 * s.f, 2.0 * s.f_prime};
    const Complex a = radial_rhs(s, {q, 0.0});
    linear = std::max(linear, std::abs(radial_rhs(d, {q, 0.0}) - 2.0 * a) / std::abs(a));
  }
  out.push_back({"radial_linearity", linear, 1e-14});

  RadialConfig rc;
  rc.rel_tol = cfg.radial.rel_tol;
  rc.abs_tol = cfg.radial.abs_tol;
  rc.samples = cfg.radial.samples;
  const RadialState init{10.0, {1.0, 0.0}, {0.0, 0.0}};
  const auto base = solve_radial(200.0, {1.0, 0.0}, init, rc);
  out.push_back({"radial_flatness_linear_limit", base.flatness, 0.01});
  RadialConfig fine = rc;
  fine.rel_tol /= 2;
  fine.abs_tol /= 2;
  const auto halved = solve_radial(200.0, {1.0, 0.0}, init, fine);
  out.push_back({"radial_tolerance_halving", std::abs(halved.flatness - base.flatness), 1e-4});

  auto qs = cfg.radial.k_over_kappa;
  std::sort(qs.begin(), qs.end());
  double worst_step = -std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double q : qs) {
    const auto sol = solve_radial(cfg.radial.r_end, {q, cfg.radial.nonlinear},
                                  RadialState{cfg.radial.r_start, {1.0, 0.0}, {0.0, 0.0}}, rc);
    if (!std::isnan(prev)) worst_step = std::max(worst_step, sol.flatness - prev);
    prev = sol.flatness;
  }
  if (qs.size() > 1) {
    out.push_back({"radial_sweep_flatness_increase", worst_step, 0.0, CheckResult::Bound::below});
  }
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig &cfg) {
  std::vector<CheckResult> out;
  Sampler smp{std::mt19937_64(cfg.validate_seed), cfg.geometry()};
  model_checks(cfg, smp, out);
  current_checks(cfg, smp, out);
  trace_checks(cfg, out);
  radial_checks(cfg, out);
  return out;
}

bool print_validation(const std::vector<CheckResult> &checks, std::ostream &out) {
  bool all = true;
  for (const auto &c : checks) {
    const bool ok = c.pass();
    all = all && ok;
    out << c.name << ' ' << format_number(c.measured) << ' ' << format_number(c.tolerance) << ' '
        << (ok ? "PASS" : "FAIL") << '\n';
  }
  return all;
}

}  // namespace slitflow
