#include "slitflow/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "slitflow/current.hpp"
#include "slitflow/errors.hpp"
#include "slitflow/ode.hpp"

namespace slitflow {

namespace {

struct Stagnation {
  Vec2 where;
};

double radius(const ode::State<2> &y) { return std::hypot(y[0], y[1]); }

}  // namespace

const char *to_string(Termination t) {
  switch (t) {
    case Termination::reached_boundary: return "reached_boundary";
    case Termination::stagnation: return "stagnation";
    case Termination::entered_exclusion_disk: return "entered_exclusion_disk";
    case Termination::hit_barrier: return "hit_barrier";
    case Termination::step_limit: return "step_limit";
  }
  return "unknown";
}

Termination CurrentField::exit_reason(Vec2 inside, Vec2 outside) const {
  if (outside.x == 0.0 || side(outside) != side(inside)) return Termination::hit_barrier;
  return Termination::entered_exclusion_disk;
}

Vec2 TwoSlitCurrentField::current(Vec2 p) const { return current_two_slit(p, k_, geom_).j; }

bool TwoSlitCurrentField::contains(Vec2 p) const { return in_two_slit_domain(p.x, p.y, k_, geom_); }

Vec2 FieldCurrent::current(Vec2 p) const { return current_generic(*field_, p, fd_step_); }

void validate_seed(const Seed &seed, const CurrentField &field) {
  const Vec2 p{seed.x0, seed.y0};
  if (seed.x0 == 0.0) throw InvalidSeedError("seed lies on the barrier line x = 0");
  if (!field.contains(p)) throw InvalidSeedError("seed outside the valid domain");
}

Streamline integrate_streamline(const Seed &seed, const CurrentField &field,
                                const IntegratorConfig &cfg) {
  validate_seed(seed, field);

  Streamline line;
  line.seed = seed;
  const double dir = seed.direction == Direction::downstream ? 1.0 : -1.0;
  const int start_side = field.side({seed.x0, seed.y0});

  Vec2 last_valid{seed.x0, seed.y0};
  Vec2 last_probe = last_valid;
  auto in_domain = [&](Vec2 p) { return field.contains(p) && field.side(p) == start_side; };

  auto rhs = [&](double, const ode::State<2> &y) -> ode::State<2> {
    const Vec2 p{y[0], y[1]};
    if (!in_domain(p)) {
      last_probe = p;
      throw DomainError("streamline left the valid domain");
    }
    last_valid = p;
    const Vec2 j = field.current(p);
    const double mag = norm(j);
    if (!(mag >= cfg.min_current)) throw Stagnation{p};
    return {dir * j.x / mag, dir * j.y / mag};
  };

  auto record = [&](Vec2 p, double s) {
    const Vec2 j = field.current(p);
    line.points.push_back({p.x, p.y, j.x, j.y, s});
  };

  record({seed.x0, seed.y0}, 0.0);
  if (std::hypot(seed.x0, seed.y0) >= cfg.boundary_radius) {
    line.termination = Termination::reached_boundary;
    return line;
  }

  // Steps land on every multiple of record_interval, so recorded points are
  // integrator nodes rather than interpolated values.
  std::size_t next_record = 1;
  std::optional<Termination> stop_reason;

  auto observer = [&](const ode::DenseSegment<2> &seg) {
    if (radius(seg.y1) >= cfg.boundary_radius) {
      // Locate |r(s)| = R on the interpolant by bisection.
      double lo = seg.t0;
      double hi = seg.t1();
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (radius(seg.value(mid)) >= cfg.boundary_radius ? hi : lo) = mid;
      }
      const auto y = seg.value(hi);
      if (hi > line.points.back().s) record({y[0], y[1]}, hi);
      stop_reason = Termination::reached_boundary;
      return false;
    }
    if (seg.t1() == static_cast<double>(next_record) * cfg.record_interval) {
      record({seg.y1[0], seg.y1[1]}, seg.t1());
      const Vec2 j{line.points.back().jx, line.points.back().jy};
      line.max_tangent_deviation =
          std::max(line.max_tangent_deviation, angle_between({seg.f1[0], seg.f1[1]}, dir * j));
      ++next_record;
    }
    return true;
  };

  ode::StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.h_max = cfg.max_step;
  ctl.h_init = std::min(cfg.record_interval, cfg.max_step);
  ctl.h_min = 1e-10;
  ctl.max_steps = cfg.max_steps;
  ctl.stop_interval = cfg.record_interval;

  const ode::State<2> y0{seed.x0, seed.y0};
  ode::Result<2> res;
  try {
    res = ode::integrate<2>(rhs, 0.0, y0, cfg.max_arc_length, ctl, observer);
  } catch (const Stagnation &) {
    line.termination = Termination::stagnation;
    return line;
  }

  if (stop_reason) {
    line.termination = *stop_reason;
    return line;
  }

  // Append the last accepted state if it lies beyond the last recorded point.
  auto append_final = [&] {
    const Vec2 p{res.y[0], res.y[1]};
    if (res.t > line.points.back().s && in_domain(p)) record(p, res.t);
  };

  switch (res.outcome) {
    case ode::Outcome::domain_limit:
      append_final();
      line.termination = field.exit_reason(last_valid, last_probe);
      break;
    case ode::Outcome::step_failure:
      throw StepFailureError("streamline integration could not meet tolerances");
    case ode::Outcome::finished:
    case ode::Outcome::step_limit:
    case ode::Outcome::stopped:
      append_final();
      line.termination = Termination::step_limit;
      break;
  }
  return line;
}

std::vector<FamilyMember> trace_family(std::span<const Seed> seeds, const CurrentField &field,
                                       const IntegratorConfig &cfg, unsigned jobs) {
  std::vector<FamilyMember> out(seeds.size());
  auto work = [&](std::size_t i) {
    out[i].seed = seeds[i];
    try {
      out[i].line = integrate_streamline(seeds[i], field, cfg);
    } catch (const std::exception &e) {
      out[i].error = e.what();
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) work(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) work(i);
      });
    }
  }
  return out;
}

std::vector<Seed> uniform_seeds(double x0, double y_min, double y_max, std::size_t count,
                                Direction direction) {
  std::vector<Seed> seeds;
  seeds.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
    seeds.push_back({x0, y_min + t * (y_max - y_min), direction});
  }
  return seeds;
}

std::vector<Seed> flux_weighted_seeds(const CurrentField &field, double x0, double y_min,
                                      double y_max, std::size_t count, Direction direction) {
  if (count == 0) return {};
  constexpr std::size_t kPanels = 200000;
  const double dy = (y_max - y_min) / kPanels;
  auto flux_density = [&](double y) {
    const Vec2 p{x0, y};
    return field.contains(p) ? std::abs(field.current(p).x) : 0.0;
  };

  std::vector<double> cumulative(kPanels + 1, 0.0);
  double prev = flux_density(y_min);
  for (std::size_t i = 1; i <= kPanels; ++i) {
    const double cur = flux_density(y_min + static_cast<double>(i) * dy);
    cumulative[i] = cumulative[i - 1] + 0.5 * (prev + cur) * dy;
    prev = cur;
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) return uniform_seeds(x0, y_min, y_max, count, direction);

  std::vector<Seed> seeds;
  seeds.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    const double target = (static_cast<double>(m) + 0.5) / static_cast<double>(count) * total;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
    const std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - cumulative.begin()));
    const double f0 = cumulative[i - 1];
    const double f1 = cumulative[i];
    const double frac = f1 > f0 ? (target - f0) / (f1 - f0) : 0.5;
    seeds.push_back({x0, y_min + (static_cast<double>(i - 1) + frac) * dy, direction});
  }
  return seeds;
}

double asymptotic_angle(const Streamline &line, double r_min) {
  if (line.points.empty()) throw TooShortError("empty streamline");
  const StreamPoint &last = line.points.back();
  if (std::hypot(last.x, last.y) < r_min) {
    throw TooShortError("streamline ends before reaching the requested radius");
  }
  return std::atan2(last.y, last.x);
}

int wiggle_count(const Streamline &line, double k, double curvature_floor) {
  const auto &pts = line.points;
  if (pts.size() < 3) throw TooShortError("wiggle count needs at least 3 points");

  // Cumulative turning angle at each interior vertex, indexed by arc length.
  const std::size_t n = pts.size();
  std::vector<double> heading(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    heading[i] = std::atan2(pts[i + 1].y - pts[i].y, pts[i + 1].x - pts[i].x);
  }
  std::vector<double> s(n);
  std::vector<double> turning(n, 0.0);  // turning accumulated up to vertex i
  for (std::size_t i = 0; i < n; ++i) s[i] = pts[i].s;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = std::remainder(heading[i] - heading[i - 1], 2.0 * std::numbers::pi);
    turning[i] = turning[i - 1] + d;
  }
  turning[n - 1] = turning[n - 2];

  auto turning_at = [&](double sq) {
    if (sq <= s.front()) return turning.front();
    if (sq >= s.back()) return turning.back();
    const auto it = std::upper_bound(s.begin(), s.end(), sq);
    const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
    // Turning is concentrated at vertices: step function in s.
    return turning[i];
  };

  const double window = 2.0 * std::numbers::pi / k;
  int changes = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lo = std::max(s.front(), s[i] - 0.5 * window);
    const double hi = std::min(s.back(), s[i] + 0.5 * window);
    if (!(hi > lo)) continue;
    const double kappa = (turning_at(hi) - turning_at(lo)) / (hi - lo);
    if (std::abs(kappa) < curvature_floor) continue;
    const int sign = kappa > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

std::vector<double> angle_density_peaks(std::vector<double> angles) {
  std::sort(angles.begin(), angles.end());
  if (angles.size() < 4) return {};
  const std::size_t m = angles.size() - 1;
  std::vector<double> density(m);
  std::vector<double> centre(m);
  for (std::size_t i = 0; i < m; ++i) {
    density[i] = 1.0 / std::max(angles[i + 1] - angles[i], 1e-12);
    centre[i] = 0.5 * (angles[i + 1] + angles[i]);
  }

  // Plateau-aware local maxima: a run of equal densities higher than both
  // neighbours yields one peak at the run's centre.
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); };
  std::vector<double> peaks;
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && same(density[j + 1], density[i])) ++j;
    const bool left = i == 0 || density[i - 1] < density[i];
    const bool right = j + 1 == m || density[j + 1] < density[i];
    if (left && right && i != 0 && j + 1 != m) peaks.push_back(0.5 * (centre[i] + centre[j]));
    i = j + 1;
  }
  return peaks;
}

std::optional<double> first_crossing_y(const Streamline &line, double station) {
  const auto &pts = line.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i].x - station;
    const double b = pts[i + 1].x - station;
    if (a == 0.0) return pts[i].y;
    if ((a < 0.0) != (b < 0.0) || b == 0.0) {
      const double t = a / (a - b);
      return pts[i].y + t * (pts[i + 1].y - pts[i].y);
    }
  }
  return std::nullopt;
}

OrderingReport check_ordering(std::span<const Streamline> lines,
                              std::span<const double> stations) {
  std::vector<const Streamline *> sorted;
  for (const auto &l : lines) sorted.push_back(&l);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Streamline *a, const Streamline *b) { return a->seed.y0 < b->seed.y0; });

  OrderingReport report;
  for (const double x : stations) {
    std::optional<double> prev;
    for (const Streamline *l : sorted) {
      const auto y = first_crossing_y(*l, x);
      if (!y) continue;
      if (prev) {
        ++report.comparisons;
        const double gap = *y - *prev;
        if (!(gap > 0.0)) {
          ++report.violations;
          report.worst_gap = std::min(report.worst_gap, gap);
        }
      }
      prev = y;
    }
  }
  return report;
}

}  // namespace slitflow
