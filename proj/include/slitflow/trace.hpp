#pragma once

// Streamlines of a planar current field, integrated in arc length
// (dr/ds = j/|j|) so that turning points of j_x need no special care.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slitflow/fields.hpp"
#include "slitflow/model.hpp"
#include "slitflow/vec2.hpp"

namespace slitflow {

enum class Direction { downstream, upstream };

struct Seed {
  double x0 = 2.0;
  double y0 = 0.0;
  Direction direction = Direction::downstream;
};

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-8;
  double max_arc_length = 5000.0;  ///< k*r units
  double min_current = 1e-9;       ///< stagnation threshold on |j|
  std::size_t max_steps = 200000;
  double boundary_radius = 500.0;  ///< stop on reaching this k*r from the origin
  double record_interval = 0.1;    ///< arc-length spacing of recorded points
  double max_step = 0.1;            ///< at most one record interval per step
};

enum class Termination {
  reached_boundary,
  stagnation,
  entered_exclusion_disk,
  hit_barrier,
  step_limit,
};

const char *to_string(Termination t);

struct StreamPoint {
  double x;
  double y;
  double jx;
  double jy;
  double s;  ///< arc length from the seed
};

struct Streamline {
  std::vector<StreamPoint> points;
  Seed seed;
  Termination termination = Termination::step_limit;
  /// Largest angle between the integrator's tangent and j over recorded points.
  double max_tangent_deviation = 0.0;
};

/// Current field consumed by the tracer.
class CurrentField {
 public:
  virtual ~CurrentField() = default;
  /// Throws DomainError outside the domain.
  virtual Vec2 current(Vec2 p) const = 0;
  virtual bool contains(Vec2 p) const = 0;
  /// Barrier side of p; a streamline never leaves the side it started on.
  virtual int side(Vec2 p) const { return (p.x > 0.0) - (p.x < 0.0); }
  /// Why a path from a valid point `inside` to the invalid point `outside` stops.
  virtual Termination exit_reason(Vec2 inside, Vec2 outside) const;
};

/// Closed-form two-slit current.
class TwoSlitCurrentField final : public CurrentField {
 public:
  TwoSlitCurrentField(double k, SlitGeometry geom) : k_(k), geom_(geom) {}
  Vec2 current(Vec2 p) const override;
  bool contains(Vec2 p) const override;

  double k() const { return k_; }
  const SlitGeometry &geometry() const { return geom_; }

 private:
  double k_;
  SlitGeometry geom_;
};

/// Current 2 Im(psi* grad psi) of an arbitrary complex field.
class FieldCurrent final : public CurrentField {
 public:
  FieldCurrent(const ComplexField &field, double fd_step) : field_(&field), fd_step_(fd_step) {}
  Vec2 current(Vec2 p) const override;
  bool contains(Vec2 p) const override { return field_->contains(p); }
  int side(Vec2 p) const override { return field_->side(p); }

 private:
  const ComplexField *field_;
  double fd_step_;
};

/// Throws InvalidSeedError when the seed is on the barrier or outside the field's domain.
void validate_seed(const Seed &seed, const CurrentField &field);

Streamline integrate_streamline(const Seed &seed, const CurrentField &field,
                                const IntegratorConfig &cfg);

struct FamilyMember {
  Seed seed;
  std::optional<Streamline> line;
  std::string error;  ///< set when the seed could not be traced
};

/// One entry per seed, in seed order. Per-seed failures are recorded, not thrown.
/// `jobs` > 1 traces seeds on worker threads; the output does not depend on it.
std::vector<FamilyMember> trace_family(std::span<const Seed> seeds, const CurrentField &field,
                                       const IntegratorConfig &cfg, unsigned jobs = 1);

/// Seeds on the line x = x0 spaced by equal increments of |j_x| flux over
/// [y_min, y_max], at the midpoints of `count` equal-flux bins, so that
/// neighbouring streamlines carry equal current.
std::vector<Seed> flux_weighted_seeds(const CurrentField &field, double x0, double y_min,
                                      double y_max, std::size_t count,
                                      Direction direction = Direction::downstream);

/// `count` seeds evenly spaced in y on the line x = x0 (endpoints included).
std::vector<Seed> uniform_seeds(double x0, double y_min, double y_max, std::size_t count,
                                Direction direction = Direction::downstream);

/// atan2(y, x) of the final point; TooShortError unless it lies at radius >= r_min.
double asymptotic_angle(const Streamline &line, double r_min);

/// Sign changes of the signed curvature after boxcar smoothing over one
/// wavelength 2*pi/k of arc length. Curvatures below `curvature_floor` count
/// as zero. TooShortError for fewer than 3 points.
int wiggle_count(const Streamline &line, double k = 1.0, double curvature_floor = 1e-9);

/// Local maxima of the density of far-field angles, estimated from the
/// reciprocal gaps between consecutive sorted angles. For flux-weighted
/// families the density is proportional to the far-field current.
std::vector<double> angle_density_peaks(std::vector<double> angles);

/// y of the first crossing of x = station, or nullopt if never reached.
std::optional<double> first_crossing_y(const Streamline &line, double station);

struct OrderingReport {
  std::size_t comparisons = 0;
  std::size_t violations = 0;
  double worst_gap = 0.0;  ///< most negative y_{i+1} - y_i seen (0 when ordered)
};

/// Checks that the y-order of `lines` (sorted by seed y0) is preserved at each
/// x-station reached by two or more of them.
OrderingReport check_ordering(std::span<const Streamline> lines, std::span<const double> stations);

}  // namespace slitflow
