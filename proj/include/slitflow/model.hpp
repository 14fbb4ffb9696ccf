#pragma once

// Geometry, medium parameters and the analytic slit wavefunctions.
//
// Units are dimensionless: hbar = m = q = 1 and the envelope amplitude f0 = 1.
// Lengths passed alongside an explicit wavenumber k are in the same unit as
// 1/k; exclusion radii are always given in k*r units.

#include "slitflow/vec2.hpp"

namespace slitflow {

inline constexpr double kDefaultExclusionRadius = 1.0;

/// Ginzburg-Landau medium in the field-free regime.
struct MediumParams {
  double kappa = 1.0;  ///< maximal wavenumber, kappa^2 = 2ma/hbar^2
  double beta = 0.0;   ///< nonlinearity coefficient b/a
  double n0 = 0.0;     ///< plane-wave reference concentration
  double k = 1.0;      ///< propagating wavenumber, 0 < k <= kappa

  /// Derives k from the plane-wave dispersion relation; throws DomainError
  /// when beta*n0 >= 1 or kappa <= 0.
  static MediumParams from_gl(double kappa, double beta, double n0);
};

struct SlitGeometry {
  double d = 20.0;  ///< slit separation
  double exclusion_radius = kDefaultExclusionRadius;

  double slit1_y() const { return 0.5 * d; }
  double slit2_y() const { return -0.5 * d; }
  static constexpr double barrier_x() { return 0.0; }
};

struct SlitRadii {
  double r1;  ///< distance to slit 1 at y = +d/2
  double r2;  ///< distance to slit 2 at y = -d/2
};

/// Outgoing (x > 0) or ingoing (x < 0) radial branch.
enum class Branch { outgoing, ingoing };

/// k = kappa * sqrt(1 - beta*n0).
double wavenumber_from_medium(double kappa, double beta, double n0);

/// (kappa^2 - k^2) / kappa^2, the fraction beta*n0 carried by the nonlinear term.
double nonlinear_fraction(double kappa, double k);

SlitRadii slit_radii(double x, double y, const SlitGeometry &geom);

/// Branch selected by the side of the barrier; DomainError on x == 0.
Branch branch_for(double x);

/// e^{+ikr}/sqrt(r) (outgoing) or e^{-ikr}/sqrt(r) (ingoing).
/// Throws DomainError when k*r < exclusion_radius.
Complex psi_single_slit(double r, double k, Branch branch,
                        double exclusion_radius = kDefaultExclusionRadius);

/// (psi(r1) + psi(r2)) / sqrt(2), branch chosen by sign(x).
/// Throws DomainError on the barrier line or inside either exclusion disk.
Complex psi_double_slit(double x, double y, double k, const SlitGeometry &geom);

/// Throws DomainError unless (x, y) is off the barrier and outside both disks.
void require_two_slit_domain(double x, double y, double k, const SlitGeometry &geom);

bool in_two_slit_domain(double x, double y, double k, const SlitGeometry &geom);

}  // namespace slitflow
