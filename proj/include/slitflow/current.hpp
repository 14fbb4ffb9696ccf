#pragma once

// Supercurrent, carrier velocity and quantum potential of a complex field.
//
// Conventions (prefactor-free, hbar = m = 1):
//   j = -i [psi* grad psi - (grad psi*) psi] = 2 Im(psi* grad psi)
//   v = grad(arg psi)                        = Im(psi* grad psi) / |psi|^2
//   Q = -(1/2) lap|psi| / |psi|
// so v = j / (2n). Every routine uses the field's analytic jet when it has
// one and central differences with step `fd_step` otherwise.

#include <optional>

#include "slitflow/fields.hpp"
#include "slitflow/model.hpp"
#include "slitflow/vec2.hpp"

namespace slitflow {

inline constexpr double kDefaultDensityFloor = 1e-12;
inline constexpr double kDefaultAccelerationFloor = 1e-15;

/// 10^-3 of 1/k.
inline double default_fd_step(double k) { return 1e-3 / k; }

struct CurrentSample {
  Vec2 position;
  Complex psi;
  Vec2 j;
  double n = 0.0;  ///< |psi|^2
  std::optional<double> div_j;
};

/// Pieces of the closed-form two-slit current j = sign(x) k / sqrt(r1 r2) * m.
struct CurrentDecomposition {
  double g1 = 0.0;
  double g2 = 0.0;
  double phi21 = 0.0;  ///< k (r2 - r1)
  Vec2 grad_r1;
  Vec2 grad_r2;
  Vec2 m;  ///< g1 grad r1 + g2 grad r2
};

struct TwoSlitCurrent {
  Vec2 j;
  CurrentDecomposition parts;
};

struct QuantumPotentialSample {
  Vec2 position;
  double q = 0.0;
  std::optional<Vec2> grad_q;
};

/// Steady-flow force balance (v.grad)v = -grad Q with no magnetic term.
struct ForceBalance {
  Vec2 acceleration;  ///< (v.grad) v
  Vec2 grad_q;
  double residual = 0.0;  ///< |a + grad Q| / max(|a|, |grad Q|, floor)
};

/// Gradient of the field: analytic if available, else central differences.
/// Throws DomainError if the stencil leaves the field's domain or crosses
/// the barrier.
CVec2 field_gradient(const ComplexField &field, Vec2 p, double fd_step);

Vec2 current_generic(const ComplexField &field, Vec2 p, double fd_step);

/// Closed-form two-slit current. DomainError on x == 0 or inside a disk.
TwoSlitCurrent current_two_slit(Vec2 p, double k, const SlitGeometry &geom);

/// Phase gradient; DegenerateDensityError when |psi|^2 <= density_floor.
Vec2 velocity(const ComplexField &field, Vec2 p, double fd_step,
              double density_floor = kDefaultDensityFloor);

QuantumPotentialSample quantum_potential(const ComplexField &field, Vec2 p, double fd_step,
                                         double density_floor = kDefaultDensityFloor,
                                         bool with_gradient = true);

/// Central-difference divergence of current_generic.
double divergence(const ComplexField &field, Vec2 p, double fd_step);

ForceBalance quantum_force_residual(const ComplexField &field, Vec2 p, double fd_step,
                                    double density_floor = kDefaultDensityFloor,
                                    double acceleration_floor = kDefaultAccelerationFloor);

/// psi, j, n and (optionally) div j at one point.
CurrentSample sample_current(const ComplexField &field, Vec2 p, double fd_step,
                             bool with_divergence = false);

}  // namespace slitflow
