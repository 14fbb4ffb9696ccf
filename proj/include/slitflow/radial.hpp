#pragma once

// Radial envelope equation for psi(r) = f(r) e^{ikr} / sqrt(r):
//
//   f'' + 2i f' + ( 1/(4 r^2) + (kappa^2 - k^2)/k^2 - g |f|^2 / r ) f = 0
//
// with r the dimensionless radius k*r and primes d/dr. The nonlinear
// coefficient g = (kappa^2/k) * beta is supplied directly, so no length
// unit is committed to; kappa/k enters through k_over_kappa.

#include <cstddef>
#include <vector>

#include "slitflow/vec2.hpp"

namespace slitflow {

struct RadialState {
  double r_tilde = 10.0;
  Complex f{1.0, 0.0};
  Complex f_prime{0.0, 0.0};
};

struct RadialParams {
  double k_over_kappa = 1.0;  ///< in (0, 1]
  double nonlinear = 0.0;     ///< g = (kappa^2/k) beta
};

struct RadialConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  std::size_t samples = 3801;  ///< evenly spaced output radii, endpoints included
};

struct RadialSolution {
  std::vector<RadialState> samples;
  RadialParams params;
  double flatness = 0.0;  ///< max | |f| - 1 | over samples
};

/// The bracket multiplying f. Exactly 1/(4 r^2) when k = kappa and g = 0.
double radial_bracket(double r_tilde, double f_abs2, const RadialParams &params);

/// f''; DomainError for r_tilde <= 0 or k_over_kappa outside (0, 1].
Complex radial_rhs(const RadialState &state, const RadialParams &params);

/// Integrates from init.r_tilde to r_end. Throws StepFailureError if the
/// tolerances cannot be met, DomainError on bad arguments.
RadialSolution solve_radial(double r_end, const RadialParams &params, const RadialState &init,
                            const RadialConfig &cfg = {});

/// TooShortError for an empty solution.
double flatness_metric(const RadialSolution &sol);

}  // namespace slitflow
