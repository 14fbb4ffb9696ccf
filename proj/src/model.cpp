#include "slitflow/model.hpp"

#include <cmath>
#include <string>

#include "slitflow/errors.hpp"

namespace slitflow {

MediumParams MediumParams::from_gl(double kappa, double beta, double n0) {
  return {kappa, beta, n0, wavenumber_from_medium(kappa, beta, n0)};
}

double wavenumber_from_medium(double kappa, double beta, double n0) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const double fraction = beta * n0;
  if (!(fraction >= 0.0)) throw DomainError("beta*n0 must be non-negative");
  if (!(fraction < 1.0)) {
    throw DomainError("beta*n0 = " + std::to_string(fraction) +
                      " >= 1: no propagating plane wave");
  }
  return kappa * std::sqrt(1.0 - fraction);
}

double nonlinear_fraction(double kappa, double k) {
  if (!(k > 0.0) || !(k <= kappa)) throw DomainError("need 0 < k <= kappa");
  return (kappa - k) * (kappa + k) / (kappa * kappa);
}

SlitRadii slit_radii(double x, double y, const SlitGeometry &geom) {
  return {std::hypot(x, y - geom.slit1_y()), std::hypot(x, y - geom.slit2_y())};
}

Branch branch_for(double x) {
  if (x > 0.0) return Branch::outgoing;
  if (x < 0.0) return Branch::ingoing;
  throw DomainError("wavefunction branch undefined on the barrier line x = 0");
}

Complex psi_single_slit(double r, double k, Branch branch, double exclusion_radius) {
  if (!(k * r >= exclusion_radius)) {
    throw DomainError("k*r = " + std::to_string(k * r) + " inside exclusion radius");
  }
  const double phase = branch == Branch::outgoing ? k * r : -k * r;
  return std::polar(1.0 / std::sqrt(r), phase);
}

bool in_two_slit_domain(double x, double y, double k, const SlitGeometry &geom) {
  if (x == 0.0 || !std::isfinite(x) || !std::isfinite(y)) return false;
  const auto [r1, r2] = slit_radii(x, y, geom);
  return k * r1 >= geom.exclusion_radius && k * r2 >= geom.exclusion_radius;
}

void require_two_slit_domain(double x, double y, double k, const SlitGeometry &geom) {
  if (x == 0.0) throw DomainError("point on the barrier line x = 0");
  const auto [r1, r2] = slit_radii(x, y, geom);
  if (!(k * r1 >= geom.exclusion_radius)) throw DomainError("point inside slit-1 exclusion disk");
  if (!(k * r2 >= geom.exclusion_radius)) throw DomainError("point inside slit-2 exclusion disk");
}

Complex psi_double_slit(double x, double y, double k, const SlitGeometry &geom) {
  require_two_slit_domain(x, y, k, geom);
  const Branch branch = branch_for(x);
  const auto [r1, r2] = slit_radii(x, y, geom);
  const Complex sum = psi_single_slit(r1, k, branch, geom.exclusion_radius) +
                      psi_single_slit(r2, k, branch, geom.exclusion_radius);
  return sum / std::sqrt(2.0);
}

}  // namespace slitflow
