#include "slitflow/fields.hpp"

#include <cmath>

#include "slitflow/errors.hpp"

namespace slitflow {

namespace {

constexpr Complex kI{0.0, 1.0};

FieldJet scaled(const FieldJet &a, double s) {
  return {s * a.value, s * a.grad, s * a.hxx, s * a.hxy, s * a.hyy, s * a.grad_laplacian};
}

FieldJet sum(const FieldJet &a, const FieldJet &b) {
  return {a.value + b.value,         a.grad + b.grad, a.hxx + b.hxx,
          a.hxy + b.hxy,             a.hyy + b.hyy,   a.grad_laplacian + b.grad_laplacian};
}

}  // namespace

FieldJet radial_wave_jet(Vec2 p, Vec2 centre, double k, Branch branch) {
  const Vec2 u = p - centre;
  const double r = norm(u);
  const double nx = u.x / r;
  const double ny = u.y / r;
  const double sk = branch == Branch::outgoing ? k : -k;

  // F(r) = e^{i sk r} r^{-1/2} and its radial derivatives.
  const Complex f = std::polar(1.0 / std::sqrt(r), sk * r);
  const Complex f1 = (kI * sk - 0.5 / r) * f;
  const Complex f2 = (-k * k - kI * sk / r + 0.75 / (r * r)) * f;
  // Laplacian G = F'' + F'/r = (1/(4r^2) - k^2) F, then G'.
  const Complex g1 = (-0.5 / (r * r * r)) * f + (0.25 / (r * r) - k * k) * f1;

  const Complex tangential = f1 / r;
  FieldJet jet;
  jet.value = f;
  jet.grad = {f1 * nx, f1 * ny};
  jet.hxx = f2 * nx * nx + tangential * (1.0 - nx * nx);
  jet.hxy = (f2 - tangential) * nx * ny;
  jet.hyy = f2 * ny * ny + tangential * (1.0 - ny * ny);
  jet.grad_laplacian = {g1 * nx, g1 * ny};
  return jet;
}

Complex PlaneWaveField::value(Vec2 p) const { return std::polar(amplitude_, k_ * p.x); }

std::optional<FieldJet> PlaneWaveField::jet(Vec2 p) const {
  const Complex v = value(p);
  const Complex ik = kI * k_;
  return FieldJet{v, {ik * v, 0.0}, ik * ik * v, 0.0, 0.0, {ik * ik * ik * v, 0.0}};
}

Complex StandingWaveField::value(Vec2 p) const { return std::cos(k_ * p.x); }

std::optional<FieldJet> StandingWaveField::jet(Vec2 p) const {
  const double c = std::cos(k_ * p.x);
  const double s = std::sin(k_ * p.x);
  const double k2 = k_ * k_;
  return FieldJet{c, {-k_ * s, 0.0}, -k2 * c, 0.0, 0.0, {k2 * k_ * s, 0.0}};
}

bool SingleSlitField::contains(Vec2 p) const {
  return p.x != 0.0 && k_ * norm(p) >= exclusion_radius_;
}

Complex SingleSlitField::value(Vec2 p) const {
  return psi_single_slit(norm(p), k_, branch_for(p.x), exclusion_radius_);
}

std::optional<FieldJet> SingleSlitField::jet(Vec2 p) const {
  if (!contains(p)) value(p);  // throws the specific DomainError
  return radial_wave_jet(p, {0.0, 0.0}, k_, branch_for(p.x));
}

bool DoubleSlitField::contains(Vec2 p) const { return in_two_slit_domain(p.x, p.y, k_, geom_); }

Complex DoubleSlitField::value(Vec2 p) const { return psi_double_slit(p.x, p.y, k_, geom_); }

std::optional<FieldJet> DoubleSlitField::jet(Vec2 p) const {
  require_two_slit_domain(p.x, p.y, k_, geom_);
  const Branch branch = branch_for(p.x);
  const FieldJet a = radial_wave_jet(p, {0.0, geom_.slit1_y()}, k_, branch);
  const FieldJet b = radial_wave_jet(p, {0.0, geom_.slit2_y()}, k_, branch);
  return scaled(sum(a, b), 1.0 / std::sqrt(2.0));
}

}  // namespace slitflow
