#include "slitflow/current.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "slitflow/errors.hpp"

namespace slitflow {

namespace {

const Vec2 kEx{1.0, 0.0};
const Vec2 kEy{0.0, 1.0};

void require_stencil(const ComplexField &field, Vec2 p, double h) {
  if (!(h > 0.0)) throw DomainError("fd_step must be positive");
  const int side = field.side(p);
  for (const Vec2 q : {p, p + h * kEx, p - h * kEx, p + h * kEy, p - h * kEy}) {
    if (!field.contains(q) || field.side(q) != side) {
      throw DomainError("finite-difference stencil leaves the valid domain");
    }
  }
}

double density_checked(Complex psi, double density_floor) {
  const double n = std::norm(psi);
  if (!(n > density_floor)) throw DegenerateDensityError("density at or below floor (nodal point)");
  return n;
}

// Real 2x2 matrix, row-major: m[a][b] = d_b of component a (or symmetric Hessian).
using Mat2 = std::array<std::array<double, 2>, 2>;

Vec2 mat_vec(const Mat2 &m, Vec2 v) {
  return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
}

// Density n = |psi|^2 and its derivatives up to grad(lap n), from a field jet.
struct DensityJet {
  double n;
  Vec2 grad;
  Mat2 hess;
  double lap;
  Vec2 grad_lap;
};

DensityJet density_jet(const FieldJet &f) {
  const Complex pc = std::conj(f.value);
  const std::array<Complex, 2> g{f.grad.x, f.grad.y};
  const std::array<std::array<Complex, 2>, 2> h{{{f.hxx, f.hxy}, {f.hxy, f.hyy}}};
  const Complex lap_psi = f.laplacian();
  const std::array<Complex, 2> grad_lap_psi{f.grad_laplacian.x, f.grad_laplacian.y};

  DensityJet d{};
  d.n = std::norm(f.value);
  d.grad = {2.0 * std::real(pc * g[0]), 2.0 * std::real(pc * g[1])};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      d.hess[a][b] = 2.0 * std::real(std::conj(g[a]) * g[b] + pc * h[a][b]);
    }
  }
  d.lap = d.hess[0][0] + d.hess[1][1];
  std::array<double, 2> gl{};
  for (int c = 0; c < 2; ++c) {
    Complex acc = std::conj(g[c]) * lap_psi + pc * grad_lap_psi[c];
    for (int a = 0; a < 2; ++a) acc += 2.0 * std::conj(g[a]) * h[c][a];
    gl[c] = 2.0 * std::real(acc);
  }
  d.grad_lap = {gl[0], gl[1]};
  return d;
}

double quantum_potential_from(const DensityJet &d) {
  const double g2 = dot(d.grad, d.grad);
  return -d.lap / (4.0 * d.n) + g2 / (8.0 * d.n * d.n);
}

Vec2 quantum_force_gradient_from(const DensityJet &d) {
  const double n = d.n;
  const double g2 = dot(d.grad, d.grad);
  return -1.0 / (4.0 * n) * d.grad_lap + d.lap / (4.0 * n * n) * d.grad +
         1.0 / (4.0 * n * n) * mat_vec(d.hess, d.grad) - g2 / (4.0 * n * n * n) * d.grad;
}

Vec2 phase_gradient(Complex psi, const CVec2 &grad, double n) {
  const Complex pc = std::conj(psi);
  return {std::imag(pc * grad.x) / n, std::imag(pc * grad.y) / n};
}

// Steady-flow acceleration (v.grad)v from analytic derivatives.
Vec2 acceleration_from(const FieldJet &f, double n, Vec2 grad_n) {
  const Complex pc = std::conj(f.value);
  const std::array<Complex, 2> g{f.grad.x, f.grad.y};
  const std::array<std::array<Complex, 2>, 2> h{{{f.hxx, f.hxy}, {f.hxy, f.hyy}}};
  const std::array<double, 2> dn{grad_n.x, grad_n.y};
  const Vec2 v = phase_gradient(f.value, f.grad, n);
  const std::array<double, 2> vv{v.x, v.y};
  Mat2 dv{};  // dv[a][b] = d_b v_a
  for (int a = 0; a < 2; ++a) {
    const double flux_a = std::imag(pc * g[a]);
    for (int b = 0; b < 2; ++b) {
      dv[a][b] = std::imag(std::conj(g[b]) * g[a] + pc * h[a][b]) / n - flux_a * dn[b] / (n * n);
    }
  }
  return {dv[0][0] * vv[0] + dv[0][1] * vv[1], dv[1][0] * vv[0] + dv[1][1] * vv[1]};
}

double modulus_laplacian_fd(const ComplexField &field, Vec2 p, double h) {
  require_stencil(field, p, h);
  const double centre = std::abs(field.value(p));
  const double sum = std::abs(field.value(p + h * kEx)) + std::abs(field.value(p - h * kEx)) +
                     std::abs(field.value(p + h * kEy)) + std::abs(field.value(p - h * kEy));
  return (sum - 4.0 * centre) / (h * h);
}

double quantum_potential_fd(const ComplexField &field, Vec2 p, double h, double density_floor) {
  const double n = density_checked(field.value(p), density_floor);
  return -0.5 * modulus_laplacian_fd(field, p, h) / std::sqrt(n);
}

}  // namespace

CVec2 field_gradient(const ComplexField &field, Vec2 p, double fd_step) {
  if (auto jet = field.jet(p)) return jet->grad;
  const double h = fd_step;
  require_stencil(field, p, h);
  const Complex dx = (field.value(p + h * kEx) - field.value(p - h * kEx)) / (2.0 * h);
  const Complex dy = (field.value(p + h * kEy) - field.value(p - h * kEy)) / (2.0 * h);
  return {dx, dy};
}

Vec2 current_generic(const ComplexField &field, Vec2 p, double fd_step) {
  const Complex psi = field.value(p);
  const CVec2 grad = field_gradient(field, p, fd_step);
  const Complex pc = std::conj(psi);
  return {2.0 * std::imag(pc * grad.x), 2.0 * std::imag(pc * grad.y)};
}

TwoSlitCurrent current_two_slit(Vec2 p, double k, const SlitGeometry &geom) {
  require_two_slit_domain(p.x, p.y, k, geom);
  const double sign = p.x > 0.0 ? 1.0 : -1.0;
  const auto [r1, r2] = slit_radii(p.x, p.y, geom);

  CurrentDecomposition parts;
  parts.phi21 = k * (r2 - r1);
  const double c = std::cos(parts.phi21);
  const double s = std::sin(parts.phi21);
  parts.g1 = std::sqrt(r2 / r1) + c + s / (2.0 * k * r1);
  parts.g2 = std::sqrt(r1 / r2) + c - s / (2.0 * k * r2);
  parts.grad_r1 = {p.x / r1, (p.y - geom.slit1_y()) / r1};
  parts.grad_r2 = {p.x / r2, (p.y - geom.slit2_y()) / r2};
  parts.m = {parts.g1 * parts.grad_r1.x + parts.g2 * parts.grad_r2.x,
             parts.g1 * parts.grad_r1.y + parts.g2 * parts.grad_r2.y};

  const double scale = sign * k / std::sqrt(r1 * r2);
  return {scale * parts.m, parts};
}

Vec2 velocity(const ComplexField &field, Vec2 p, double fd_step, double density_floor) {
  const Complex psi = field.value(p);
  const double n = density_checked(psi, density_floor);
  return phase_gradient(psi, field_gradient(field, p, fd_step), n);
}

QuantumPotentialSample quantum_potential(const ComplexField &field, Vec2 p, double fd_step,
                                         double density_floor, bool with_gradient) {
  QuantumPotentialSample out{p, 0.0, std::nullopt};
  if (auto jet = field.jet(p)) {
    density_checked(jet->value, density_floor);
    const DensityJet d = density_jet(*jet);
    out.q = quantum_potential_from(d);
    if (with_gradient) out.grad_q = quantum_force_gradient_from(d);
    return out;
  }

  const double h = fd_step;
  out.q = quantum_potential_fd(field, p, h, density_floor);
  if (with_gradient) {
    const double qxp = quantum_potential_fd(field, p + h * kEx, h, density_floor);
    const double qxm = quantum_potential_fd(field, p - h * kEx, h, density_floor);
    const double qyp = quantum_potential_fd(field, p + h * kEy, h, density_floor);
    const double qym = quantum_potential_fd(field, p - h * kEy, h, density_floor);
    out.grad_q = Vec2{(qxp - qxm) / (2.0 * h), (qyp - qym) / (2.0 * h)};
  }
  return out;
}

double divergence(const ComplexField &field, Vec2 p, double fd_step) {
  const double h = fd_step;
  require_stencil(field, p, h);
  const Vec2 jxp = current_generic(field, p + h * kEx, fd_step);
  const Vec2 jxm = current_generic(field, p - h * kEx, fd_step);
  const Vec2 jyp = current_generic(field, p + h * kEy, fd_step);
  const Vec2 jym = current_generic(field, p - h * kEy, fd_step);
  return (jxp.x - jxm.x) / (2.0 * h) + (jyp.y - jym.y) / (2.0 * h);
}

ForceBalance quantum_force_residual(const ComplexField &field, Vec2 p, double fd_step,
                                    double density_floor, double acceleration_floor) {
  // The magnetic force term is absent: the field-free (A = 0) regime only.
  ForceBalance out;
  if (auto jet = field.jet(p)) {
    density_checked(jet->value, density_floor);
    const DensityJet d = density_jet(*jet);
    out.acceleration = acceleration_from(*jet, d.n, d.grad);
    out.grad_q = quantum_force_gradient_from(d);
  } else {
    const double h = fd_step;
    require_stencil(field, p, h);
    const Vec2 v = velocity(field, p, h, density_floor);
    const Vec2 dvdx = (velocity(field, p + h * kEx, h, density_floor) -
                       velocity(field, p - h * kEx, h, density_floor)) / (2.0 * h);
    const Vec2 dvdy = (velocity(field, p + h * kEy, h, density_floor) -
                       velocity(field, p - h * kEy, h, density_floor)) / (2.0 * h);
    out.acceleration = v.x * dvdx + v.y * dvdy;
    out.grad_q = *quantum_potential(field, p, h, density_floor, true).grad_q;
  }
  const double scale =
      std::max({norm(out.acceleration), norm(out.grad_q), acceleration_floor});
  out.residual = norm(out.acceleration + out.grad_q) / scale;
  return out;
}

CurrentSample sample_current(const ComplexField &field, Vec2 p, double fd_step,
                             bool with_divergence) {
  CurrentSample s;
  s.position = p;
  s.psi = field.value(p);
  s.n = std::norm(s.psi);
  s.j = current_generic(field, p, fd_step);
  if (with_divergence) s.div_j = divergence(field, p, fd_step);
  return s;
}

}  // namespace slitflow
