#include "slitflow/radial.hpp"

#include <algorithm>
#include <cmath>

#include "slitflow/errors.hpp"
#include "slitflow/ode.hpp"

namespace slitflow {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_params(const RadialParams &params) {
  if (!(params.k_over_kappa > 0.0 && params.k_over_kappa <= 1.0)) {
    throw DomainError("k_over_kappa must lie in (0, 1]");
  }
}

ode::State<4> pack(const RadialState &s) {
  return {s.f.real(), s.f.imag(), s.f_prime.real(), s.f_prime.imag()};
}

RadialState unpack(double r, const ode::State<4> &y) {
  return {r, {y[0], y[1]}, {y[2], y[3]}};
}

}  // namespace

double radial_bracket(double r_tilde, double f_abs2, const RadialParams &params) {
  const double q = params.k_over_kappa;
  const double detuning = (1.0 - q) * (1.0 + q) / (q * q);  // (kappa^2 - k^2) / k^2
  return 0.25 / (r_tilde * r_tilde) + detuning - params.nonlinear * f_abs2 / r_tilde;
}

Complex radial_rhs(const RadialState &state, const RadialParams &params) {
  if (!(state.r_tilde > 0.0)) throw DomainError("r_tilde must be positive");
  check_params(params);
  return -2.0 * kI * state.f_prime -
         radial_bracket(state.r_tilde, std::norm(state.f), params) * state.f;
}

RadialSolution solve_radial(double r_end, const RadialParams &params, const RadialState &init,
                            const RadialConfig &cfg) {
  check_params(params);
  const double r_start = init.r_tilde;
  if (!(r_start > 0.0)) throw DomainError("r_start must be positive");
  if (!(r_end >= r_start)) throw DomainError("need r_start <= r_end");

  RadialSolution sol;
  sol.params = params;
  if (r_end == r_start || cfg.samples < 2) {
    sol.samples.push_back(init);
    sol.flatness = flatness_metric(sol);
    return sol;
  }

  std::vector<double> radii(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    radii[i] = r_start + (r_end - r_start) * static_cast<double>(i) /
                             static_cast<double>(cfg.samples - 1);
  }
  radii.back() = r_end;
  sol.samples.reserve(cfg.samples);
  sol.samples.push_back(init);
  std::size_t next = 1;

  auto rhs = [&](double r, const ode::State<4> &y) -> ode::State<4> {
    const Complex fpp = radial_rhs(unpack(r, y), params);
    return {y[2], y[3], fpp.real(), fpp.imag()};
  };
  auto observer = [&](const ode::DenseSegment<4> &seg) {
    while (next < radii.size() && radii[next] <= seg.t1()) {
      const double r = radii[next];
      sol.samples.push_back(unpack(r, r == seg.t1() ? seg.y1 : seg.value(r)));
      ++next;
    }
    return true;
  };

  ode::StepControl ctl;
  ctl.rel_tol = cfg.rel_tol;
  ctl.abs_tol = cfg.abs_tol;
  ctl.h_max = cfg.max_step;
  ctl.h_init = std::min(1e-3, cfg.max_step);
  ctl.h_min = 1e-14;
  const auto res = ode::integrate<4>(rhs, r_start, pack(init), r_end, ctl, observer);
  if (res.outcome != ode::Outcome::finished) {
    throw StepFailureError("radial integration failed before r_end");
  }
  while (next < radii.size()) {
    sol.samples.push_back(unpack(radii[next], res.y));
    ++next;
  }
  sol.flatness = flatness_metric(sol);
  return sol;
}

double flatness_metric(const RadialSolution &sol) {
  if (sol.samples.empty()) throw TooShortError("empty radial solution");
  double worst = 0.0;
  for (const auto &s : sol.samples) worst = std::max(worst, std::abs(std::abs(s.f) - 1.0));
  return worst;
}

}  // namespace slitflow
