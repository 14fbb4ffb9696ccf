#pragma once

// Adaptive Dormand-Prince 5(4) integrator with continuous (dense) output.
//
// The right-hand side may throw DomainError when asked to evaluate outside
// its domain; the driver then rejects the step and retries with half the
// step size, giving up once the step falls below StepControl::h_min.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <utility>

#include "slitflow/errors.hpp"

namespace slitflow::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-8;
  double h_init = 1e-2;
  double h_min = 1e-12;
  double h_max = 1.0;
  std::size_t max_steps = 1'000'000;
  /// When positive, steps are shortened so that every t0 + m * stop_interval
  /// is an accepted step endpoint.
  double stop_interval = 0.0;
};

/// One accepted step with its interpolating polynomial.
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  double t_1 = 0.0;  ///< exact endpoint; t0 + h may differ from it by rounding
  State<N> y0{};
  State<N> y1{};
  State<N> f1{};  ///< rhs at (t1, y1)
  std::array<State<N>, 5> coeff{};

  double t1() const { return t_1; }

  State<N> value(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = coeff[0][i] +
               s * (coeff[1][i] + s1 * (coeff[2][i] + s * (coeff[3][i] + s1 * coeff[4][i])));
    }
    return out;
  }

  State<N> derivative(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      const double a = coeff[3][i] + s1 * coeff[4][i];
      const double da = -coeff[4][i];
      const double b = coeff[2][i] + s * a;
      const double db = a + s * da;
      const double c = coeff[1][i] + s1 * b;
      const double dc = -b + s1 * db;
      out[i] = (c + s * dc) / h;
    }
    return out;
  }
};

enum class Outcome {
  finished,       ///< reached t_end
  stopped,        ///< observer requested stop
  domain_limit,   ///< repeated DomainError shrank the step below h_min
  step_failure,   ///< error control shrank the step below h_min
  step_limit,     ///< max_steps accepted steps taken
};

template <std::size_t N>
struct Result {
  Outcome outcome = Outcome::finished;
  double t = 0.0;
  State<N> y{};
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::exception_ptr last_domain_error;
};

namespace detail {

// Butcher tableau (Dormand & Prince 1980) and Hairer's dense-output weights.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <std::size_t N, class... Terms>
State<N> combine(const State<N> &y, double h, const Terms &...terms) {
  State<N> out = y;
  for (std::size_t i = 0; i < N; ++i) {
    double acc = 0.0;
    ((acc += terms.first * (*terms.second)[i]), ...);
    out[i] += h * acc;
  }
  return out;
}

template <std::size_t N>
std::pair<double, const State<N> *> w(double c, const State<N> &k) {
  return {c, &k};
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 towards t_end (t_end > t0). The observer
/// is called as observer(segment) after every accepted step and returns false
/// to stop the integration.
template <std::size_t N, class Rhs, class Observer>
Result<N> integrate(Rhs &&rhs, double t0, const State<N> &y0, double t_end,
                    const StepControl &ctl, Observer &&observer) {
  using namespace detail;
  Result<N> res;
  res.t = t0;
  res.y = y0;
  if (!(t_end > t0)) return res;

  State<N> k1 = rhs(t0, y0);
  double h = std::min({ctl.h_init, ctl.h_max, t_end - t0});
  double err_prev = 1e-4;
  const bool use_stops = ctl.stop_interval > 0.0;
  std::size_t next_stop = 1;

  while (res.t < t_end) {
    if (res.steps >= ctl.max_steps) {
      res.outcome = Outcome::step_limit;
      return res;
    }
    if (h < ctl.h_min) {
      res.outcome = res.last_domain_error ? Outcome::domain_limit : Outcome::step_failure;
      return res;
    }
    const double t = res.t;
    const State<N> &y = res.y;
    bool last = false;
    bool at_stop = false;
    double t_target = t_end;
    if (use_stops) {
      const double stop = t0 + static_cast<double>(next_stop) * ctl.stop_interval;
      if (stop < t_end) {
        t_target = stop;
        at_stop = true;
      }
    }
    const double h_free = h;
    bool clipped = false;
    if (t + h * (1.0 + 1e-9) >= t_target) {
      h = t_target - t;
      last = !at_stop;
      clipped = true;
    } else {
      at_stop = false;
    }

    State<N> k2, k3, k4, k5, k6, k7, y_new;
    try {
      k2 = rhs(t + c2 * h, combine<N>(y, h, w(a21, k1)));
      k3 = rhs(t + c3 * h, combine<N>(y, h, w(a31, k1), w(a32, k2)));
      k4 = rhs(t + c4 * h, combine<N>(y, h, w(a41, k1), w(a42, k2), w(a43, k3)));
      k5 = rhs(t + c5 * h, combine<N>(y, h, w(a51, k1), w(a52, k2), w(a53, k3), w(a54, k4)));
      k6 = rhs(t + h,
               combine<N>(y, h, w(a61, k1), w(a62, k2), w(a63, k3), w(a64, k4), w(a65, k5)));
      y_new = combine<N>(y, h, w(a71, k1), w(a73, k3), w(a74, k4), w(a75, k5), w(a76, k6));
      k7 = rhs(t + h, y_new);
    } catch (const DomainError &) {
      res.last_domain_error = std::current_exception();
      ++res.rejected;
      h *= 0.5;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / N);

    if (!(err <= 1.0)) {
      ++res.rejected;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      continue;
    }

    DenseSegment<N> seg;
    seg.t0 = t;
    seg.h = h;
    seg.y0 = y;
    seg.y1 = y_new;
    seg.f1 = k7;
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = y_new[i] - y[i];
      const double bspl = h * k1[i] - dy;
      seg.coeff[0][i] = y[i];
      seg.coeff[1][i] = dy;
      seg.coeff[2][i] = bspl;
      seg.coeff[3][i] = dy - h * k7[i] - bspl;
      seg.coeff[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                             d7 * k7[i]);
    }

    res.t = last ? t_end : at_stop ? t0 + static_cast<double>(next_stop) * ctl.stop_interval : t + h;
    seg.t_1 = res.t;
    if (at_stop) ++next_stop;
    res.y = y_new;
    ++res.steps;
    k1 = k7;
    res.last_domain_error = nullptr;

    if (!observer(std::as_const(seg))) {
      res.outcome = Outcome::stopped;
      return res;
    }

    // PI step-size controller (Hairer & Wanner, beta = 0.04).
    const double e = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(e, -0.17) * std::pow(err_prev, 0.04);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = std::max(err, 1e-4);
    // A step shortened to land on a stop says nothing about the step size
    // the solution allows.
    h = std::min(std::max(h * fac, clipped ? h_free : 0.0), ctl.h_max);
  }
  res.outcome = Outcome::finished;
  return res;
}

}  // namespace slitflow::ode
