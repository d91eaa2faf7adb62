#pragma once

// Radial shooting for positive profiles of
//
//   u'' + ((n-1)/t) u' + K(t) |u|^{4/(n-2)} u + mu u = 0,   u'(0) = 0,
//
// on the unit interval, and the amplitude search for the boundary ground
// state u(1) = 0. The center is singular, so integration starts from a
// small matching point fed by the second-order series of the profile.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "critex/numerics.hpp"
#include "critex/problem.hpp"

namespace critex {

// One integration of the profile ODE at a fixed amplitude. When the
// profile crosses zero before span ends, integration stops there.
struct ShotRecord {
  double alpha = 0.0;
  double eps = 0.0;      // matching point actually used
  bool crossed = false;
  double crossing_time = 0.0;  // valid when crossed
  double u_end = 0.0;    // profile at the stop time
  double du_end = 0.0;
  double stop_time = 0.0;
  Trajectory traj;
};

namespace detail {

// curvature c of the series start u(t) = alpha - c t^2 + O(t^4):
// c = (K(0) alpha^{(n+2)/(n-2)} + mu alpha) / (2n)
inline double start_curvature(const ProblemSpec& spec, double alpha) {
  const int n = spec.consts.n;
  const double q = (n + 2.0) / (n - 2.0);
  return (spec.k.value(0.0) * std::pow(alpha, q) + spec.mu * alpha) /
         (2.0 * n);
}

// matching point small enough that the dropped t^4 term is far below the
// working tolerance even for bubble-sharp amplitudes
inline double auto_eps(const ProblemSpec& spec, double alpha) {
  const double kappa = start_curvature(spec, alpha) / alpha;
  return std::min(1e-4, 1e-3 / std::sqrt(std::max(kappa, 1.0)));
}

struct ProfileField {
  int n;
  double mu;
  double pw;  // 4/(n-2)
  const KSpec* k;

  void operator()(double t, const std::vector<double>& y,
                  std::vector<double>& dy) const {
    dy[0] = y[1];
    dy[1] = -(n - 1.0) / t * y[1] -
            k->value(t) * std::pow(std::fabs(y[0]), pw) * y[0] - mu * y[0];
  }
};

inline ProfileField profile_field(const ProblemSpec& spec) {
  return {spec.consts.n, spec.mu, 4.0 / (spec.consts.n - 2.0), &spec.k};
}

}  // namespace detail

inline ShotRecord integrate_profile(const ProblemSpec& spec, double alpha,
                                    double eps = 0.0, double t_end = 1.0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("shooting amplitude must be positive");
  if (eps < 0.0 || eps >= 0.25 * t_end)
    throw std::invalid_argument("matching point out of range");
  if (!(t_end > 0.0))
    throw std::invalid_argument("integration span must be positive");

  const auto field = detail::profile_field(spec);
  ShotRecord shot;
  shot.alpha = alpha;
  shot.eps = (eps > 0.0) ? eps : detail::auto_eps(spec, alpha);
  const double c = detail::start_curvature(spec, alpha);

  IvpOptions opt;
  opt.rel_tol = spec.ode_tol;
  opt.abs_tol = 1e-12 * std::max(1.0, alpha);
  opt.event_component = 0;
  shot.traj = solve_ivp(field, shot.eps,
                        {alpha - c * shot.eps * shot.eps, -2.0 * c * shot.eps},
                        t_end, opt);
  if (shot.traj.status != IvpStatus::ok &&
      shot.traj.status != IvpStatus::event)
    throw std::runtime_error("profile integration failed to converge");

  shot.crossed = shot.traj.event_found;
  shot.crossing_time = shot.traj.event_time;
  shot.stop_time = shot.traj.t_end();
  shot.u_end = shot.traj.y.back()[0];
  shot.du_end = shot.traj.y.back()[1];
  return shot;
}

// A fully integrated profile over [0, 1] with value/slope accessors (series
// below the matching point, dense solver output above it).
struct RadialSolution {
  double alpha = 0.0;
  double eps = 0.0;
  double curvature = 0.0;
  double boundary_defect = 0.0;  // |u(1)|
  double residual = 0.0;  // worst local defect against doubled RK4 steps
  Trajectory traj;
  std::vector<std::array<double, 3>> samples;  // (t, u, u') at solver nodes

  double value(double t) const {
    if (t < eps) return alpha - curvature * t * t;
    return traj.state(t, 0);
  }
  double slope(double t) const {
    if (t < eps) return -2.0 * curvature * t;
    return traj.state(t, 1);
  }
};

namespace detail {

// Independent check of the dense trajectory: across every accepted step,
// re-propagate ten sub-intervals with two classical RK4 half-steps each
// and compare against the dense output at the sub-interval ends.
template <class Field>
double trajectory_defect(const Trajectory& traj, Field&& field,
                         double scale) {
  std::vector<double> y(2), dy(2), k1(2), k2(2), k3(2), k4(2), tmp(2);
  auto rk4 = [&](double t, double h) {
    field(t, y, k1);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    field(t + 0.5 * h, tmp, k2);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    field(t + 0.5 * h, tmp, k3);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * k3[i];
    field(t + h, tmp, k4);
    for (int i = 0; i < 2; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  double worst = 0.0;
  for (const auto& step : traj.steps) {
    const double h = step.h / 10.0;
    for (int j = 0; j < 10; ++j) {
      const double a = step.t0 + j * h;
      y = traj.state(a);
      rk4(a, 0.5 * h);
      rk4(a + 0.5 * h, 0.5 * h);
      const auto ref = traj.state(a + h);
      worst = std::max(worst, std::fabs(y[0] - ref[0]) / scale);
      worst = std::max(worst, std::fabs(y[1] - ref[1]) / scale);
    }
  }
  return worst;
}

}  // namespace detail

// Full-span profile (no zero-crossing stop) packaged for evaluation.
inline RadialSolution radial_profile(const ProblemSpec& spec, double alpha,
                                     double eps = 0.0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("shooting amplitude must be positive");
  if (eps < 0.0 || eps >= 0.25)
    throw std::invalid_argument("matching point out of range");

  const auto field = detail::profile_field(spec);
  RadialSolution sol;
  sol.alpha = alpha;
  sol.eps = (eps > 0.0) ? eps : detail::auto_eps(spec, alpha);
  sol.curvature = detail::start_curvature(spec, alpha);

  IvpOptions opt;
  opt.rel_tol = spec.ode_tol;
  opt.abs_tol = 1e-12 * std::max(1.0, alpha);
  sol.traj = solve_ivp(field, sol.eps,
                       {alpha - sol.curvature * sol.eps * sol.eps,
                        -2.0 * sol.curvature * sol.eps},
                       1.0, opt);
  if (sol.traj.status != IvpStatus::ok)
    throw std::runtime_error("profile integration failed to converge");

  sol.boundary_defect = std::fabs(sol.traj.y.back()[0]);
  sol.residual =
      detail::trajectory_defect(sol.traj, field, std::max(1.0, alpha));
  sol.samples.reserve(sol.traj.t.size());
  for (std::size_t i = 0; i < sol.traj.t.size(); ++i)
    sol.samples.push_back(
        {sol.traj.t[i], sol.traj.y[i][0], sol.traj.y[i][1]});
  return sol;
}

struct SweepPoint {
  double alpha = 0.0;
  double score = 0.0;  // u(1) when positive throughout, -(1 - T) on a cross
  bool crossed = false;
};

struct GroundStateSearch {
  bool found = false;
  RadialSolution solution;  // meaningful only when found
  std::vector<SweepPoint> sweep;
  std::vector<std::pair<double, double>> brackets;
  std::string message;
};

namespace detail {

inline double shot_score(const ShotRecord& s) {
  return s.crossed ? -(1.0 - s.crossing_time) : s.u_end;
}

}  // namespace detail

// Sweeps amplitudes geometrically, brackets every sign change of the
// boundary score, then bisects the lowest bracket down to the amplitude
// whose profile vanishes at the boundary. No sign change means no ground
// state in the scanned range; the sweep table documents that.
inline GroundStateSearch find_ground_state(const ProblemSpec& spec,
                                           double alpha_min = 0.1,
                                           double alpha_max = 1e4,
                                           double eps = 0.0) {
  if (!(alpha_min > 0.0) || !(alpha_max > alpha_min))
    throw std::invalid_argument("amplitude range must satisfy 0 < lo < hi");

  GroundStateSearch out;
  std::vector<double> alphas;
  for (double a = alpha_min; a < alpha_max; a *= 1.5) alphas.push_back(a);
  alphas.push_back(alpha_max);

  double prev_score = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const ShotRecord shot = integrate_profile(spec, alphas[i], eps);
    const double score = detail::shot_score(shot);
    out.sweep.push_back({alphas[i], score, shot.crossed});
    if (i > 0 && prev_score * score < 0.0)
      out.brackets.emplace_back(alphas[i - 1], alphas[i]);
    prev_score = score;
  }

  if (out.brackets.empty()) {
    out.message =
        "no boundary zero in the amplitude range [" +
        std::to_string(alpha_min) + ", " + std::to_string(alpha_max) +
        "]: every profile keeps the same boundary sign";
    return out;
  }
  if (out.brackets.size() > 1)
    out.message = "first-zero map is not monotone across the sweep: " +
                  std::to_string(out.brackets.size()) +
                  " candidate brackets recorded; solving the lowest";

  auto [lo, hi] = out.brackets.front();
  double slo = 0.0;
  {
    const ShotRecord shot = integrate_profile(spec, lo, eps);
    slo = detail::shot_score(shot);
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const ShotRecord shot = integrate_profile(spec, mid, eps);
    const double sm = detail::shot_score(shot);
    if (sm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((slo < 0.0) == (sm < 0.0)) {
      lo = mid;
      slo = sm;
    } else {
      hi = mid;
    }
  }

  const double alpha = 0.5 * (lo + hi);
  RadialSolution sol = radial_profile(spec, alpha, eps);
  if (sol.boundary_defect > 1e-9 * std::max(1.0, alpha)) {
    out.message = "bisection stalled: boundary defect " +
                  std::to_string(sol.boundary_defect) + " at amplitude " +
                  std::to_string(alpha);
    return out;
  }
  out.found = true;
  out.solution = std::move(sol);
  return out;
}

}  // namespace critex
