#pragma once
// Numerical foundations: adaptive Gauss-Kronrod 7/15 quadrature and an
// explicit Dormand-Prince 5(4) initial value solver with dense output and
// event detection.
//
// Everything here is deterministic: fixed node tables, fixed splitting and
// step-control rules, no randomness, no time or environment dependence.
// Identical inputs produce bit-identical outputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "critex/gamma.hpp"

namespace critex {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

enum class QuadStatus { ok, tolerance_not_met, divergent };

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  QuadStatus status = QuadStatus::ok;

  bool converged() const { return status == QuadStatus::ok; }
};

namespace detail {

// QUADPACK dqk15 tables. xgk holds the nonnegative Kronrod abscissae
// (even indices are the Gauss-7 points), wgk the Kronrod weights, wg the
// Gauss weights.
inline constexpr std::array<double, 8> gk_xgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000,
};
inline constexpr std::array<double, 8> gk_wgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
};
inline constexpr std::array<double, 4> gk_wg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
};

struct PanelResult {
  double value;    // Kronrod estimate
  double error;    // scaled |Kronrod - Gauss| estimate
  double resabs;   // integral of |f|, Kronrod estimate
};

// One Gauss-Kronrod 7/15 evaluation over [a, b]. 15 integrand calls.
template <class F>
PanelResult gk15_panel(F&& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  double fv1[7], fv2[7];
  const double fc = f(centr);
  double resg = fc * gk_wg[3];
  double resk = fc * gk_wgk[7];
  double resabs = std::fabs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * gk_xgk[jtw];
    fv1[jtw] = f(centr - absc);
    fv2[jtw] = f(centr + absc);
    const double fsum = fv1[jtw] + fv2[jtw];
    resg += gk_wg[j] * fsum;
    resk += gk_wgk[jtw] * fsum;
    resabs += gk_wgk[jtw] * (std::fabs(fv1[jtw]) + std::fabs(fv2[jtw]));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * gk_xgk[jtwm1];
    fv1[jtwm1] = f(centr - absc);
    fv2[jtwm1] = f(centr + absc);
    const double fsum = fv1[jtwm1] + fv2[jtwm1];
    resk += gk_wgk[jtwm1] * fsum;
    resabs += gk_wgk[jtwm1] * (std::fabs(fv1[jtwm1]) + std::fabs(fv2[jtwm1]));
  }

  const double reskh = resk * 0.5;
  double resasc = gk_wgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += gk_wgk[j] *
              (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  }

  const double dhlgth = std::fabs(hlgth);
  double err = std::fabs((resk - resg) * hlgth);
  resabs *= dhlgth;
  resasc *= dhlgth;
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * epmach)) {
    err = std::max(epmach * 50.0 * resabs, err);
  }
  return {resk * hlgth, err, resabs};
}

struct Segment {
  double a, b, value, error, resabs;
};

}  // namespace detail

// Adaptive integral of f over the finite interval [a, b] to absolute
// tolerance tol. Splits the largest-error panel until the summed error
// estimate meets tol (or the round-off floor), or the panel budget runs out,
// in which case status is tolerance_not_met and value/error report the best
// estimate reached.
template <class F>
QuadratureResult integrate_interval(F&& f, double a, double b,
                                    double tol = 1e-10,
                                    int max_panels = 4000) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("integrate_interval requires finite a < b");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_interval requires tol > 0");
  QuadratureResult out;

  std::vector<detail::Segment> segs;
  segs.reserve(64);
  auto first = detail::gk15_panel(f, a, b);
  segs.push_back({a, b, first.value, first.error, first.resabs});
  out.evaluations = 15;

  constexpr double epmach = std::numeric_limits<double>::epsilon();
  while (true) {
    double total = 0.0, err_total = 0.0, resabs_total = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err_total += segs[i].error;
      resabs_total += segs[i].resabs;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    out.value = total;
    out.error_estimate = err_total;

    const double roundoff_floor = 100.0 * epmach * resabs_total;
    if (err_total <= std::max(tol, roundoff_floor)) {
      out.status = QuadStatus::ok;
      return out;
    }
    if (static_cast<int>(segs.size()) >= max_panels) {
      out.status = QuadStatus::tolerance_not_met;
      return out;
    }
    const detail::Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (!(s.a < mid && mid < s.b)) {
      // interval no longer splittable in double precision
      out.status = QuadStatus::tolerance_not_met;
      return out;
    }
    auto left = detail::gk15_panel(f, s.a, mid);
    auto right = detail::gk15_panel(f, mid, s.b);
    out.evaluations += 30;
    segs[worst] = {s.a, mid, left.value, left.error, left.resabs};
    segs.push_back({mid, s.b, right.value, right.error, right.resabs});
  }
}

// Integral of f over [0, infinity) via the substitution r = s/(1-s),
// dr = ds/(1-s)^2, mapping to (0, 1). Kronrod nodes are interior, so the
// integrand is never evaluated at s = 1; f must tolerate large arguments.
template <class F>
QuadratureResult integrate_half_line(F&& f, double tol = 1e-10,
                                     int max_panels = 4000) {
  auto g = [&f](double s) {
    const double om = 1.0 - s;
    const double r = s / om;
    return f(r) / (om * om);
  };
  return integrate_interval(g, 0.0, 1.0, tol, max_panels);
}

// omega_{n-1} * integral_0^inf g(r) r^{n-1} dr for a radial profile g on
// R^n. Detects profiles that decay too slowly for convergence (status
// divergent) by sampling |g(r)| r^n at large radii before integrating.
template <class G>
QuadratureResult integrate_radial(G&& g, int n, double tol = 1e-10,
                                  int max_panels = 4000) {
  if (n < 1) throw std::invalid_argument("integrate_radial requires n >= 1");
  const double omega = sphere_area(n);

  // |g(r)| r^n must decay for the tail to converge; a flat or growing
  // profile of that product means decay no faster than r^{-n}.
  double u_first = 0.0, u_last = 0.0;
  for (int k = 2; k <= 8; ++k) {
    const double r = std::pow(10.0, k);
    const double u = std::fabs(g(r)) * std::pow(r, n);
    if (k <= 3) u_first = std::max(u_first, u);
    if (k >= 7) u_last = std::max(u_last, u);
  }
  QuadratureResult out;
  out.evaluations = 7;
  if (std::isnan(u_last) || std::isinf(u_last) ||
      (u_first > 1e-280 && u_last >= 0.25 * u_first) ||
      (u_last > 1e-280 && u_last > u_first)) {
    out.status = QuadStatus::divergent;
    return out;
  }

  auto integrand = [&g, n](double r) { return g(r) * std::pow(r, n - 1); };
  QuadratureResult inner =
      integrate_half_line(integrand, tol / std::max(1.0, omega), max_panels);
  out.value = omega * inner.value;
  out.error_estimate = omega * inner.error_estimate;
  out.evaluations += inner.evaluations;
  out.status = inner.status;
  return out;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with dense output
// ---------------------------------------------------------------------------

enum class IvpStatus { ok, event, step_underflow, max_steps_exceeded };

struct IvpOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 2000000;
  int event_component = -1;  // stop when this state component changes sign
  double initial_step = 0.0;  // 0 = automatic
  double max_step = 0.0;      // 0 = whole span
};

namespace detail {

// Quartic Hermite-type interpolation coefficients for one accepted step;
// valid for t in [t0, t0 + h].
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  std::vector<double> r1, r2, r3, r4, r5;
};

inline void dense_eval(const DenseStep& s, double t, std::vector<double>& out) {
  const double theta = (t - s.t0) / s.h;
  const double theta1 = 1.0 - theta;
  const std::size_t dim = s.r1.size();
  out.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = s.r1[i] +
             theta * (s.r2[i] +
                      theta1 * (s.r3[i] +
                                theta * (s.r4[i] + theta1 * s.r5[i])));
  }
}

}  // namespace detail

struct Trajectory {
  std::vector<double> t;                  // accepted node times
  std::vector<std::vector<double>> y;     // states at nodes
  std::vector<std::vector<double>> dy;    // derivatives at nodes
  std::vector<detail::DenseStep> steps;   // dense data per accepted step
  IvpStatus status = IvpStatus::ok;
  bool event_found = false;
  double event_time = 0.0;
  long n_accepted = 0;
  long n_rejected = 0;
  long n_eval = 0;

  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }

  // Dense-output state at tq (clamped to the covered span).
  std::vector<double> state(double tq) const {
    std::vector<double> out;
    if (steps.empty()) {
      out = y.front();
      return out;
    }
    const double lo = t.front(), hi = t.back();
    const bool fwd = hi >= lo;
    if ((fwd && tq <= lo) || (!fwd && tq >= lo)) return y.front();
    if ((fwd && tq >= hi) || (!fwd && tq <= hi)) return y.back();
    std::size_t a = 0, b = steps.size();
    while (b - a > 1) {
      const std::size_t m = a + (b - a) / 2;
      if (fwd ? (steps[m].t0 <= tq) : (steps[m].t0 >= tq)) a = m;
      else b = m;
    }
    detail::dense_eval(steps[a], tq, out);
    return out;
  }

  double state(double tq, int component) const {
    return state(tq).at(static_cast<std::size_t>(component));
  }
};

namespace detail {

inline constexpr double dp_c2 = 0.2, dp_c3 = 0.3, dp_c4 = 0.8,
                        dp_c5 = 8.0 / 9.0;
inline constexpr double dp_a21 = 0.2;
inline constexpr double dp_a31 = 3.0 / 40.0, dp_a32 = 9.0 / 40.0;
inline constexpr double dp_a41 = 44.0 / 45.0, dp_a42 = -56.0 / 15.0,
                        dp_a43 = 32.0 / 9.0;
inline constexpr double dp_a51 = 19372.0 / 6561.0, dp_a52 = -25360.0 / 2187.0,
                        dp_a53 = 64448.0 / 6561.0, dp_a54 = -212.0 / 729.0;
inline constexpr double dp_a61 = 9017.0 / 3168.0, dp_a62 = -355.0 / 33.0,
                        dp_a63 = 46732.0 / 5247.0, dp_a64 = 49.0 / 176.0,
                        dp_a65 = -5103.0 / 18656.0;
inline constexpr double dp_a71 = 35.0 / 384.0, dp_a73 = 500.0 / 1113.0,
                        dp_a74 = 125.0 / 192.0, dp_a75 = -2187.0 / 6784.0,
                        dp_a76 = 11.0 / 84.0;
inline constexpr double dp_e1 = 71.0 / 57600.0, dp_e3 = -71.0 / 16695.0,
                        dp_e4 = 71.0 / 1920.0, dp_e5 = -17253.0 / 339200.0,
                        dp_e6 = 22.0 / 525.0, dp_e7 = -1.0 / 40.0;
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0,
                        dp_d3 = 87487479700.0 / 32700410799.0,
                        dp_d4 = -10690763975.0 / 1880347072.0,
                        dp_d5 = 701980252875.0 / 199316789632.0,
                        dp_d6 = -1453857185.0 / 822651844.0,
                        dp_d7 = 69997945.0 / 29380423.0;

template <class F>
double dp_hinit(F& f, double t0, const std::vector<double>& y0,
                const std::vector<double>& f0, double posneg, double hmax,
                double rtol, double atol, long& n_eval) {
  const std::size_t dim = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double sk = atol + rtol * std::fabs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);

  std::vector<double> y1(dim), f1(dim);
  for (std::size_t i = 0; i < dim; ++i) y1[i] = y0[i] + h * posneg * f0[i];
  f(t0 + h * posneg, y1, f1);
  ++n_eval;

  double der2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double sk = atol + rtol * std::fabs(y0[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;

  const double der12 = std::max(std::fabs(der2), std::sqrt(dnf));
  double h1;
  if (der12 <= 1e-15) {
    h1 = std::max(1e-6, std::fabs(h) * 1e-3);
  } else {
    h1 = std::pow(0.01 / der12, 0.2);
  }
  h = std::min({100.0 * std::fabs(h), h1, hmax});
  return h * posneg;
}

}  // namespace detail

// Integrates dy/dt = f(t, y) from t0 to t1. The field is called as
// f(t, y, dydt) with dydt pre-sized. If opt.event_component >= 0, the
// integration stops at the first sign change of that component after t0;
// the crossing time is located by bisection on the dense output and becomes
// the final node.
template <class F>
Trajectory solve_ivp(F&& f, double t0, std::vector<double> y0, double t1,
                     const IvpOptions& opt = {}) {
  const std::size_t dim = y0.size();
  if (dim == 0) throw std::invalid_argument("solve_ivp requires a nonempty state");
  if (t1 == t0) throw std::invalid_argument("solve_ivp requires t1 != t0");
  const double posneg = (t1 > t0) ? 1.0 : -1.0;
  const double hmax = (opt.max_step > 0.0) ? opt.max_step : std::fabs(t1 - t0);
  const double rtol = opt.rel_tol, atol = opt.abs_tol;

  Trajectory traj;
  std::vector<double> y = std::move(y0);
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
      k7(dim), ytmp(dim), ynew(dim);

  f(t0, y, k1);
  traj.n_eval = 1;
  traj.t.push_back(t0);
  traj.y.push_back(y);
  traj.dy.push_back(k1);

  double t = t0;
  double h = opt.initial_step != 0.0
                 ? opt.initial_step
                 : detail::dp_hinit(f, t0, y, k1, posneg, hmax, rtol, atol,
                                    traj.n_eval);
  if (h * posneg <= 0.0) h = std::fabs(h) * posneg;

  // PI step controller (Hairer's dopri5 defaults)
  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.9;
  constexpr double fac1 = 0.2, fac2 = 10.0;  // 1/facc1 .. 1/facc2 clamps
  double facold = 1e-4;

  const double eps = std::numeric_limits<double>::epsilon();
  bool last = false;

  for (long step = 0; step < opt.max_steps; ++step) {
    if (std::fabs(h) <= std::fabs(t) * eps * 16.0 ||
        std::fabs(h) <= 1e-300) {
      traj.status = IvpStatus::step_underflow;
      return traj;
    }
    if ((t + 1.01 * h - t1) * posneg > 0.0) {
      h = t1 - t;
      last = true;
    } else {
      last = false;
    }

    using namespace detail;
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * dp_a21 * k1[i];
    f(t + dp_c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (dp_a31 * k1[i] + dp_a32 * k2[i]);
    f(t + dp_c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
    f(t + dp_c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] +
                            dp_a54 * k4[i]);
    f(t + dp_c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                            dp_a64 * k4[i] + dp_a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (dp_a71 * k1[i] + dp_a73 * k3[i] + dp_a74 * k4[i] +
                            dp_a75 * k5[i] + dp_a76 * k6[i]);
    f(t + h, ynew, k7);
    traj.n_eval += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double sk =
          atol + rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double e = h * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] +
                            dp_e5 * k5[i] + dp_e6 * k6[i] + dp_e7 * k7[i]);
      err += (e / sk) * (e / sk);
    }
    err = std::sqrt(err / static_cast<double>(dim));

    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      // dense output for this step
      detail::DenseStep ds;
      ds.t0 = t;
      ds.h = h;
      ds.r1.resize(dim);
      ds.r2.resize(dim);
      ds.r3.resize(dim);
      ds.r4.resize(dim);
      ds.r5.resize(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        ds.r1[i] = y[i];
        ds.r2[i] = ydiff;
        ds.r3[i] = bspl;
        ds.r4[i] = ydiff - h * k7[i] - bspl;
        ds.r5[i] = h * (dp_d1 * k1[i] + dp_d3 * k3[i] + dp_d4 * k4[i] +
                        dp_d5 * k5[i] + dp_d6 * k6[i] + dp_d7 * k7[i]);
      }

      const int ec = opt.event_component;
      bool crossed = false;
      if (ec >= 0 && static_cast<std::size_t>(ec) < dim) {
        const double y_old = y[static_cast<std::size_t>(ec)];
        const double y_new = ynew[static_cast<std::size_t>(ec)];
        crossed = (y_old > 0.0 && y_new <= 0.0) ||
                  (y_old < 0.0 && y_new >= 0.0);
      }

      traj.steps.push_back(ds);
      ++traj.n_accepted;

      if (crossed) {
        // locate the crossing on the dense interpolant
        double lo = 0.0, hi = 1.0;
        const double y_old = y[static_cast<std::size_t>(ec)];
        std::vector<double> probe(dim);
        for (int it = 0; it < 200 && (hi - lo) > 1e-16; ++it) {
          const double mid = 0.5 * (lo + hi);
          detail::dense_eval(ds, t + mid * h, probe);
          const double v = probe[static_cast<std::size_t>(ec)];
          if ((y_old > 0.0 && v <= 0.0) || (y_old < 0.0 && v >= 0.0)) hi = mid;
          else lo = mid;
        }
        const double tev = t + hi * h;
        detail::dense_eval(ds, tev, ynew);
        f(tev, ynew, k7);
        ++traj.n_eval;
        traj.t.push_back(tev);
        traj.y.push_back(ynew);
        traj.dy.push_back(k7);
        traj.event_found = true;
        traj.event_time = tev;
        traj.status = IvpStatus::event;
        return traj;
      }

      t += h;
      y = ynew;
      k1 = k7;
      traj.t.push_back(t);
      traj.y.push_back(y);
      traj.dy.push_back(k1);

      if (last) {
        traj.status = IvpStatus::ok;
        return traj;
      }
      double hnew = h / fac;
      if (std::fabs(hnew) > hmax) hnew = posneg * hmax;
      h = hnew;
    } else {
      ++traj.n_rejected;
      h = h / std::min(1.0 / fac1, fac11 / safe);
      last = false;
    }
  }
  traj.status = IvpStatus::max_steps_exceeded;
  return traj;
}

}  // namespace critex
