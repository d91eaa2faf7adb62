#pragma once

// Polynomial test multipliers for the radial balance identity, sign
// certificates for them, and the staged nonexistence check built on top.
//
// A multiplier psi enters through the combined identity
//
//   -1/2 |u'(1)|^2 psi(1)
//     + int_0^1 u^2 [ mu psi' + 1/4 psi'''
//                     + 1/4 (n-1)(n-3) t^{-3} (psi - t psi') ] t^{n-1} dt
//   = int_0^1 u^{2n/(n-2)} [ -((n-2)/2n) t f'(t) psi
//                            + ((n-1)/n) f(t) (psi - t psi') ] t^{n-2} dt,
//
// valid for any boundary solution u and any smooth psi with psi(0) = 0.
// Killing the u^2 bulk term selects psi as a power series whose
// coefficients obey a two-step recurrence; truncations of the two
// admissible ladders (leading powers t and t^{n-1}) are what we certify.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "critex/numerics.hpp"
#include "critex/problem.hpp"

namespace critex {

enum class PsiKind { odd, even };

// Truncated multiplier series psi(t) = sum_k coeffs[k] t^k. The odd ladder
// runs over k = 1, 3, 5, ...; the even one over k = n-1, n+1, ... with
// everything below t^{n-1} forced to zero. tail[d] bounds the sup over
// [0,1] of the d-th derivative of the omitted part of the series.
struct PsiSeries {
  int n = 0;
  double mu = 0.0;
  PsiKind kind = PsiKind::odd;
  double seed = 0.0;
  std::vector<double> coeffs;
  int lead = 0;  // index of the seeded coefficient
  int top = 0;   // largest stored index
  double tail[4] = {0.0, 0.0, 0.0, 0.0};
};

// Coefficient ladder: a_{k+2} = -4 mu k / ((k+1) [k(k+2) - (n-1)(n-3)]) a_k.
// The bracket vanishes only at k = n-3, which has the parity of n-1 and is
// therefore never a source index of either ladder when n is odd. Even n
// puts k = n-3 on the odd ladder, so it is rejected outright.
inline PsiSeries psi_series(int n, double mu, PsiKind kind, double seed,
                            int truncation = 80) {
  if (n % 2 == 0)
    throw std::invalid_argument(
        "vanishing denominator risk: multiplier series require odd n");
  if (n < 5)
    throw std::invalid_argument("multiplier series require n >= 5");
  if (truncation < n + 1)
    throw std::invalid_argument("series truncation must be at least n + 1");
  if (seed == 0.0) throw std::invalid_argument("series seed must be nonzero");
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("series coupling mu must be finite and >= 0");

  PsiSeries s;
  s.n = n;
  s.mu = mu;
  s.kind = kind;
  s.seed = seed;
  s.coeffs.assign(static_cast<std::size_t>(truncation) + 1, 0.0);
  s.lead = (kind == PsiKind::odd) ? 1 : n - 1;
  s.coeffs[static_cast<std::size_t>(s.lead)] = seed;

  const double m2 = (n - 1.0) * (n - 3.0);
  int k = s.lead;
  while (k + 2 <= truncation) {
    const double den = (k + 1.0) * (k * (k + 2.0) - m2);
    if (den == 0.0)
      throw std::logic_error("vanishing denominator in multiplier recurrence");
    s.coeffs[static_cast<std::size_t>(k) + 2] =
        -4.0 * mu * k / den * s.coeffs[static_cast<std::size_t>(k)];
    k += 2;
  }
  s.top = k;

  // Beyond the truncation, |a_{j+2}| <= (2 mu / j) |a_j| once j >= n - 2,
  // which holds from j = top on. Sum the majorant until it underflows;
  // j^d dominates the falling factorial from the d-th derivative.
  double term = std::fabs(s.coeffs[static_cast<std::size_t>(s.top)]);
  double j = static_cast<double>(s.top);
  if (2.0 * mu / j >= 1.0) {
    for (double& b : s.tail) b = std::numeric_limits<double>::infinity();
  } else if (term > 0.0) {
    for (int i = 0; i < 2000; ++i) {
      term *= 2.0 * mu / j;
      j += 2.0;
      double p = 1.0;
      for (double& b : s.tail) {
        b += term * p;
        p *= j;
      }
      if (term * p < 1e-300) break;
    }
  }
  return s;
}

struct PsiJet {
  double psi = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  // mu psi' + 1/4 psi''' + 1/4 (n-1)(n-3) t^{-3} (psi - t psi'), evaluated
  // term by term; the recurrence telescopes it down to the single monomial
  // mu top a_top t^{top-1} left over by truncation.
  double residual = 0.0;
};

namespace detail {

// sum over stored k of coeffs[k] * t^{k - shift}, requiring shift <= lead.
// Horner in w = t^2 on the shifted powers; exact at t = 0.
inline double psi_eval_shifted(const PsiSeries& s, double t, int shift) {
  const double w = t * t;
  double acc = 0.0;
  for (int k = s.top; k >= s.lead; k -= 2)
    acc = acc * w + s.coeffs[static_cast<std::size_t>(k)];
  double lead_pow = 1.0;
  for (int i = 0; i < s.lead - shift; ++i) lead_pow *= t;
  return acc * lead_pow;
}

// sum over stored k of (1 - k) coeffs[k] t^{k - shift}: the combination
// psi - t psi' without subtractive cancellation. shift <= 3 is safe since
// the k = 1 term carries a zero factor.
inline double psi_pml_shifted(const PsiSeries& s, double t, int shift) {
  const double w = t * t;
  double acc = 0.0;
  // only the k = 1 coefficient can sit below kmin, and the 1 - k factor
  // kills it, so starting at 3 loses nothing
  int kmin = std::max(s.lead, 3);
  for (int k = s.top; k >= kmin; k -= 2)
    acc = acc * w + (1.0 - k) * s.coeffs[static_cast<std::size_t>(k)];
  double lead_pow = 1.0;
  for (int i = 0; i < kmin - shift; ++i) lead_pow *= t;
  return acc * lead_pow;
}

// sup over [0,1] of |d/dt (psi/t^lead)| for the stored part of the series.
inline double psi_normalized_lipschitz(const PsiSeries& s) {
  double lip = 0.0;
  for (int k = s.lead + 2; k <= s.top; k += 2)
    lip += (k - s.lead) * std::fabs(s.coeffs[static_cast<std::size_t>(k)]);
  return lip;
}

}  // namespace detail

inline PsiJet eval_psi_jet(const PsiSeries& s, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("multiplier jet requires t in [0, 1]");
  PsiJet out;
  const double m2 = (s.n - 1.0) * (s.n - 3.0);
  double tk = 1.0;  // t^{k - lead} below, advanced by t^2 per step
  for (int i = 0; i < s.lead; ++i) tk *= t;
  // tk now t^lead; walk the stored indices upward keeping exact powers
  double power = tk;
  for (int k = s.lead; k <= s.top; k += 2) {
    const double a = s.coeffs[static_cast<std::size_t>(k)];
    if (a != 0.0) {
      // power = t^k; derivatives peel factors without negative exponents:
      // each factor of t removed pairs with a vanishing coefficient when
      // k is too small, so guard on k instead of dividing.
      out.psi += a * power;
      double p1 = 1.0;
      for (int i = 0; i < k - 1; ++i) p1 *= t;
      out.d1 += a * k * p1;
      if (k >= 2) {
        double p2 = 1.0;
        for (int i = 0; i < k - 2; ++i) p2 *= t;
        out.d2 += a * k * (k - 1.0) * p2;
      }
      if (k >= 3) {
        double p3 = 1.0;
        for (int i = 0; i < k - 3; ++i) p3 *= t;
        out.d3 += a * k * (k - 1.0) * (k - 2.0) * p3;
        const double dk = 0.25 * (k - 1.0) * (k * (k - 2.0) - m2);
        out.residual += a * dk * p3;
      }
      out.residual += s.mu * a * k * p1;
    }
    power *= t * t;
  }
  return out;
}

struct SignCertificate {
  bool passed = false;
  // certified lower bound of expected_sign * psi(t)/t^lead over [0,1]:
  // grid minimum less the between-node dip and the truncation tail
  double margin = 0.0;
  double violating_t = -1.0;  // worst grid point when the bound fails
  std::size_t grid_points = 0;
};

inline SignCertificate sign_certificate(const PsiSeries& s, int expected_sign,
                                        std::size_t grid = 4096) {
  if (expected_sign != 1 && expected_sign != -1)
    throw std::invalid_argument("expected_sign must be +1 or -1");
  if (grid < 16) throw std::invalid_argument("sign certificate grid too small");
  SignCertificate out;
  out.grid_points = grid + 1;
  const double sign = static_cast<double>(expected_sign);
  double vmin = std::numeric_limits<double>::infinity();
  double tmin = 0.0;
  for (std::size_t i = 0; i <= grid; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid);
    const double v = sign * detail::psi_eval_shifted(s, t, s.lead);
    if (v < vmin) {
      vmin = v;
      tmin = t;
    }
  }
  const double dip =
      detail::psi_normalized_lipschitz(s) / (2.0 * static_cast<double>(grid));
  out.margin = vmin - dip - s.tail[0];
  out.passed = out.margin > 0.0;
  if (!out.passed) out.violating_t = tmin;
  return out;
}

// psi1 (odd ladder, a_1 > 0) plus psi2 (even ladder, a_{n-1} < 0), with the
// grid minimum of (psi1 + psi2)/t recorded from construction.
struct PsiBar {
  PsiSeries psi1;
  PsiSeries psi2;
  SignCertificate psi1_sign;
  SignCertificate psi2_sign;
  double bar_min = 0.0;  // min over the grid of (psi1 + psi2)(t)/t
  double bar_argmin = 0.0;

  double a1() const { return psi1.seed; }
  double an1() const { return psi2.seed; }
};

// Uncertified assembly: both ladders at the given seeds, no sign checks.
// Useful as a balance multiplier even where the sign certificates fail.
inline PsiBar make_psibar(int n, double mu, double a1, double an1,
                          int truncation = 80) {
  PsiBar bar;
  bar.psi1 = psi_series(n, mu, PsiKind::odd, a1, truncation);
  bar.psi2 = psi_series(n, mu, PsiKind::even, an1, truncation);
  return bar;
}

// Certified combination: a_1 = 1, and a_{n-1} scanned over -2^{-k} from the
// largest magnitude down, keeping the first seed whose combination stays
// nonnegative on the grid. mu = 0 accepts a_{n-1} = -1 exactly, where the
// combination touches zero at t = 1.
inline PsiBar build_psibar(int n, double mu, int truncation = 80,
                           std::size_t grid = 4096) {
  PsiSeries psi1 = psi_series(n, mu, PsiKind::odd, 1.0, truncation);
  const SignCertificate c1 = sign_certificate(psi1, +1, grid);
  if (!c1.passed)
    throw std::runtime_error(
        "psibar construction failed: positive ladder lost its sign "
        "certificate (coupling too large)");
  // the negative ladder's certificate is invariant under rescaling the
  // seed, so one probe settles it for the whole scan
  if (!sign_certificate(psi_series(n, mu, PsiKind::even, -1.0, truncation),
                        -1, grid)
           .passed)
    throw std::runtime_error(
        "psibar construction failed: negative ladder lost its sign "
        "certificate (coupling too large)");

  for (int e = 0; e <= 60; ++e) {
    const double seed = -std::ldexp(1.0, -e);
    PsiSeries psi2 = psi_series(n, mu, PsiKind::even, seed, truncation);
    const SignCertificate c2 = sign_certificate(psi2, -1, grid);
    if (!c2.passed) continue;

    double vmin = std::numeric_limits<double>::infinity();
    double tmin = 0.0;
    for (std::size_t i = 0; i <= grid; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(grid);
      const double v = detail::psi_eval_shifted(psi1, t, 1) +
                       detail::psi_eval_shifted(psi2, t, 1);
      if (v < vmin) {
        vmin = v;
        tmin = t;
      }
    }
    const double scale = 1.0 + std::fabs(seed);
    const double slack =
        1e-12 * scale + psi1.tail[0] + psi2.tail[0];
    if (vmin >= -slack) {
      PsiBar bar;
      bar.psi1 = std::move(psi1);
      bar.psi2 = std::move(psi2);
      bar.psi1_sign = c1;
      bar.psi2_sign = c2;
      bar.bar_min = vmin;
      bar.bar_argmin = tmin;
      return bar;
    }
  }
  throw std::runtime_error(
      "psibar construction failed: no admissible negative seed keeps the "
      "combination nonnegative");
}

// Multiplier jet handed to the balance integrals. pml is psi - t psi',
// assembled without cancellation; residual is the bulk kernel
// mu psi' + 1/4 psi''' + 1/4 (n-1)(n-3) t^{-3} (psi - t psi').
struct MultiplierJet {
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::function<double(double)> d3psi;
  std::function<double(double)> pml;
  std::function<double(double)> residual;
  double psi_at_1 = 0.0;
  std::string label;
};

// psi(t) = t: the classical choice; the bulk kernel collapses to mu.
inline MultiplierJet identity_multiplier(double mu) {
  MultiplierJet jet;
  jet.psi = [](double t) { return t; };
  jet.dpsi = [](double) { return 1.0; };
  jet.d3psi = [](double) { return 0.0; };
  jet.pml = [](double) { return 0.0; };
  jet.residual = [mu](double) { return mu; };
  jet.psi_at_1 = 1.0;
  jet.label = "identity";
  return jet;
}

inline MultiplierJet psibar_multiplier(const PsiBar& bar) {
  MultiplierJet jet;
  const PsiSeries p1 = bar.psi1;
  const PsiSeries p2 = bar.psi2;
  jet.psi = [p1, p2](double t) {
    return detail::psi_eval_shifted(p1, t, 0) +
           detail::psi_eval_shifted(p2, t, 0);
  };
  jet.dpsi = [p1, p2](double t) {
    return eval_psi_jet(p1, t).d1 + eval_psi_jet(p2, t).d1;
  };
  jet.d3psi = [p1, p2](double t) {
    return eval_psi_jet(p1, t).d3 + eval_psi_jet(p2, t).d3;
  };
  jet.pml = [p1, p2](double t) {
    return detail::psi_pml_shifted(p1, t, 0) +
           detail::psi_pml_shifted(p2, t, 0);
  };
  jet.residual = [p1, p2](double t) {
    return eval_psi_jet(p1, t).residual + eval_psi_jet(p2, t).residual;
  };
  jet.psi_at_1 = jet.psi(1.0);
  jet.label = "psibar";
  return jet;
}

struct PohozaevSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double difference = 0.0;
  double boundary_defect = 0.0;
  std::string boundary_warning;  // empty when |u(1)| is small enough
  long evaluations = 0;
};

// Evaluates both sides of the balance identity on a radial profile. The
// profile only needs value(t) and slope(t) on [0,1]; it is the caller's
// business whether it actually solves the equation (the identity is only
// meaningful then, and a large boundary value is flagged, not rejected).
template <class Profile>
PohozaevSides pohozaev_sides(const Profile& u, const MultiplierJet& jet,
                             const ProblemSpec& spec,
                             double boundary_tol = 1e-6) {
  const int n = spec.consts.n;
  const double cn_bar = (n - 2.0) / (2.0 * n);
  const double crit = 2.0 * n / (n - 2.0);

  PohozaevSides out;
  const double u1 = u.value(1.0);
  const double du1 = u.slope(1.0);
  out.boundary_defect = std::fabs(u1);
  if (out.boundary_defect > boundary_tol)
    out.boundary_warning = "not a boundary solution";

  double scale = std::max({std::fabs(u.value(0.0)), std::fabs(u.value(0.5)),
                           1.0});
  const double tol = spec.quad_tol * scale * scale;

  auto bulk = [&](double t) {
    const double v = u.value(t);
    return v * v * jet.residual(t) * std::pow(t, n - 1);
  };
  auto source = [&](double t) {
    const double v = std::pow(std::fabs(u.value(t)), crit);
    const double kernel = -cn_bar * t * spec.k.derivative(t) * jet.psi(t) +
                          ((n - 1.0) / n) * spec.k.value(t) * jet.pml(t);
    return v * kernel * std::pow(t, n - 2);
  };

  const QuadratureResult qb = integrate_interval(bulk, 0.0, 1.0, tol);
  const QuadratureResult qs = integrate_interval(source, 0.0, 1.0, tol);
  out.lhs = -0.5 * du1 * du1 * jet.psi_at_1 + qb.value;
  out.rhs = qs.value;
  out.difference = out.lhs - out.rhs;
  out.evaluations = qb.evaluations + qs.evaluations;
  return out;
}

// The two integral identities the balance is assembled from, evaluated
// as stated (one carries the boundary flux, the other trades the source
// term against derivative weight). Diagnostic only: each side pair should
// agree on a true boundary solution.
struct IntermediateChecks {
  double flux_lhs = 0.0;
  double flux_rhs = 0.0;
  double flux_residual = 0.0;
  double weight_lhs = 0.0;
  double weight_rhs = 0.0;
  double weight_residual = 0.0;
};

template <class Profile>
IntermediateChecks intermediate_checks(const Profile& u,
                                       const MultiplierJet& jet,
                                       const ProblemSpec& spec) {
  const int n = spec.consts.n;
  const double mu = spec.mu;
  const double cn_bar = (n - 2.0) / (2.0 * n);
  const double crit = 2.0 * n / (n - 2.0);
  const double du1 = u.slope(1.0);

  double scale = std::max({std::fabs(u.value(0.0)), std::fabs(u.value(0.5)),
                           1.0});
  const double tol = spec.quad_tol * scale * scale;
  auto integ = [&](auto&& f) {
    return integrate_interval(f, 0.0, 1.0, tol).value;
  };

  IntermediateChecks out;
  out.flux_lhs =
      -0.5 * du1 * du1 * jet.psi_at_1 +
      0.5 * integ([&](double t) {
        const double d = u.slope(t);
        return d * d *
               (std::pow(t, n - 1) * jet.dpsi(t) -
                (n - 1.0) * std::pow(t, n - 2) * jet.psi(t));
      });
  out.flux_rhs =
      -cn_bar * integ([&](double t) {
        const double v = std::pow(std::fabs(u.value(t)), crit);
        return v *
               (spec.k.value(t) * (t * jet.dpsi(t) + (n - 1.0) * jet.psi(t)) +
                spec.k.derivative(t) * t * jet.psi(t)) *
               std::pow(t, n - 2);
      }) -
      0.5 * mu * integ([&](double t) {
        const double v = u.value(t);
        return v * v *
               (std::pow(t, n - 1) * jet.dpsi(t) +
                (n - 1.0) * std::pow(t, n - 2) * jet.psi(t));
      });
  out.flux_residual = out.flux_lhs - out.flux_rhs;

  out.weight_lhs = integ([&](double t) {
    const double v = u.value(t);
    const double vq = std::pow(std::fabs(v), crit);
    const double w = t * jet.dpsi(t) - (n - 1.0) * jet.psi(t);
    return (spec.k.value(t) * vq + mu * v * v) * w * std::pow(t, n - 2);
  });
  out.weight_rhs =
      -0.5 * integ([&](double t) {
        const double v = u.value(t);
        return v * v *
               (t * t * t * jet.d3psi(t) +
                (n - 1.0) * (n - 3.0) * jet.pml(t)) *
               std::pow(t, n - 4);
      }) +
      integ([&](double t) {
        const double d = u.slope(t);
        return d * d * (t * jet.dpsi(t) - (n - 1.0) * jet.psi(t)) *
               std::pow(t, n - 2);
      });
  out.weight_residual = out.weight_lhs - out.weight_rhs;
  return out;
}

// Pointwise positivity of the source-side kernel with the combined
// multiplier, normalized by t^3 so the t -> 0 limit is finite:
//   Phi(t)/t^3 = -((n-2)/2n) eta (f1'(t)/t) (psibar(t)/t)
//                + ((n-1)/n) K(t) (psibar - t psibar')/t^3.
struct PositivityScan {
  double min_value = 0.0;  // tail-adjusted minimum over [0,1]
  double argmin = 0.0;
  double limit_t0 = 0.0;   // value extended to t = 0
  bool positive = false;
  std::size_t samples = 0;
};

struct PositivityFunctional {
  PsiBar bar;
  KSpec k;
  int n = 0;

  double operator()(double t) const {
    const double bar_over_t = detail::psi_eval_shifted(bar.psi1, t, 1) +
                              detail::psi_eval_shifted(bar.psi2, t, 1);
    const double pml_over_t3 = detail::psi_pml_shifted(bar.psi1, t, 3) +
                               detail::psi_pml_shifted(bar.psi2, t, 3);
    return -((n - 2.0) / (2.0 * n)) * k.eta * k.f1_prime_over_t(t) *
               bar_over_t +
           ((n - 1.0) / n) * k.value(t) * pml_over_t3;
  }

  PositivityScan scan(std::size_t grid = 4096) const {
    PositivityScan out;
    out.limit_t0 = (*this)(0.0);
    double vmin = std::numeric_limits<double>::infinity();
    double tmin = 0.0;
    double sup_fp = 0.0;  // max of |f1'(t)/t| for the tail budget
    for (std::size_t i = 0; i <= grid; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(grid);
      const double v = (*this)(t);
      sup_fp = std::max(sup_fp, std::fabs(k.f1_prime_over_t(t)));
      if (v < vmin) {
        vmin = v;
        tmin = t;
      }
    }
    out.samples = grid + 1;
    // two refinement rounds around the grid argmin
    double lo = std::max(0.0, tmin - 1.0 / static_cast<double>(grid));
    double hi = std::min(1.0, tmin + 1.0 / static_cast<double>(grid));
    for (int round = 0; round < 2; ++round) {
      double best_t = tmin;
      for (int i = 0; i <= 64; ++i) {
        const double t = lo + (hi - lo) * i / 64.0;
        const double v = (*this)(t);
        if (v < vmin) {
          vmin = v;
          best_t = t;
        }
        ++out.samples;
      }
      tmin = best_t;
      const double h = (hi - lo) / 64.0;
      lo = std::max(0.0, tmin - h);
      hi = std::min(1.0, tmin + h);
    }
    const double tail0 = bar.psi1.tail[0] + bar.psi2.tail[0];
    const double tail1 = bar.psi1.tail[1] + bar.psi2.tail[1];
    const double budget = ((n - 2.0) / (2.0 * n)) * k.eta * sup_fp * tail0 +
                          ((n - 1.0) / n) * k.value(0.0) * tail1;
    out.min_value = vmin - budget;
    out.argmin = tmin;
    out.positive = out.min_value > 0.0;
    return out;
  }
};

inline PositivityFunctional positivity_functional(const PsiBar& bar,
                                                  const KSpec& k) {
  return PositivityFunctional{bar, k, bar.psi1.n};
}

enum class CertificateVerdict { nonexistence_certified, criterion_strict,
                                inconclusive };

inline const char* to_string(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::nonexistence_certified:
      return "nonexistence_certified";
    case CertificateVerdict::criterion_strict:
      return "criterion_strict";
    default:
      return "inconclusive";
  }
}

struct Certificate {
  CertificateVerdict verdict = CertificateVerdict::inconclusive;
  std::string failing_stage;  // empty when certified
  std::string detail;
  double lhs_i = 0.0;   // flatness side of the reversed comparison
  double rhs_i = 0.0;   // coupling side
  double reversed_margin = 0.0;  // lhs_i - rhs_i, >= 0 required
  bool k3_ok = false;
  bool psibar_built = false;
  double psibar_a1 = 0.0;
  double psibar_an1 = 0.0;
  double psibar_min = 0.0;
  SignCertificate psi1_sign;
  SignCertificate psi2_sign;
  PositivityScan positivity;
};

// Staged nonexistence check. Stops at the first stage that cannot be
// carried through; inconclusive outcomes are explicit, with the stage and
// reason recorded, never silent.
inline Certificate certify_nonexistence(const ProblemSpec& spec,
                                        int truncation = 80,
                                        std::size_t grid = 4096) {
  const int n = spec.consts.n;
  if (!(n == 5 || (n % 2 == 1 && n > 19)))
    throw std::invalid_argument(
        "dimension outside theorem scope: requires n = 5 or odd n > 19");

  Certificate cert;
  const double k0 = spec.k.value(0.0);
  cert.lhs_i = -((n - 2.0) * (n - 2.0)) * spec.consts.c2 *
               spec.k.laplacian_center(n) / (2.0 * n * k0);
  cert.rhs_i = spec.mu * spec.consts.c3;
  cert.reversed_margin = cert.lhs_i - cert.rhs_i;
  cert.k3_ok = spec.k.k3_satisfied(n);

  if (!(spec.mu > 0.0)) {
    cert.failing_stage = "mu-positivity";
    cert.detail = "the check requires mu > 0";
    return cert;
  }
  if (!cert.k3_ok) {
    cert.failing_stage = "k3-flatness";
    cert.detail = spec.k.k3_violation(n);
    return cert;
  }
  const double rev_tol =
      1e-9 * std::max({std::fabs(cert.lhs_i), std::fabs(cert.rhs_i), 1e-300});
  if (cert.reversed_margin < -rev_tol) {
    cert.verdict = CertificateVerdict::criterion_strict;
    cert.failing_stage = "reversed-criterion";
    cert.detail =
        "flatness side falls strictly below the coupling side; the strict "
        "existence criterion holds instead";
    return cert;
  }

  PsiBar bar;
  try {
    bar = build_psibar(n, spec.mu, truncation, grid);
  } catch (const std::runtime_error& e) {
    cert.failing_stage = "psibar-construction";
    cert.detail = e.what();
    return cert;
  }
  cert.psibar_built = true;
  cert.psibar_a1 = bar.a1();
  cert.psibar_an1 = bar.an1();
  cert.psibar_min = bar.bar_min;
  cert.psi1_sign = bar.psi1_sign;
  cert.psi2_sign = bar.psi2_sign;

  cert.positivity = positivity_functional(bar, spec.k).scan(grid);
  if (!cert.positivity.positive) {
    cert.failing_stage = "positivity";
    cert.detail = "source-side kernel loses positivity on (0, 1]";
    return cert;
  }

  cert.verdict = CertificateVerdict::nonexistence_certified;
  return cert;
}

// Largest coupling (to bisection accuracy) at which both sign certificates
// still pass at the given truncation; the certificates, and everything
// built on them, degrade gracefully above it.
inline double estimate_mu_n(int n, double hi = 32.0, int iterations = 48,
                            int truncation = 80, std::size_t grid = 4096) {
  auto certified = [&](double mu) {
    const PsiSeries p1 = psi_series(n, mu, PsiKind::odd, 1.0, truncation);
    const PsiSeries p2 = psi_series(n, mu, PsiKind::even, -1.0, truncation);
    return sign_certificate(p1, +1, grid).passed &&
           sign_certificate(p2, -1, grid).passed;
  };
  double lo = 0.0;
  if (!certified(lo)) return 0.0;
  if (certified(hi))
    throw std::invalid_argument("upper bracket still certifies; raise hi");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (certified(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace critex
