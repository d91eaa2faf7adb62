#pragma once
// Dimension-dependent constants of the critical exponent problem on R^n:
// the bubble normalization c_n = n(n-2), the classical profile integrals,
// the best Sobolev constant, and the Taylor coefficients of the power
// (1 - beta t)^{n/(n-2)} used by the energy expansion.
//
// Every integral has a Beta-function closed form; the quadrature values and
// relative residuals are kept alongside so each run cross-checks the two
// evaluation routes against each other.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "critex/gamma.hpp"
#include "critex/numerics.hpp"

namespace critex {

// binomial coefficient (alpha choose k) for real alpha
inline double generalized_binomial(double alpha, int k) {
  if (k < 0) throw std::invalid_argument("generalized_binomial requires k >= 0");
  double prod = 1.0;
  for (int j = 0; j < k; ++j) prod *= (alpha - j) / (j + 1);
  return prod;
}

struct CrossCheck {
  double quadrature = 0.0;
  double relative_residual = 0.0;
};

struct DimensionConstants {
  int n = 0;
  double c_n = 0.0;      // n(n-2)
  double omega = 0.0;    // area of S^{n-1}
  double s_n = 0.0;      // int_{R^n} (1+|x|^2)^{-n} dx
  double c1 = 0.0;       // int_{R^n} (1+|x|^2)^{-(n+2)/2} dx
  double c2 = 0.0;       // int_{R^n} |x|^2 (1+|x|^2)^{-n} dx
  double c3 = 0.0;       // int_{R^n} (1+|x|^2)^{-(n-2)} dx
  double sobolev = 0.0;  // c_n * s_n^{2/n}
  double beta = 0.0;     // c3 / (c_n s_n)

  // a[k] = binom(n/(n-2), k) (-beta)^k for 2 <= k <= (n-2)/2; lower
  // entries are zero placeholders. Empty when (n-2)/2 < 2 (i.e. n = 5).
  std::vector<double> a;

  CrossCheck s_n_check, c1_check, c2_check, c3_check;
};

namespace detail {

template <class G>
CrossCheck radial_cross_check(G&& g, int n, double closed, double tol) {
  const double scale = std::max(std::fabs(closed), 1e-30);
  auto q = integrate_radial(g, n, tol * scale);
  if (q.status != QuadStatus::ok) {
    throw std::runtime_error("dimension constant cross-check quadrature failed");
  }
  return {q.value, std::fabs(q.value - closed) / scale};
}

}  // namespace detail

// All profile-integral constants for dimension n >= 5, from Beta-function
// closed forms. With cross_check set, each is re-derived by adaptive radial
// quadrature and the relative residual recorded.
inline DimensionConstants dimension_constants(int n, double tol = 1e-10,
                                              bool cross_check = true) {
  if (n < 5 || n % 2 == 0) {
    throw std::invalid_argument(
        "unsupported dimension: requires odd n >= 5 (even n hits vanishing "
        "denominators in the series machinery)");
  }
  DimensionConstants dc;
  dc.n = n;
  dc.c_n = static_cast<double>(n) * (n - 2);
  dc.omega = sphere_area(n);
  dc.s_n = dc.omega * 0.5 * beta_fn(0.5 * n, 0.5 * n);
  dc.c1 = dc.omega * 0.5 * beta_fn(0.5 * n, 1.0);
  dc.c2 = dc.omega * 0.5 * beta_fn(0.5 * (n + 2), 0.5 * (n - 2));
  dc.c3 = dc.omega * 0.5 * beta_fn(0.5 * n, 0.5 * (n - 4));
  dc.sobolev = dc.c_n * std::pow(dc.s_n, 2.0 / n);
  dc.beta = dc.c3 / (dc.c_n * dc.s_n);

  const int kmax = (n - 2) / 2;
  if (kmax >= 2) {
    dc.a.assign(kmax + 1, 0.0);
    const double alpha = static_cast<double>(n) / (n - 2);
    for (int k = 2; k <= kmax; ++k) {
      dc.a[k] = generalized_binomial(alpha, k) * std::pow(-dc.beta, k);
    }
  }

  if (cross_check) {
    const double nd = n;
    dc.s_n_check = detail::radial_cross_check(
        [nd](double r) { return std::pow(1.0 + r * r, -nd); }, n, dc.s_n, tol);
    dc.c1_check = detail::radial_cross_check(
        [nd](double r) { return std::pow(1.0 + r * r, -0.5 * (nd + 2.0)); }, n,
        dc.c1, tol);
    dc.c2_check = detail::radial_cross_check(
        [nd](double r) { return r * r * std::pow(1.0 + r * r, -nd); }, n,
        dc.c2, tol);
    dc.c3_check = detail::radial_cross_check(
        [nd](double r) { return std::pow(1.0 + r * r, -(nd - 2.0)); }, n,
        dc.c3, tol);
  }
  return dc;
}

// Taylor coefficients alone (closed forms, no quadrature pass).
inline std::vector<double> taylor_coeffs(int n) {
  return dimension_constants(n, 1e-10, false).a;
}

}  // namespace critex
