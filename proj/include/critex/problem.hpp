#pragma once
// Problem description: the perturbation profile K = f0 + eta f1(|x - y0|),
// the admissible parameter checks, and the assembled problem specification
// shared by the energy, criterion, certification, and shooting modules.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "critex/constants.hpp"
#include "critex/green.hpp"
#include "critex/numerics.hpp"

namespace critex {

// near-center flatness data: |f1(t) - (1/2) f1''(0) t^2| <= m0 t^{n-2}
// for t <= delta
struct K3Data {
  double delta = 0.0;
  double m0 = 0.0;
};

// K(x) = f0 + eta * f1(|x - y0|), with f1(0) = 0, f1'(0) = 0 and f1
// non-increasing on [0, 1]; eta >= 0 and K >= 0 on the closed ball.
class KSpec {
 public:
  enum class Kind { poly, builtin_neg_t2 };

  double f0 = 1.0;
  double eta = 0.0;
  Kind kind = Kind::poly;
  std::vector<double> coeffs;  // coeffs[j] multiplies t^{j+2}
  std::optional<K3Data> k3;

  // f1(t) = sum_j coeffs[j] t^{j+2}
  static KSpec polynomial(double f0, double eta, std::vector<double> coeffs,
                          std::optional<K3Data> k3 = std::nullopt) {
    KSpec k;
    k.f0 = f0;
    k.eta = eta;
    k.kind = Kind::poly;
    k.coeffs = std::move(coeffs);
    k.k3 = k3;
    k.validate();
    return k;
  }

  static KSpec builtin(double f0, double eta, const std::string& name,
                       std::optional<K3Data> k3 = std::nullopt) {
    if (name != "neg_t2") {
      throw std::invalid_argument("unknown builtin profile: " + name);
    }
    KSpec k;
    k.f0 = f0;
    k.eta = eta;
    k.kind = Kind::builtin_neg_t2;
    k.k3 = k3;
    k.validate();
    return k;
  }

  static KSpec constant(double f0) { return polynomial(f0, 0.0, {}); }

  double f1(double t) const {
    if (kind == Kind::builtin_neg_t2) return -t * t;
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * t + coeffs[j];
    return v * t * t;
  }

  double f1_prime(double t) const {
    if (kind == Kind::builtin_neg_t2) return -2.0 * t;
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;)
      v = v * t + (static_cast<double>(j) + 2.0) * coeffs[j];
    return v * t;
  }

  double f1_pp0() const {
    if (kind == Kind::builtin_neg_t2) return -2.0;
    return coeffs.empty() ? 0.0 : 2.0 * coeffs[0];
  }

  // f1'(t)/t, finite down to t = 0 (f1' vanishes linearly there)
  double f1_prime_over_t(double t) const {
    if (kind == Kind::builtin_neg_t2) return -2.0;
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;)
      v = v * t + (static_cast<double>(j) + 2.0) * coeffs[j];
    return v;
  }

  // f1 minus its quadratic Taylor part at 0 (exact term drop, no
  // cancellation)
  double f1_remainder(double t) const {
    if (kind == Kind::builtin_neg_t2) return 0.0;
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 1;) v = v * t + coeffs[j];
    return v * t * t * t;
  }

  double value(double t) const { return f0 + eta * f1(t); }
  double derivative(double t) const { return eta * f1_prime(t); }
  double laplacian_center(int n) const { return n * eta * f1_pp0(); }

  // flatness near the center: no terms of degree 3..n-3 (degree 2 feeds the
  // Laplacian, degrees >= n-2 are absorbed by the boundary-order remainder)
  bool k3_satisfied(int n) const {
    if (k3.has_value()) return true;
    if (kind == Kind::builtin_neg_t2) return true;
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
      const int degree = static_cast<int>(j) + 2;
      if (degree <= n - 3 && coeffs[j] != 0.0) return false;
    }
    return true;
  }

  std::string k3_violation(int n) const {
    if (k3_satisfied(n)) return {};
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
      const int degree = static_cast<int>(j) + 2;
      if (degree <= n - 3 && coeffs[j] != 0.0) {
        return "profile term of degree " + std::to_string(degree) +
               " violates the near-center flatness condition";
      }
    }
    return {};
  }

 private:
  void validate() const {
    if (!(f0 > 0.0)) throw std::invalid_argument("K.f0 must be positive");
    if (!(eta >= 0.0)) throw std::invalid_argument("K.eta must be nonnegative");
    // monotonicity on a fixed grid; the profiles are low-degree polynomials
    // so a dense sample is a faithful check
    for (int i = 0; i <= 512; ++i) {
      const double t = static_cast<double>(i) / 512.0;
      if (f1_prime(t) > 1e-12) {
        throw std::invalid_argument("K.f1 must be non-increasing on [0,1]");
      }
    }
    if (value(1.0) < 0.0) {
      throw std::invalid_argument("K must be nonnegative on the closed ball");
    }
  }
};

// First Dirichlet eigenvalue of -Delta on the unit ball in R^n: the square
// of the first zero of the radial profile solving w'' + ((n-1)/t) w' + w = 0
// with w(0) = 1 (a normalized Bessel function).
inline double ball_first_eigenvalue(int n) {
  if (n < 2) throw std::invalid_argument("ball_first_eigenvalue requires n >= 2");
  const double eps = 1e-7;
  auto field = [n](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
    dy[0] = y[1];
    dy[1] = -(n - 1.0) / t * y[1] - y[0];
  };
  IvpOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  opt.event_component = 0;
  auto traj = solve_ivp(field, eps,
                        {1.0 - eps * eps / (2.0 * n), -eps / n},
                        static_cast<double>(n) + 6.0, opt);
  if (traj.status != IvpStatus::event) {
    throw std::runtime_error("first eigenvalue localization failed");
  }
  return traj.event_time * traj.event_time;
}

struct ProblemSpec {
  DimensionConstants consts;
  BallGeometry geom;
  KSpec k;
  double mu = 0.0;
  double mu1 = 0.0;
  double quad_tol = 1e-8;  // energy-integral tolerance (scale-relative)
  double ode_tol = 1e-10;
};

// Validates and assembles a problem. mu = 0 is admitted for the diagnostic
// solvers (shooting, energy curves); the theorem-facing checks require
// mu > 0 and enforce it themselves.
inline ProblemSpec make_problem(int n, const std::vector<double>& y0,
                                const KSpec& k, double mu) {
  ProblemSpec spec{dimension_constants(n, 1e-10, false),
                   ball_geometry(n, y0), k, mu, 0.0};
  spec.mu1 = ball_first_eigenvalue(n);
  if (!(mu >= 0.0) || !(mu < spec.mu1)) {
    throw std::invalid_argument(
        "mu out of admissible range [0, mu1), mu1 = " +
        std::to_string(spec.mu1));
  }
  return spec;
}

}  // namespace critex
