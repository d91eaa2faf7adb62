#pragma once
// Green's function of the unit ball and the concentration-point constants
// built from it: the exterior tail integral, the interior correction
// integral, and the combined boundary-interaction coefficient entering the
// energy expansion at order lambda^{2-n}.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "critex/constants.hpp"
#include "critex/numerics.hpp"

namespace critex {

struct BallGeometry {
  int n = 0;
  std::vector<double> y0;
  double d = 0.0;   // |y0|
  double d0 = 0.0;  // 1 - |y0|, distance to the boundary
};

inline BallGeometry ball_geometry(int n, std::vector<double> y0) {
  if (n < 5) {
    throw std::invalid_argument(
        "unsupported dimension: the ball geometry requires n >= 5");
  }
  if (y0.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("y0 must have exactly n components");
  }
  double d2 = 0.0;
  for (double v : y0) d2 += v * v;
  const double d = std::sqrt(d2);
  if (!(d < 1.0)) {
    throw std::invalid_argument("y0 must lie inside the open unit ball");
  }
  return {n, std::move(y0), d, 1.0 - d};
}

// Regular part of the Green's function of -Delta on the unit ball (up to the
// usual normalization): H(y, x) = (|x|^2 |y|^2 - 2 <x,y> + 1)^{(2-n)/2}.
// On the boundary |x| = 1 this equals |x - y|^{2-n}, cancelling the
// singular part.
inline double regular_part(int n, const std::vector<double>& y,
                           const std::vector<double>& x) {
  if (y.size() != x.size()) {
    throw std::invalid_argument("regular_part requires matching dimensions");
  }
  double x2 = 0.0, y2 = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x2 += x[i] * x[i];
    y2 += y[i] * y[i];
    xy += x[i] * y[i];
  }
  const double q = x2 * y2 - 2.0 * xy + 1.0;
  if (!(q > 0.0)) {
    throw std::domain_error("regular_part evaluated at a singular pair");
  }
  return std::pow(q, 0.5 * (2 - n));
}

// H(y0, y0) = (1 - |y0|^2)^{2-n}
inline double regular_part_self(const BallGeometry& g) {
  return std::pow(1.0 - g.d * g.d, 2.0 - g.n);
}

struct GeometryConstants {
  double c5bb = 0.0;       // int_{|x|>1} |x-y0|^{2(2-n)} dx
  double c5bb_error = 0.0;
  double c6b = 0.0;         // c5bb + int_B [2 H(y0,x)|x-y0|^{2-n} - H(y0,x)^2] dx
  double c6b_error = 0.0;
  double c4b = 0.0;         // -c1 H(y0,y0) + mu c6b / c_n
  double h_self = 0.0;
  long evaluations = 0;
};

namespace detail {

// inner radial integrals in axisymmetric coordinates about the origin, with
// the concentration point at distance d along the axis and cos(theta) = c

// exterior: substitute rho = 1/s so the tail maps to s in (0, 1]
template <class Acc>
double exterior_inner(int n, double d, double c, double tol, Acc&& acc) {
  auto f = [n, d, c](double s) {
    const double q = 1.0 - 2.0 * d * s * c + d * d * s * s;
    return std::pow(s, n - 5) * std::pow(q, 2.0 - n);
  };
  auto r = integrate_interval(f, 0.0, 1.0, tol);
  acc(r);
  return r.value;
}

// int_B H(y0,x) |x-y0|^{2-n} dx in spherical coordinates centered at y0:
// the volume element cancels the singular kernel, leaving H * rho. The
// angle phi is measured from the y0 axis; the ray hits the sphere at
// R(phi) = -d cos(phi) + sqrt(1 - d^2 sin^2(phi)).
template <class Acc>
double interior_singular_inner(int n, double d, double cphi, double tol,
                               Acc&& acc) {
  const double s2 = 1.0 - cphi * cphi;
  const double rmax = -d * cphi + std::sqrt(1.0 - d * d * s2);
  auto f = [n, d, cphi](double rho) {
    const double x2 = d * d + 2.0 * rho * d * cphi + rho * rho;
    const double q = x2 * d * d - 2.0 * (d * d + rho * d * cphi) + 1.0;
    return std::pow(q, 0.5 * (2 - n)) * rho;
  };
  auto r = integrate_interval(f, 0.0, rmax, tol);
  acc(r);
  return r.value;
}

// int_B H(y0,x)^2 dx in spherical coordinates about the origin (smooth)
template <class Acc>
double interior_square_inner(int n, double d, double c, double tol,
                             Acc&& acc) {
  auto f = [n, d, c](double rho) {
    const double q = rho * rho * d * d - 2.0 * rho * d * c + 1.0;
    return std::pow(q, 2.0 - n) * std::pow(rho, n - 1);
  };
  auto r = integrate_interval(f, 0.0, 1.0, tol);
  acc(r);
  return r.value;
}

}  // namespace detail

// Concentration-point constants for the ball. The radial fast path (d = 0)
// uses one-dimensional integrals; the generic path integrates in
// axisymmetric coordinates and is also used to validate the fast path.
inline GeometryConstants geometry_constants(const BallGeometry& g, double mu,
                                            const DimensionConstants& dc,
                                            double tol = 1e-8,
                                            bool force_generic = false) {
  if (g.n != dc.n) {
    throw std::invalid_argument("geometry and constants disagree on n");
  }
  const int n = g.n;
  GeometryConstants out;
  out.h_self = regular_part_self(g);

  long evals = 0;
  double err5 = 0.0, err6 = 0.0;
  auto acc5 = [&](const QuadratureResult& r) {
    if (r.status == QuadStatus::divergent) {
      throw std::runtime_error("geometry constant integral diverged");
    }
    evals += r.evaluations;
    err5 += r.error_estimate;
  };
  auto acc6 = [&](const QuadratureResult& r) {
    if (r.status == QuadStatus::divergent) {
      throw std::runtime_error("geometry constant integral diverged");
    }
    evals += r.evaluations;
    err6 += r.error_estimate;
  };

  if (g.d == 0.0 && !force_generic) {
    // H(0, x) = 1, so both integrals collapse to single radial ones
    const double ext = detail::exterior_inner(n, 0.0, 0.0, tol, acc5);
    out.c5bb = dc.omega * ext;
    out.c5bb_error = dc.omega * err5;

    auto f_int = [n](double rho) {
      return (2.0 * std::pow(rho, 2 - n) - 1.0) * std::pow(rho, n - 1);
    };
    auto ri = integrate_interval(f_int, 0.0, 1.0, tol);
    acc6(ri);
    out.c6b = dc.omega * ri.value + out.c5bb;
    out.c6b_error = dc.omega * err6 + out.c5bb_error;
  } else {
    const double omega_axis = sphere_area(n - 1);
    const double inner_tol = tol * 0.02;

    auto ext_outer = [&](double theta) {
      const double c = std::cos(theta);
      return std::pow(std::sin(theta), n - 2) *
             detail::exterior_inner(n, g.d, c, inner_tol, acc5);
    };
    auto re = integrate_interval(ext_outer, 0.0, M_PI, tol);
    acc5(re);
    out.c5bb = omega_axis * re.value;
    out.c5bb_error = omega_axis * err5;

    auto singular_outer = [&](double phi) {
      return std::pow(std::sin(phi), n - 2) *
             detail::interior_singular_inner(n, g.d, std::cos(phi), inner_tol,
                                             acc6);
    };
    auto square_outer = [&](double theta) {
      return std::pow(std::sin(theta), n - 2) *
             detail::interior_square_inner(n, g.d, std::cos(theta), inner_tol,
                                           acc6);
    };
    auto ra = integrate_interval(singular_outer, 0.0, M_PI, tol);
    auto rb = integrate_interval(square_outer, 0.0, M_PI, tol);
    acc6(ra);
    acc6(rb);
    out.c6b = omega_axis * (2.0 * ra.value - rb.value) + out.c5bb;
    out.c6b_error = omega_axis * err6 + out.c5bb_error;
  }

  out.c4b = -dc.c1 * out.h_self + mu * out.c6b / dc.c_n;
  out.evaluations = evals;
  return out;
}

}  // namespace critex
