#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "critex/bubble.hpp"
#include "critex/pohozaev.hpp"
#include "critex/problem.hpp"
#include "critex/shoot.hpp"

using critex::find_ground_state;
using critex::identity_multiplier;
using critex::integrate_profile;
using critex::intermediate_checks;
using critex::KSpec;
using critex::make_problem;
using critex::make_psibar;
using critex::pohozaev_sides;
using critex::psibar_multiplier;
using critex::radial_profile;

namespace {

const std::vector<double> center5(5, 0.0);

}  // namespace

TEST_CASE("profile start matches the series through the matching point") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 4.0);
  const auto sol = radial_profile(spec, 2.0, 1e-4);
  CHECK(sol.eps == 1e-4);

  // value/slope are continuous across the series-to-solver seam
  const double below = sol.value(sol.eps * (1.0 - 1e-12));
  const double above = sol.value(sol.eps * (1.0 + 1e-12));
  CHECK(below == Catch::Approx(above).epsilon(1e-10));
  CHECK(sol.slope(0.0) == 0.0);
  CHECK(sol.value(0.0) == 2.0);

  // curvature carries K(0) alpha^{(n+2)/(n-2)} + mu alpha over 2n
  const double q = 7.0 / 3.0;
  CHECK(sol.curvature ==
        Catch::Approx((std::pow(2.0, q) + 4.0 * 2.0) / 10.0).epsilon(1e-14));
}

TEST_CASE("amplitude and matching-point validation") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 1.0);
  CHECK_THROWS_AS(radial_profile(spec, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(radial_profile(spec, -3.0), std::invalid_argument);
  CHECK_THROWS_AS(radial_profile(spec, 1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(integrate_profile(spec, 1.0, 0.0, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_ground_state(spec, -1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(find_ground_state(spec, 5.0, 2.0), std::invalid_argument);
}

TEST_CASE("zero-coupling trajectories ride the closed-form bubble") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 0.0);
  const double lambda = 5.0;
  const double alpha = critex::bubble_radial(5, 0.0, lambda);
  const auto sol = radial_profile(spec, alpha);

  // core agreement, relative to the local bubble height
  for (int i = 0; i <= 32; ++i) {
    const double t = (0.5 / lambda) * i / 32.0;
    const double want = critex::bubble_radial(5, t, lambda);
    CHECK(sol.value(t) == Catch::Approx(want).epsilon(1e-6));
  }
  // the exact solution continues to hold across the whole ball
  CHECK(sol.value(0.9) ==
        Catch::Approx(critex::bubble_radial(5, 0.9, lambda)).epsilon(1e-6));
  CHECK(sol.residual <= 1e-6);
}

TEST_CASE("matching-point halving leaves the boundary value unchanged") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 5.0);
  const auto coarse = radial_profile(spec, 2.0, 1e-4);
  const auto fine = radial_profile(spec, 2.0, 5e-5);
  CHECK(std::fabs(coarse.value(1.0) - fine.value(1.0)) <= 1e-8);
}

TEST_CASE("small amplitudes stay positive below the first eigenvalue") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 16.0);
  const auto shot = integrate_profile(spec, 1e-8);
  CHECK_FALSE(shot.crossed);
  CHECK(shot.u_end > 0.0);

  // past the boundary the linear regime crosses at the Bessel zero of the
  // eigenvalue equation: j_{3/2,1}/sqrt(mu)
  const auto extended = integrate_profile(spec, 1e-6, 0.0, 2.0);
  CHECK(extended.crossed);
  CHECK(extended.crossing_time ==
        Catch::Approx(1.1233523644772661).margin(1e-6));
}

TEST_CASE("strong-coupling ground state passes every gate") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 10.0);
  const auto search = find_ground_state(spec);
  REQUIRE(search.found);
  CHECK(search.brackets.size() == 1);

  const auto& u = search.solution;
  CHECK(u.alpha == Catch::Approx(19.2915164297245).epsilon(1e-9));
  CHECK(u.boundary_defect <= 1e-9);
  CHECK(u.residual <= 1e-6);
  CHECK(u.slope(1.0) < 0.0);

  // positivity on [0, 1 - 1e-6]
  double umin = u.alpha;
  for (int i = 0; i <= 2000; ++i) {
    const double t = (1.0 - 1e-6) * i / 2000.0;
    umin = std::min(umin, u.value(t));
  }
  CHECK(umin > 0.0);

  // balance handshake, linear multiplier: the source side vanishes for a
  // flat profile and the boundary flux offsets the mass term
  const auto id = pohozaev_sides(u, identity_multiplier(spec.mu), spec);
  CHECK(id.rhs == 0.0);
  CHECK(id.boundary_warning.empty());
  const double flux = 0.5 * u.slope(1.0) * u.slope(1.0);
  const double mass = id.lhs + flux;  // mu int u^2 t^{n-1}
  CHECK(std::fabs(id.difference) <= 1e-5 * (flux + std::fabs(mass)));

  // balance handshake, combined multiplier (raw seeds: the certified build
  // does not exist this far up in the coupling)
  const auto bar = make_psibar(5, spec.mu, 1.0, -1.0);
  const auto pb = pohozaev_sides(u, psibar_multiplier(bar), spec);
  CHECK(std::fabs(pb.difference) <=
        1e-5 * (std::fabs(pb.lhs) + std::fabs(pb.rhs)));

  // the assembled identities hold side by side as well
  const auto ic = intermediate_checks(u, identity_multiplier(spec.mu), spec);
  CHECK(std::fabs(ic.flux_residual) <=
        1e-6 * (std::fabs(ic.flux_lhs) + std::fabs(ic.flux_rhs)));
  CHECK(std::fabs(ic.weight_residual) <=
        1e-6 * (std::fabs(ic.weight_lhs) + std::fabs(ic.weight_rhs)));
}

TEST_CASE("zero coupling admits no ground state") {
  const auto spec = make_problem(5, center5, KSpec::constant(1.0), 0.0);
  const auto search = find_ground_state(spec);
  CHECK_FALSE(search.found);
  CHECK(search.brackets.empty());
  CHECK(search.sweep.size() >= 25);
  CHECK_THAT(search.message,
             Catch::Matchers::ContainsSubstring("no boundary zero"));
  for (const auto& pt : search.sweep) CHECK(pt.score > 0.0);
}

TEST_CASE("certified nonexistence window has no ground state either") {
  const auto spec =
      make_problem(5, center5, KSpec::builtin(1.0, 0.05, "neg_t2"), 0.0375);
  const auto search = find_ground_state(spec);
  CHECK_FALSE(search.found);
  CHECK(search.brackets.empty());
  for (const auto& pt : search.sweep) {
    CHECK_FALSE(pt.crossed);
    CHECK(pt.score > 0.0);
  }
}
