#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "critex/gamma.hpp"

using critex::beta_fn;
using critex::gamma_fn;
using critex::ln_gamma;
using critex::sphere_area;

TEST_CASE("gamma matches factorials") {
  CHECK(gamma_fn(1.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(2.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == Catch::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(10.0) == Catch::Approx(362880.0).epsilon(1e-13));
  // 22! for the largest half-integer arguments used by the library
  CHECK(gamma_fn(23.0) == Catch::Approx(1.1240007277776077e21).epsilon(1e-13));
}

TEST_CASE("gamma at half-integers") {
  const double spi = std::sqrt(M_PI);
  CHECK(gamma_fn(0.5) == Catch::Approx(spi).epsilon(1e-14));
  CHECK(gamma_fn(1.5) == Catch::Approx(0.5 * spi).epsilon(1e-14));
  CHECK(gamma_fn(2.5) == Catch::Approx(0.75 * spi).epsilon(1e-14));
  CHECK(gamma_fn(11.5) ==
        Catch::Approx(1.1899423083962249e7).epsilon(1e-13));
}

TEST_CASE("ln_gamma consistent with gamma") {
  for (double x : {0.3, 0.7, 1.0, 1.7, 3.2, 8.5, 14.0, 23.5}) {
    CHECK(std::exp(ln_gamma(x)) == Catch::Approx(gamma_fn(x)).epsilon(1e-12));
  }
}

TEST_CASE("duplication formula") {
  const double spi = std::sqrt(M_PI);
  for (double x : {0.8, 3.7, 11.25}) {
    const double lhs = gamma_fn(2.0 * x);
    const double rhs =
        gamma_fn(x) * gamma_fn(x + 0.5) * std::pow(2.0, 2.0 * x - 1.0) / spi;
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("beta function") {
  CHECK(beta_fn(2.5, 0.5) == Catch::Approx(3.0 * M_PI / 8.0).epsilon(1e-13));
  CHECK(beta_fn(2.5, 2.5) == Catch::Approx(beta_fn(2.5, 2.5)));
  CHECK(beta_fn(4.0, 7.0) == Catch::Approx(beta_fn(7.0, 4.0)).epsilon(1e-14));
  CHECK(beta_fn(1.0, 9.5) == Catch::Approx(1.0 / 9.5).epsilon(1e-13));
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == Catch::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(3) == Catch::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(4) == Catch::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(sphere_area(5) ==
        Catch::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-13));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(ln_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(ln_gamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(beta_fn(1.0, -2.0), std::domain_error);
}
