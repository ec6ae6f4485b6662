#include <cmath>

#include "doctest.h"
#include "rpsemi/specfun.hpp"

using namespace rpsemi::specfun;

TEST_CASE("trigamma matches classical values") {
  CHECK(trigamma(1.0) == doctest::Approx(kZeta2).epsilon(1e-14));
  CHECK(trigamma(2.0) == doctest::Approx(kZeta2 - 1.0).epsilon(1e-14));
  CHECK(trigamma(0.5) == doctest::Approx(4.9348022005446793094).epsilon(1e-14));
  CHECK(trigamma(10.0) == doctest::Approx(0.10516633568168574612).epsilon(1e-14));
}

TEST_CASE("trigamma satisfies its recurrence") {
  for (double x : {0.3, 1.7, 4.2, 25.0, 400.0}) {
    CHECK(trigamma(x) ==
          doctest::Approx(trigamma(x + 1.0) + 1.0 / (x * x)).epsilon(1e-13));
  }
}

TEST_CASE("dilogarithm on [0,1]") {
  CHECK(dilog(0.0) == 0.0);
  CHECK(dilog(1.0) == doctest::Approx(kZeta2).epsilon(1e-15));
  CHECK(dilog(0.25) == doctest::Approx(0.26765263908273260692).epsilon(1e-14));
  CHECK(dilog(0.5) == doctest::Approx(kZeta2 / 2.0 -
                                      0.5 * std::log(2.0) * std::log(2.0))
                          .epsilon(1e-14));
  CHECK(dilog(0.9) == doctest::Approx(1.2997147230049587252).epsilon(1e-14));
}

TEST_CASE("regularized incomplete gamma and the chi-square tails") {
  CHECK(gamma_p(1.0, 0.0) == doctest::Approx(0.0));
  CHECK(gamma_p(2.5, 1e8) == doctest::Approx(1.0).epsilon(1e-12));
  for (double a : {0.5, 1.0, 3.5, 12.0}) {
    for (double x : {0.1, 1.0, 4.0, 20.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // Cross-checked chi-square cdf values.
  CHECK(chi_square_cdf(9.26, 23.0) == doctest::Approx(0.0049983038).epsilon(1e-7));
  CHECK(chi_square_cdf(38.932, 21.0) == doctest::Approx(0.9899995257).epsilon(1e-7));
  CHECK(chi_square_cdf(96.578, 80.0) == doctest::Approx(0.8999975076).epsilon(1e-7));
  CHECK(chi_square_cdf(70.065, 100.0) == doctest::Approx(0.0100002518).epsilon(1e-7));
  CHECK(chi_square_cdf(3.841458820694124, 1.0) == doctest::Approx(0.95).epsilon(1e-10));
  CHECK(chi_square_cdf(0.5, 3.0) == doctest::Approx(0.0811085883).epsilon(1e-7));
  CHECK(chi_square_sf(0.5, 3.0) == doctest::Approx(1.0 - 0.0811085883).epsilon(1e-7));
}

TEST_CASE("Gauss-Legendre nodes integrate polynomials and smooth functions") {
  const auto nodes = gauss_legendre(32);
  REQUIRE(nodes.size() == 32);
  double wsum = 0.0;
  for (const QuadNode& q : nodes) {
    wsum += q.w;
    CHECK(std::abs(q.x) < 1.0);
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  const double cubic = integrate([](double x) { return x * x * x; }, 0.0, 1.0);
  CHECK(cubic == doctest::Approx(0.25).epsilon(1e-14));
  const double expint = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(expint == doctest::Approx(1.7182818284590452354).epsilon(1e-14));
}
