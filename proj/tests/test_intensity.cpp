#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rpsemi/intensity.hpp"

using namespace rpsemi;

TEST_CASE("rate families evaluate as declared") {
  const auto lin = IntensityModel::linear(1.0);
  CHECK(lin.rate(1) == 1.0);
  CHECK(lin.rate(7) == 7.0);
  CHECK_THROWS_AS(lin.rate(0), std::invalid_argument);

  const auto pow2 = IntensityModel::power(2.0, 3.0);
  CHECK(pow2.rate(4) == doctest::Approx(48.0));

  const auto tab = IntensityModel::table({2.0, 5.0}, RateRule::linear(1.0));
  CHECK(tab.rate(1) == 2.0);
  CHECK(tab.rate(2) == 5.0);
  CHECK(tab.rate(3) == 3.0);  // analytic tail resumes at its own index
}

TEST_CASE("summability condition accepts growth and rejects flat families") {
  CHECK(IntensityModel::linear(0.5).check_condition2().passes);
  CHECK(IntensityModel::power(1.5, 1.0).check_condition2().passes);
  const auto flat = IntensityModel::table({1.0}, RateRule::constant(1.0));
  CHECK_FALSE(flat.check_condition2().passes);
  const auto slow = IntensityModel::table({1.0}, RateRule::logarithmic(1.0));
  CHECK_FALSE(slow.check_condition2().passes);
}

TEST_CASE("truncation indices match independently computed values") {
  const auto lin = IntensityModel::linear(1.0);
  CHECK(lin.truncation_index(1.0, 1e-3) == 7);
  CHECK(lin.truncation_index(0.1, 1e-6) == 161);
  CHECK(lin.truncation_index(0.1, 1e-9) == 230);
  CHECK(lin.truncation_index(0.5, 1e-9) == 43);
  CHECK(lin.truncation_index(1.0, 1e-9) == 21);
  CHECK(lin.truncation_index(0.01, 1e-9) == 2533);
  CHECK(lin.survivor_tail_bound(lin.truncation_index(0.2, 1e-9), 0.2) <= 1e-9);
  CHECK_THROWS_AS(lin.truncation_index(0.0, 1e-9), std::invalid_argument);

  const auto flat = IntensityModel::table({1.0}, RateRule::constant(1.0));
  CHECK_THROWS_AS(flat.truncation_index(0.1, 1e-9), std::domain_error);
}

TEST_CASE("expected dimension sums") {
  const auto lin = IntensityModel::linear(1.0);
  CHECK(lin.expected_alpha(1.0) ==
        doctest::Approx(0.58197670686932642439).epsilon(1e-12));
  CHECK(lin.expected_alpha(0.5) ==
        doctest::Approx(1.5414940825367982841).epsilon(1e-12));
  CHECK(lin.expected_alpha(0.1) == doctest::Approx(9.50833194477505).epsilon(1e-12));
  CHECK(lin.expected_alpha_truncated(1.0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(lin.expected_alpha_truncated(0.5, 43) ==
        doctest::Approx(1.5414940818278575).epsilon(1e-12));
}

TEST_CASE("intensity parsing round-trips and rejects junk") {
  CHECK(parse_intensity("linear:2.0").rate(3) == doctest::Approx(6.0));
  CHECK(parse_intensity("power:2:1.0").rate(3) == doctest::Approx(9.0));
  CHECK(parse_intensity("linear:0.25").linear_scale().value() == doctest::Approx(0.25));
  CHECK(parse_intensity("linear:1.0").is_default_linear());
  CHECK_FALSE(parse_intensity("linear:2.0").is_default_linear());
  CHECK_THROWS_AS(parse_intensity("linear:-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_intensity("linear:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_intensity("cubic:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_intensity(""), std::invalid_argument);
}
