#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rpsemi/mc.hpp"
#include "rpsemi/specfun.hpp"
#include "rpsemi/widths.hpp"

using namespace rpsemi;

namespace {

ExperimentSpec base_spec(Quantity q, std::vector<double> grid, std::uint64_t paths,
                         std::uint64_t seed) {
  ExperimentSpec spec;
  spec.quantity = q;
  spec.t_grid = std::move(grid);
  spec.paths = paths;
  spec.master_seed = seed;
  spec.workers = 1;
  return spec;
}

}  // namespace

TEST_CASE("per-path streams are a pure function of (seed, path)") {
  RngStream a = derive_path_stream(42, 1000);
  RngStream b = derive_path_stream(42, 1000);
  RngStream c = derive_path_stream(42, 1001);
  bool same = true, differ = false;
  for (int i = 0; i < 512; ++i) {
    const std::uint64_t ua = a.next_u64();
    same = same && (ua == b.next_u64());
    differ = differ || (ua != c.next_u64());
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("experiment validation") {
  CHECK_THROWS_AS(run_experiment(base_spec(Quantity::width_diag, {0.1}, 0, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(base_spec(Quantity::width_diag, {}, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(base_spec(Quantity::width_diag, {0.5, 0.1}, 10, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(base_spec(Quantity::width_diag, {0.0, 0.1}, 10, 1)),
                  std::invalid_argument);
  ExperimentSpec bad_eps = base_spec(Quantity::width_diag, {0.1}, 10, 1);
  bad_eps.trunc_eps = 0.0;
  CHECK_THROWS_AS(run_experiment(bad_eps), std::invalid_argument);
}

TEST_CASE("zero truncation collapses to the deterministic tail") {
  // With no clocks simulated, every diagonal path is the full tail mass
  // (= zeta(2)) and every ellipsoid path is censored at value 0.
  ExperimentSpec diag = base_spec(Quantity::width_diag, {0.3}, 64, 5);
  diag.trunc_override = 0;
  const auto rd = run_experiment(diag);
  REQUIRE(rd.size() == 1);
  CHECK(rd[0].mean == doctest::Approx(specfun::kZeta2).epsilon(1e-13));
  CHECK(rd[0].variance == doctest::Approx(0.0).scale(1.0).epsilon(1e-20));

  ExperimentSpec ell = base_spec(Quantity::width_ellipsoid, {0.3}, 64, 5);
  ell.trunc_override = 0;
  const auto re = run_experiment(ell);
  CHECK(re[0].mean == 0.0);
  CHECK(re[0].censored_fraction == 1.0);
}

TEST_CASE("ellipsoid censoring accounting at a forced small truncation") {
  // P{no kill among clocks 1..5 by t} = exp(-t * 15); t = 0.05 gives e^{-0.75}.
  ExperimentSpec spec = base_spec(Quantity::width_ellipsoid, {0.05}, 20000, 11);
  spec.trunc_override = 5;
  const auto r = run_experiment(spec);
  const double p = 0.47236655274101470714;
  const double se = std::sqrt(p * (1.0 - p) / 20000.0);
  CHECK(std::abs(r[0].censored_fraction - p) <= 3.0 * se);
}

TEST_CASE("diagonal estimator agrees with the closed form") {
  const auto r = run_experiment(base_spec(Quantity::width_diag, {0.1, 1.0}, 40000, 21));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0].mean - 0.3327446211048814) <= 3.0 * r[0].std_error);
  CHECK(std::abs(r[1].mean - 1.2361797794993302) <= 3.0 * r[1].std_error);
  CHECK(r[0].std_error > 0.0);
  CHECK(r[0].ci95_lo < r[0].mean);
  CHECK(r[0].ci95_hi > r[0].mean);
  CHECK(r[0].n_paths == 40000);
}

TEST_CASE("alpha estimator agrees with the survivor series") {
  const auto r = run_experiment(base_spec(Quantity::alpha, {1.0}, 40000, 33));
  const auto model = IntensityModel::linear(1.0);
  const std::uint64_t trunc = model.truncation_index(1.0, 1e-9);
  CHECK(std::abs(r[0].mean - model.expected_alpha_truncated(1.0, trunc)) <=
        3.0 * r[0].std_error);
}

TEST_CASE("worker count never changes the estimates") {
  for (Quantity q : {Quantity::width_diag, Quantity::width_ellipsoid, Quantity::alpha}) {
    ExperimentSpec one = base_spec(q, {0.2, 0.7}, 12000, 77);
    ExperimentSpec four = one;
    four.workers = 4;
    const auto a = run_experiment(one);
    const auto b = run_experiment(four);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].mean == b[i].mean);
      CHECK(a[i].variance == b[i].variance);
      CHECK(a[i].std_error == b[i].std_error);
      CHECK(a[i].censored_fraction == b[i].censored_fraction);
    }
  }
}

TEST_CASE("chi-square harness: validation and merging") {
  const std::vector<std::uint64_t> counts = {10, 20, 30};
  const std::vector<double> bad_prob = {0.2, 0.2, 0.2};
  CHECK_THROWS_AS(chi_square_gof(counts, bad_prob), std::invalid_argument);
  const std::vector<double> short_prob = {0.5, 0.5};
  CHECK_THROWS_AS(chi_square_gof(counts, short_prob), std::invalid_argument);

  // All mass in one cell: merging leaves a single bin, which is rejected.
  const std::vector<std::uint64_t> one_cell = {100, 0};
  const std::vector<double> degenerate = {1.0 - 1e-12, 1e-12};
  CHECK_THROWS_AS(chi_square_gof(one_cell, degenerate), std::invalid_argument);

  // Uniform counts over a uniform law: statistic 0, p-value 1.
  const std::vector<std::uint64_t> uniform = {25, 25, 25, 25};
  const std::vector<double> quarter = {0.25, 0.25, 0.25, 0.25};
  const GofReport g = chi_square_gof(uniform, quarter);
  CHECK(g.statistic == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(g.df == 3);
  CHECK(g.p_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.pass);

  // Tiny expected tail counts merge leftwards.
  const std::vector<std::uint64_t> tail = {50, 49, 1};
  const std::vector<double> tail_prob = {0.5, 0.49, 0.01};
  const GofReport m = chi_square_gof(tail, tail_prob);
  CHECK(m.bins == 2);
  CHECK(m.df == 1);
}

TEST_CASE("compare_to_law: calibration and power") {
  DiscreteLaw law;
  law.support = {0.0, 1.0, 2.0, 3.0};
  law.prob = {0.4, 0.3, 0.2, 0.1};

  int passes = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(900 + seed, 0);
    std::vector<double> samples(20000);
    for (double& s : samples) {
      const double u = rng.next_uniform01();
      s = u < 0.4 ? 0.0 : (u < 0.7 ? 1.0 : (u < 0.9 ? 2.0 : 3.0));
    }
    if (compare_to_law(samples, law).pass) ++passes;
  }
  CHECK(passes >= 47);  // significance 0.01, so ~0.5 expected failures

  // A visibly shifted law must be rejected every time.
  DiscreteLaw shifted = law;
  shifted.prob = {0.1, 0.2, 0.3, 0.4};
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(900 + seed, 0);
    std::vector<double> samples(20000);
    for (double& s : samples) {
      const double u = rng.next_uniform01();
      s = u < 0.4 ? 0.0 : (u < 0.7 ? 1.0 : (u < 0.9 ? 2.0 : 3.0));
    }
    if (!compare_to_law(samples, shifted).pass) ++rejected;
  }
  CHECK(rejected == 10);

  const std::vector<double> off_support = {0.0, 1.0, 2.5};
  CHECK_THROWS_AS(compare_to_law(off_support, law), std::invalid_argument);
  DiscreteLaw dup;
  dup.support = {1.0, 1.0};
  dup.prob = {0.5, 0.5};
  const std::vector<double> ones = {1.0, 1.0};
  CHECK_THROWS_AS(compare_to_law(ones, dup), std::invalid_argument);
}
