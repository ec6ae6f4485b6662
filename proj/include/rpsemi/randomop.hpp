#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rpsemi/rng.hpp"

namespace rpsemi {

// Jump times of a rate-`rate` Poisson process restricted to (0,1); the nu+1
// gaps between consecutive cuts partition [0,1].
struct PoissonPartition {
  double rate = 0.0;
  std::vector<double> cuts;  // strictly increasing, inside (0,1)
};

PoissonPartition sample_partition(double rate, RngStream& rng);

// Conditional-expectation projection represented exactly on the step-function
// space of a uniform m-grid refined by the partition cuts. Entries average
// cell values over each partition interval with cell-length weights.
struct GridProjectionMatrix {
  std::vector<double> grid;     // breakpoints, size cells+1, grid[0]=0, back=1
  std::vector<double> weights;  // cell lengths
  std::vector<double> matrix;   // row-major, cells x cells
  std::size_t rank = 0;         // number of partition intervals (nu+1)

  std::size_t cells() const { return weights.size(); }
  double at(std::size_t i, std::size_t j) const { return matrix[i * cells() + j]; }
};

GridProjectionMatrix condexp_matrix(const PoissonPartition& partition,
                                    std::size_t base_grid);

std::vector<double> apply_matrix(const GridProjectionMatrix& op,
                                 std::span<const double> cell_values);

// Partial sums sum_{j<=K} ||A e_j||^2 over the orthonormal basis of normalized
// cell indicators, computed from the matrix entries in the weighted inner
// product. The full sum equals the rank.
std::vector<double> hs_sum_basis(const GridProjectionMatrix& op, std::size_t K);

enum class TestFamily { constant, linear, rademacher };

// Point-evaluation functional Phi(f) = f(theta), theta ~ uniform(0,1).
// nonvanishing_fraction counts |Phi| >= 1/2; for the Rademacher family it is
// exactly 1, which is the non-convergence demonstration (the values never
// approach 0 although the functions converge weakly).
struct PointEvalReport {
  std::uint64_t trials = 0;
  double second_moment_estimate = 0.0;
  double second_moment_stderr = 0.0;
  double l2_norm_sq = 0.0;  // integral of f^2, the exact target
  double nonvanishing_fraction = 0.0;
};

// For the rademacher family n is both the family size and the trial count;
// binary digits of theta are drawn as i.i.d. fair bits so families larger
// than the double mantissa stay exact in distribution.
PointEvalReport point_eval_demo(TestFamily family, std::uint64_t n, RngStream& rng);

}  // namespace rpsemi
