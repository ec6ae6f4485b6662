#include "rpsemi/randomop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpsemi {

PoissonPartition sample_partition(double rate, RngStream& rng) {
  if (!(rate >= 0.0)) throw std::invalid_argument("sample_partition: rate must be >= 0");
  PoissonPartition part;
  part.rate = rate;
  if (rate == 0.0) return part;
  // Knuth's product-of-uniforms Poisson count, then order statistics:
  // conditioned on the count, jump times of a homogeneous process on (0,1)
  // are i.i.d. uniforms sorted.
  const double limit = std::exp(-rate);
  std::uint64_t nu = 0;
  double prod = rng.next_uniform01();
  while (prod > limit) {
    ++nu;
    prod *= rng.next_uniform01();
  }
  part.cuts.reserve(nu);
  for (std::uint64_t i = 0; i < nu; ++i) part.cuts.push_back(rng.next_uniform01());
  std::sort(part.cuts.begin(), part.cuts.end());
  part.cuts.erase(std::unique(part.cuts.begin(), part.cuts.end()), part.cuts.end());
  return part;
}

GridProjectionMatrix condexp_matrix(const PoissonPartition& partition,
                                    std::size_t base_grid) {
  if (base_grid == 0) throw std::invalid_argument("condexp_matrix: base grid must be >= 1");
  GridProjectionMatrix op;
  op.grid.reserve(base_grid + 1 + partition.cuts.size());
  for (std::size_t i = 0; i <= base_grid; ++i) {
    op.grid.push_back(static_cast<double>(i) / static_cast<double>(base_grid));
  }
  op.grid.insert(op.grid.end(), partition.cuts.begin(), partition.cuts.end());
  std::sort(op.grid.begin(), op.grid.end());
  op.grid.erase(std::unique(op.grid.begin(), op.grid.end()), op.grid.end());

  const std::size_t cells = op.grid.size() - 1;
  op.weights.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) op.weights[i] = op.grid[i + 1] - op.grid[i];

  // Cells never straddle cuts (cuts are grid points), so each cell belongs to
  // exactly one partition interval.
  std::vector<std::size_t> block(cells);
  std::vector<double> block_len;
  {
    std::size_t b = 0;
    double len = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      while (b < partition.cuts.size() && op.grid[i] >= partition.cuts[b]) {
        ++b;
        block_len.push_back(len);
        len = 0.0;
      }
      block[i] = block_len.size();
      len += op.weights[i];
    }
    block_len.push_back(len);
  }
  op.rank = block_len.size();

  op.matrix.assign(cells * cells, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double inv_len = 1.0 / block_len[block[i]];
    for (std::size_t j = 0; j < cells; ++j) {
      if (block[j] == block[i]) op.matrix[i * cells + j] = op.weights[j] * inv_len;
    }
  }
  return op;
}

std::vector<double> apply_matrix(const GridProjectionMatrix& op,
                                 std::span<const double> cell_values) {
  const std::size_t n = op.cells();
  if (cell_values.size() != n) {
    throw std::invalid_argument("apply_matrix: value vector length must equal cell count");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = op.matrix.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * cell_values[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> hs_sum_basis(const GridProjectionMatrix& op, std::size_t K) {
  const std::size_t n = op.cells();
  if (K == 0 || K > n) throw std::invalid_argument("hs_sum_basis: K must be in 1..cells");
  // ||A e_j||^2 in the weighted space with e_j = cell indicator / sqrt(w_j):
  // sum_i w_i M_ij^2 / w_j, evaluated from the matrix entries.
  std::vector<double> partial(K, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = op.at(i, j);
      norm_sq += op.weights[i] * m * m;
    }
    acc += norm_sq / op.weights[j];
    partial[j] = acc;
  }
  return partial;
}

PointEvalReport point_eval_demo(TestFamily family, std::uint64_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("point_eval_demo: n must be >= 1");
  PointEvalReport rep;
  rep.trials = n;
  switch (family) {
    case TestFamily::constant: {
      std::uint64_t nonvanishing = 0;
      double s1 = 0.0, s2 = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        (void)rng.next_uniform01();  // theta is drawn but f ignores it
        const double phi_sq = 1.0;
        s1 += phi_sq;
        s2 += phi_sq * phi_sq;
        ++nonvanishing;
      }
      rep.second_moment_estimate = s1 / static_cast<double>(n);
      rep.second_moment_stderr =
          n > 1 ? std::sqrt(std::max(0.0, (s2 - s1 * s1 / static_cast<double>(n)) /
                                              (static_cast<double>(n) - 1.0) /
                                              static_cast<double>(n)))
                : 0.0;
      rep.l2_norm_sq = 1.0;
      rep.nonvanishing_fraction = static_cast<double>(nonvanishing) / static_cast<double>(n);
      return rep;
    }
    case TestFamily::linear: {
      std::uint64_t nonvanishing = 0;
      double s1 = 0.0, c1 = 0.0, s2 = 0.0, c2 = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const double phi = 2.0 * rng.next_uniform01();
        const double phi_sq = phi * phi;
        double tt = s1 + phi_sq;
        c1 += (s1 >= phi_sq) ? (s1 - tt) + phi_sq : (phi_sq - tt) + s1;
        s1 = tt;
        const double phi4 = phi_sq * phi_sq;
        tt = s2 + phi4;
        c2 += (s2 >= phi4) ? (s2 - tt) + phi4 : (phi4 - tt) + s2;
        s2 = tt;
        if (std::abs(phi) >= 0.5) ++nonvanishing;
      }
      const double nd = static_cast<double>(n);
      const double sum1 = s1 + c1;
      const double sum2 = s2 + c2;
      rep.second_moment_estimate = sum1 / nd;
      const double var = n > 1 ? std::max(0.0, (sum2 - sum1 * sum1 / nd) / (nd - 1.0)) : 0.0;
      rep.second_moment_stderr = std::sqrt(var / nd);
      rep.l2_norm_sq = 4.0 / 3.0;
      rep.nonvanishing_fraction = static_cast<double>(nonvanishing) / nd;
      return rep;
    }
    case TestFamily::rademacher: {
      // Phi(r_k) = r_k(theta) = 1 - 2*bit_k(theta); the digits are i.i.d.
      // fair bits, drawn directly from the stream. |Phi| = 1 identically, so
      // the squared values are exactly 1 and the demonstration is that the
      // nonvanishing fraction stays 1 no matter how large the family gets.
      std::uint64_t nonvanishing = 0;
      std::uint64_t evals = 0;
      double s1 = 0.0;
      for (std::uint64_t trial = 0; trial < n; ++trial) {
        std::uint64_t word = 0;
        unsigned bits_left = 0;
        for (std::uint64_t k = 0; k < n; ++k) {
          if (bits_left == 0) {
            word = rng.next_u64();
            bits_left = 64;
          }
          const double r = (word & 1u) ? 1.0 : -1.0;
          word >>= 1;
          --bits_left;
          s1 += r * r;
          ++evals;
          if (std::abs(r) >= 0.5) ++nonvanishing;
        }
      }
      rep.second_moment_estimate = s1 / static_cast<double>(evals);
      rep.second_moment_stderr = 0.0;  // the sampled values are identically 1
      rep.l2_norm_sq = 1.0;
      rep.nonvanishing_fraction =
          static_cast<double>(nonvanishing) / static_cast<double>(evals);
      return rep;
    }
  }
  throw std::invalid_argument("point_eval_demo: unknown family");
}

}  // namespace rpsemi
