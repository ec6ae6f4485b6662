#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rpsemi/intensity.hpp"
#include "rpsemi/rng.hpp"
#include "rpsemi/widths.hpp"

namespace rpsemi {

// Neumaier-compensated accumulator; addition order is fixed by the engine so
// results do not depend on the worker count.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void merge(const Kahan& other) {
    add(other.sum);
    add(other.comp);
  }
  double value() const { return sum + comp; }
};

RngStream derive_path_stream(std::uint64_t master_seed, std::uint64_t path_index);

enum class Quantity { width_diag, width_ellipsoid, alpha, survival_indicator };

struct ExperimentSpec {
  Quantity quantity = Quantity::width_diag;
  IntensityModel intensity = IntensityModel::linear(1.0);
  CompactSpec compact{};
  std::vector<double> t_grid;  // strictly increasing, all > 0
  std::uint64_t paths = 0;
  std::uint64_t master_seed = 0;
  double trunc_eps = 1e-9;
  unsigned workers = 0;  // 0: all hardware threads
  // Diagnostic override of the truncation index (e.g. to make ellipsoid
  // censoring observable); normal runs derive N from trunc_eps.
  std::optional<std::uint32_t> trunc_override;
  // survival_indicator parameters: clock index and window anchor s; the
  // estimated quantity is P{no jump of clock k in (s, s+t]} per grid t.
  std::uint32_t survival_clock = 1;
  double survival_anchor = 0.0;
};

struct MCEstimate {
  double t = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  std::uint64_t n_paths = 0;
  double censored_fraction = 0.0;
};

// Deterministic parallel Monte Carlo: per-path Philox streams keyed on
// (master_seed, path), fixed 4096-path blocks accumulated independently and
// merged in block order, so outputs are bit-identical for any worker count.
// The diagonal-width estimator adds the deterministic beyond-truncation mass
// sum_{n>N} a_n^2 to every path (residual bias <= a_{N+1}^2 * trunc_eps);
// censored ellipsoid paths contribute value 0 and raise censored_fraction.
std::vector<MCEstimate> run_experiment(const ExperimentSpec& spec);

struct DiscreteLaw {
  std::vector<double> support;
  std::vector<double> prob;
};

struct GofReport {
  double statistic = 0.0;
  std::uint64_t df = 0;
  double p_value = 0.0;
  bool pass = false;
  std::size_t bins = 0;  // retained bins after merging
};

// Chi-square goodness of fit from raw counts; bins with expected count < 5
// are merged into their left neighbour. Probabilities must sum to 1 within
// 1e-9 and at least two bins must remain.
GofReport chi_square_gof(std::span<const std::uint64_t> counts,
                         std::span<const double> prob, double significance = 0.01);

// Bins samples by exact support match (values are required to be on the
// law's support) and delegates to chi_square_gof.
GofReport compare_to_law(std::span<const double> samples, const DiscreteLaw& law,
                         double significance = 0.01);

}  // namespace rpsemi
