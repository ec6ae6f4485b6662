#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rpsemi/intensity.hpp"
#include "rpsemi/rng.hpp"

namespace rpsemi {

struct PoissonClock {
  std::uint32_t index = 0;          // k >= 1
  std::vector<double> jumps;        // strictly increasing, within [0, horizon]
};

struct SeedProvenance {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

// One sampled realization of clocks 1..truncation on [0, horizon].
// tail_eps certifies sum_{k>truncation} exp(-lambda_k * min_window), i.e. the
// expected number of ignored coordinates that survive any queried window of
// length >= min_window.
struct ClockFieldSample {
  double horizon = 0.0;
  std::uint32_t truncation = 0;
  double tail_eps = 0.0;
  double min_window = 0.0;
  SeedProvenance seed{};
  std::vector<PoissonClock> clocks;
};

// Surviving index set of the window (s, t]; the projection G_{s,t} acts as
// the 0/1 diagonal over these indices.
struct ProjectionRealization {
  double window_begin = 0.0;
  double window_end = 0.0;
  std::uint32_t truncation = 0;
  double tail_eps = 0.0;
  SeedProvenance seed{};
  std::vector<std::uint32_t> survivors;  // sorted ascending
};

struct DimensionCount {
  std::uint64_t dim = 0;
  double tail_eps = 0.0;
};

// First jump times tau_k = -ln(U_k)/lambda_k, k = 1..n in index order;
// sufficient for any window anchored at 0.
std::vector<double> sample_first_kill_times(const IntensityModel& model,
                                            std::uint32_t n, RngStream& rng);

// Full jump lists on [0, horizon]; draws are consumed in ascending clock
// index, each clock as cumulative exponential gaps until past the horizon.
// min_window <= 0 means "certify at the full horizon".
ClockFieldSample sample_clock_field(const IntensityModel& model, double horizon,
                                    std::uint32_t n, RngStream& rng,
                                    double min_window = 0.0);

// Survivors of (s, t]: a jump exactly at s does not kill, one exactly at t
// does. s == t yields the identity (all indices survive).
ProjectionRealization realize(const ClockFieldSample& field, double s, double t);

// Requires abutting windows from the same field; survivors intersect and the
// result equals realize(field, r1.begin, r2.end) exactly.
ProjectionRealization compose(const ProjectionRealization& r1,
                              const ProjectionRealization& r2);

// Zero the non-surviving coordinates of a length-truncation vector.
std::vector<double> apply(const ProjectionRealization& r,
                          std::span<const double> coeffs);

// 0/1 diagonal of the projection matrix, index k at position k-1.
std::vector<int> diagonal_indicator(const ProjectionRealization& r);

DimensionCount dim_alpha(const ProjectionRealization& r);

// E||G_{0,t}u - u||^2 = sum_k u_k^2 (1 - exp(-lambda_k t)) for a finitely
// supported coefficient vector; decreasing to 0 as t -> 0.
double expected_identity_gap_sq(const IntensityModel& model,
                                std::span<const double> coeffs, double t);

}  // namespace rpsemi
