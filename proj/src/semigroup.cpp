#include "rpsemi/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace rpsemi {

std::vector<double> sample_first_kill_times(const IntensityModel& model,
                                            std::uint32_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("sample_first_kill_times: n must be >= 1");
  std::vector<double> taus;
  taus.reserve(n);
  for (std::uint32_t k = 1; k <= n; ++k) {
    taus.push_back(rng.next_exponential(model.rate(k)));
  }
  return taus;
}

ClockFieldSample sample_clock_field(const IntensityModel& model, double horizon,
                                    std::uint32_t n, RngStream& rng,
                                    double min_window) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sample_clock_field: horizon must be > 0");
  if (n == 0) throw std::invalid_argument("sample_clock_field: n must be >= 1");
  ClockFieldSample field;
  field.horizon = horizon;
  field.truncation = n;
  field.min_window = min_window > 0.0 ? min_window : horizon;
  field.tail_eps = model.survivor_tail_bound(n, field.min_window);
  field.seed = {rng.master_seed(), rng.stream_id()};
  field.clocks.resize(n);
  for (std::uint32_t k = 1; k <= n; ++k) {
    auto& clock = field.clocks[k - 1];
    clock.index = k;
    const double lambda = model.rate(k);
    double t = rng.next_exponential(lambda);
    while (t <= horizon) {
      clock.jumps.push_back(t);
      t += rng.next_exponential(lambda);
    }
  }
  return field;
}

ProjectionRealization realize(const ClockFieldSample& field, double s, double t) {
  if (!(s >= 0.0 && s <= t && t <= field.horizon)) {
    throw std::invalid_argument("realize: need 0 <= s <= t <= horizon");
  }
  ProjectionRealization r;
  r.window_begin = s;
  r.window_end = t;
  r.truncation = field.truncation;
  r.tail_eps = (t - s >= field.min_window) ? field.tail_eps
                                           : std::numeric_limits<double>::infinity();
  r.seed = field.seed;
  r.survivors.reserve(field.truncation);
  for (const auto& clock : field.clocks) {
    // First jump > s; the clock kills iff that jump is <= t.
    auto it = std::upper_bound(clock.jumps.begin(), clock.jumps.end(), s);
    if (it == clock.jumps.end() || *it > t) r.survivors.push_back(clock.index);
  }
  return r;
}

ProjectionRealization compose(const ProjectionRealization& r1,
                              const ProjectionRealization& r2) {
  if (r1.window_end != r2.window_begin) {
    throw std::invalid_argument("compose: windows must abut (r1 end == r2 begin)");
  }
  if (r1.seed.master_seed != r2.seed.master_seed ||
      r1.seed.path_index != r2.seed.path_index || r1.truncation != r2.truncation) {
    throw std::invalid_argument("compose: realizations must come from the same field");
  }
  ProjectionRealization out;
  out.window_begin = r1.window_begin;
  out.window_end = r2.window_end;
  out.truncation = r1.truncation;
  out.tail_eps = std::min(r1.tail_eps, r2.tail_eps);
  out.seed = r1.seed;
  std::set_intersection(r1.survivors.begin(), r1.survivors.end(),
                        r2.survivors.begin(), r2.survivors.end(),
                        std::back_inserter(out.survivors));
  return out;
}

std::vector<double> apply(const ProjectionRealization& r,
                          std::span<const double> coeffs) {
  if (coeffs.size() != r.truncation) {
    throw std::invalid_argument("apply: coefficient vector length must equal the truncation");
  }
  std::vector<double> out(coeffs.size(), 0.0);
  for (std::uint32_t k : r.survivors) out[k - 1] = coeffs[k - 1];
  return out;
}

std::vector<int> diagonal_indicator(const ProjectionRealization& r) {
  std::vector<int> d(r.truncation, 0);
  for (std::uint32_t k : r.survivors) d[k - 1] = 1;
  return d;
}

DimensionCount dim_alpha(const ProjectionRealization& r) {
  return {r.survivors.size(), r.tail_eps};
}

double expected_identity_gap_sq(const IntensityModel& model,
                                std::span<const double> coeffs, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("expected_identity_gap_sq: t must be >= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += coeffs[i] * coeffs[i] * (-std::expm1(-model.rate(i + 1) * t));
  }
  return acc;
}

}  // namespace rpsemi
