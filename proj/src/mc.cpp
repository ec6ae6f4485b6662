#include "rpsemi/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "rpsemi/specfun.hpp"

namespace rpsemi {

namespace {

constexpr std::uint64_t kBlockPaths = 4096;
constexpr double kZ95 = 1.959963984540054;

struct BlockStat {
  Kahan s1;
  Kahan s2;
  std::uint64_t censored = 0;
};

struct EngineContext {
  const ExperimentSpec* spec = nullptr;
  std::size_t n_t = 0;
  std::uint32_t truncation = 0;
  std::vector<double> rate;      // rate[k-1] = lambda_k, k = 1..N
  std::vector<double> a_sq;      // diagonal weights squared
  std::vector<double> inv_b_sq;  // ellipsoid axis values 1/b_k^2
  double diag_tail_mass = 0.0;
};

// One path; `value` receives the sampled quantity per grid point, `censored`
// is flagged per grid point for censored ellipsoid samples.
void eval_path(const EngineContext& ctx, std::uint64_t path, std::vector<double>& value,
               std::vector<char>& censored) {
  const ExperimentSpec& spec = *ctx.spec;
  RngStream rng = derive_path_stream(spec.master_seed, path);
  const std::size_t G = ctx.n_t;
  std::fill(value.begin(), value.end(), 0.0);
  std::fill(censored.begin(), censored.end(), char{0});

  switch (spec.quantity) {
    case Quantity::width_diag: {
      // First kill times are exponential; bucket each killed weight at the
      // first grid point that sees the kill, then prefix-sum. Accumulation is
      // in ascending clock order within each bucket, fixed per path.
      for (std::uint32_t k = 1; k <= ctx.truncation; ++k) {
        const double kill = rng.next_exponential(ctx.rate[k - 1]);
        const auto it =
            std::lower_bound(spec.t_grid.begin(), spec.t_grid.end(), kill);
        if (it != spec.t_grid.end()) {
          value[static_cast<std::size_t>(it - spec.t_grid.begin())] += ctx.a_sq[k - 1];
        }
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < G; ++i) {
        acc += value[i];
        value[i] = acc + ctx.diag_tail_mass;
      }
      return;
    }
    case Quantity::width_ellipsoid: {
      // A kill of clock k at grid position j makes k a candidate minimum on
      // the whole suffix [j, G). Visiting clocks in ascending order, the
      // first clock to cover a position is its minimal killed index, so an
      // uncovered-frontier sweep assigns every position exactly once.
      std::size_t frontier = G;
      for (std::uint32_t k = 1; k <= ctx.truncation && frontier > 0; ++k) {
        const double kill = rng.next_exponential(ctx.rate[k - 1]);
        const auto it =
            std::lower_bound(spec.t_grid.begin(), spec.t_grid.end(), kill);
        if (it == spec.t_grid.end()) continue;
        const auto idx = static_cast<std::size_t>(it - spec.t_grid.begin());
        for (std::size_t i = idx; i < frontier; ++i) value[i] = ctx.inv_b_sq[k - 1];
        if (idx < frontier) frontier = idx;
      }
      for (std::size_t i = 0; i < frontier; ++i) {
        value[i] = 0.0;
        censored[i] = 1;
      }
      return;
    }
    case Quantity::alpha: {
      for (std::uint32_t k = 1; k <= ctx.truncation; ++k) {
        const double kill = rng.next_exponential(ctx.rate[k - 1]);
        const auto it =
            std::lower_bound(spec.t_grid.begin(), spec.t_grid.end(), kill);
        if (it != spec.t_grid.end()) {
          value[static_cast<std::size_t>(it - spec.t_grid.begin())] += 1.0;
        }
      }
      double killed = 0.0;
      for (std::size_t i = 0; i < G; ++i) {
        killed += value[i];
        value[i] = static_cast<double>(ctx.truncation) - killed;
      }
      return;
    }
    case Quantity::survival_indicator: {
      const double lambda = spec.intensity.rate(spec.survival_clock);
      double jump = rng.next_exponential(lambda);
      while (jump <= spec.survival_anchor) jump += rng.next_exponential(lambda);
      // `jump` is the first jump strictly after the anchor; a window (s, s+t]
      // is jump-free exactly when that jump lands beyond s + t.
      for (std::size_t i = 0; i < G; ++i) {
        value[i] = (jump > spec.survival_anchor + spec.t_grid[i]) ? 1.0 : 0.0;
      }
      return;
    }
  }
  throw std::invalid_argument("run_experiment: unknown quantity");
}

void run_block(const EngineContext& ctx, std::uint64_t block, std::vector<BlockStat>& out) {
  const ExperimentSpec& spec = *ctx.spec;
  const std::uint64_t begin = block * kBlockPaths;
  const std::uint64_t end = std::min(begin + kBlockPaths, spec.paths);
  std::vector<double> value(ctx.n_t);
  std::vector<char> censored(ctx.n_t);
  for (std::uint64_t path = begin; path < end; ++path) {
    eval_path(ctx, path, value, censored);
    for (std::size_t i = 0; i < ctx.n_t; ++i) {
      out[i].s1.add(value[i]);
      out[i].s2.add(value[i] * value[i]);
      out[i].censored += censored[i] ? 1u : 0u;
    }
  }
}

}  // namespace

RngStream derive_path_stream(std::uint64_t master_seed, std::uint64_t path_index) {
  return RngStream(master_seed, path_index);
}

std::vector<MCEstimate> run_experiment(const ExperimentSpec& spec) {
  if (spec.paths == 0) throw std::invalid_argument("run_experiment: paths must be >= 1");
  if (spec.t_grid.empty()) throw std::invalid_argument("run_experiment: empty t grid");
  for (std::size_t i = 0; i < spec.t_grid.size(); ++i) {
    if (!(spec.t_grid[i] > 0.0) || !std::isfinite(spec.t_grid[i])) {
      throw std::invalid_argument("run_experiment: grid times must be finite and > 0");
    }
    if (i > 0 && !(spec.t_grid[i] > spec.t_grid[i - 1])) {
      throw std::invalid_argument("run_experiment: grid must be strictly increasing");
    }
  }
  if (!(spec.trunc_eps > 0.0 && spec.trunc_eps < 1.0)) {
    throw std::invalid_argument("run_experiment: trunc_eps must lie in (0,1)");
  }
  if (spec.quantity == Quantity::survival_indicator) {
    if (spec.survival_clock == 0) {
      throw std::invalid_argument("run_experiment: survival clock index must be >= 1");
    }
    if (!(spec.survival_anchor >= 0.0) || !std::isfinite(spec.survival_anchor)) {
      throw std::invalid_argument("run_experiment: survival anchor must be finite and >= 0");
    }
  }

  EngineContext ctx;
  ctx.spec = &spec;
  ctx.n_t = spec.t_grid.size();
  const bool needs_field = spec.quantity != Quantity::survival_indicator;
  if (needs_field) {
    ctx.truncation = spec.trunc_override
                         ? *spec.trunc_override
                         : spec.intensity.truncation_index(spec.t_grid.front(), spec.trunc_eps);
    ctx.rate.reserve(ctx.truncation);
    for (std::uint32_t k = 1; k <= ctx.truncation; ++k) {
      ctx.rate.push_back(spec.intensity.rate(k));
    }
    if (spec.quantity == Quantity::width_diag) {
      ctx.a_sq.reserve(ctx.truncation);
      for (std::uint32_t k = 1; k <= ctx.truncation; ++k) {
        ctx.a_sq.push_back(spec.compact.a.a_sq(k));
      }
      ctx.diag_tail_mass = spec.compact.a.tail_sq_sum(ctx.truncation);
    } else if (spec.quantity == Quantity::width_ellipsoid) {
      ctx.inv_b_sq.reserve(ctx.truncation);
      for (std::uint32_t k = 1; k <= ctx.truncation; ++k) {
        ctx.inv_b_sq.push_back(spec.compact.b.inv_b_sq(k));
      }
    }
  }

  const std::uint64_t n_blocks = (spec.paths + kBlockPaths - 1) / kBlockPaths;
  std::vector<std::vector<BlockStat>> blocks(n_blocks,
                                             std::vector<BlockStat>(ctx.n_t));

  unsigned workers = spec.workers != 0 ? spec.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, n_blocks));

  if (workers <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(ctx, b, blocks[b]);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
          if (b >= n_blocks) return;
          run_block(ctx, b, blocks[b]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<MCEstimate> out(ctx.n_t);
  const double nd = static_cast<double>(spec.paths);
  for (std::size_t i = 0; i < ctx.n_t; ++i) {
    Kahan s1, s2;
    std::uint64_t censored = 0;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
      s1.merge(blocks[b][i].s1);
      s2.merge(blocks[b][i].s2);
      censored += blocks[b][i].censored;
    }
    MCEstimate& e = out[i];
    e.t = spec.t_grid[i];
    e.n_paths = spec.paths;
    const double sum1 = s1.value();
    const double sum2 = s2.value();
    e.mean = sum1 / nd;
    e.variance =
        spec.paths > 1 ? std::max(0.0, (sum2 - sum1 * sum1 / nd) / (nd - 1.0)) : 0.0;
    e.std_error = std::sqrt(e.variance / nd);
    e.ci95_lo = e.mean - kZ95 * e.std_error;
    e.ci95_hi = e.mean + kZ95 * e.std_error;
    e.censored_fraction = static_cast<double>(censored) / nd;
  }
  return out;
}

GofReport chi_square_gof(std::span<const std::uint64_t> counts,
                         std::span<const double> prob, double significance) {
  if (counts.size() != prob.size()) {
    throw std::invalid_argument("chi_square_gof: counts/prob size mismatch");
  }
  if (counts.size() < 2) throw std::invalid_argument("chi_square_gof: need >= 2 bins");
  double prob_sum = 0.0;
  for (double p : prob) {
    if (!(p >= 0.0)) throw std::invalid_argument("chi_square_gof: negative probability");
    prob_sum += p;
  }
  if (std::abs(prob_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("chi_square_gof: probabilities must sum to 1");
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) throw std::invalid_argument("chi_square_gof: no observations");
  const double nd = static_cast<double>(total);

  // Greedy left-to-right grouping; a group closes once its expected count
  // reaches 5, and a small trailing group is folded into its left neighbour.
  std::vector<double> obs_g, exp_g;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    obs_acc += static_cast<double>(counts[i]);
    exp_acc += nd * prob[i];
    if (exp_acc >= 5.0) {
      obs_g.push_back(obs_acc);
      exp_g.push_back(exp_acc);
      obs_acc = 0.0;
      exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (!exp_g.empty()) {
      obs_g.back() += obs_acc;
      exp_g.back() += exp_acc;
    } else {
      obs_g.push_back(obs_acc);
      exp_g.push_back(exp_acc);
    }
  }
  if (obs_g.size() < 2) {
    throw std::invalid_argument("chi_square_gof: fewer than 2 bins after merging");
  }

  GofReport rep;
  rep.bins = obs_g.size();
  for (std::size_t i = 0; i < obs_g.size(); ++i) {
    const double d = obs_g[i] - exp_g[i];
    rep.statistic += d * d / exp_g[i];
  }
  rep.df = obs_g.size() - 1;
  rep.p_value = specfun::chi_square_sf(rep.statistic, static_cast<double>(rep.df));
  rep.pass = rep.p_value >= significance;
  return rep;
}

GofReport compare_to_law(std::span<const double> samples, const DiscreteLaw& law,
                         double significance) {
  if (law.support.size() != law.prob.size() || law.support.empty()) {
    throw std::invalid_argument("compare_to_law: malformed law");
  }
  std::unordered_map<double, std::size_t> index;
  index.reserve(law.support.size());
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    if (!index.emplace(law.support[i], i).second) {
      throw std::invalid_argument("compare_to_law: duplicate support point");
    }
  }
  std::vector<std::uint64_t> counts(law.support.size(), 0);
  for (double s : samples) {
    const auto it = index.find(s);
    if (it == index.end()) {
      throw std::invalid_argument("compare_to_law: sample off the law's support");
    }
    ++counts[it->second];
  }
  return chi_square_gof(counts, law.prob, significance);
}

}  // namespace rpsemi
