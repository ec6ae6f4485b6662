#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rpsemi/mc.hpp"
#include "rpsemi/output.hpp"
#include "rpsemi/randomop.hpp"
#include "rpsemi/specfun.hpp"
#include "rpsemi/verify.hpp"
#include "rpsemi/widths.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rpsemi;

std::vector<double> parse_t_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw std::invalid_argument("--t-grid: empty entry");
    char* end = nullptr;
    const double t = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size()) {
      throw std::invalid_argument("--t-grid: cannot parse '" + item + "'");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("--t-grid: times must be finite and > 0");
    }
    grid.push_back(t);
    pos = comma + 1;
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// The CSV goes to --out when given, otherwise to stdout; the JSON summary
// then goes to stdout or stderr respectively, so stdout always carries
// exactly one machine-readable artifact.
void emit_csv_and_summary(const std::vector<OutputRecord>& rows,
                          const std::string& out_path, const ordered_json& summary) {
  const std::string csv = to_csv(rows);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open --out file '" + out_path + "'");
    out << csv;
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << csv;
    std::cerr << summary.dump(2) << "\n";
  }
}

bool in_asymptote_domain(double t) { return t > 0.0 && t <= std::exp(-1.0); }

// ln P{alpha(t) = 0} = sum_k ln(1 - exp(-lambda_k t)) for any admissible
// intensity; the default model routes through the Euler-product evaluator.
double log_void_probability(const IntensityModel& model, double t) {
  if (model.is_default_linear()) return log_euler_product(t, 1e-12);
  const std::uint64_t n = model.truncation_index(t, 1e-15);
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    acc += std::log1p(-std::exp(-model.rate(k) * t));
  }
  return acc;
}

struct WidthArgs {
  std::string compact;
  std::string intensity = "linear:1.0";
  std::string a_rule = "inv:1.0";
  std::string b_rule = "lin:1.0";
  std::string t_grid;
  std::uint64_t paths = 100000;
  std::uint64_t seed = 42;
  double trunc_eps = 1e-9;
  unsigned workers = 0;
  bool exact = false;
  std::string out;
};

int run_width(const WidthArgs& args) {
  const bool diagonal = args.compact == "diagonal";
  ExperimentSpec spec;
  spec.quantity = diagonal ? Quantity::width_diag : Quantity::width_ellipsoid;
  spec.intensity = parse_intensity(args.intensity);
  spec.compact.kind = diagonal ? CompactKind::diagonal : CompactKind::ellipsoid;
  spec.compact.a = parse_a_rule(args.a_rule);
  spec.compact.b = parse_b_rule(args.b_rule);
  spec.t_grid = parse_t_grid(args.t_grid);
  spec.paths = args.paths;
  spec.master_seed = args.seed;
  spec.trunc_eps = args.trunc_eps;
  spec.workers = args.workers;

  const auto ests = run_experiment(spec);
  const bool canonical = spec.intensity.is_default_linear() &&
                         (diagonal ? spec.compact.a.c == 1.0 : spec.compact.b.c == 1.0);
  std::vector<OutputRecord> rows;
  rows.reserve(ests.size());
  for (const MCEstimate& e : ests) {
    OutputRecord r;
    r.quantity = diagonal ? "width_diag" : "width_ellipsoid";
    r.t = e.t;
    r.mc_mean = e.mean;
    r.mc_stderr = e.std_error;
    r.censored_fraction = e.censored_fraction;
    if (args.exact) {
      r.exact = diagonal
                    ? exact_mean_width_sq_diagonal(spec.intensity, spec.compact.a, e.t, 1e-12)
                    : exact_mean_width_sq_ellipsoid(spec.intensity, spec.compact.b, e.t, 1e-15);
    }
    if (canonical && in_asymptote_domain(e.t)) {
      r.asymptote = asymptote(diagonal ? AsymptoteKind::diag_mean : AsymptoteKind::ell_mean, e.t);
    }
    if (r.exact && r.asymptote) {
      r.ratio = *r.exact / *r.asymptote;
    } else if (r.exact) {
      r.ratio = *r.mc_mean / *r.exact;
    }
    rows.push_back(std::move(r));
  }

  ordered_json summary;
  summary["command"] = "width";
  ordered_json flags;
  flags["compact"] = args.compact;
  flags["intensity"] = args.intensity;
  flags["a_rule"] = args.a_rule;
  flags["b_rule"] = args.b_rule;
  flags["t_grid"] = args.t_grid;
  flags["paths"] = args.paths;
  flags["seed"] = args.seed;
  flags["trunc_eps"] = args.trunc_eps;
  flags["exact"] = args.exact;
  flags["out"] = args.out.empty() ? ordered_json() : ordered_json(args.out);
  summary["flags"] = flags;
  ordered_json derived;
  derived["intensity"] = spec.intensity.description();
  derived["t_grid"] = spec.t_grid;
  derived["truncation"] =
      spec.intensity.truncation_index(spec.t_grid.front(), spec.trunc_eps);
  summary["derived"] = derived;
  summary["rows"] = rows.size();
  emit_csv_and_summary(rows, args.out, summary);
  return 0;
}

struct DimensionArgs {
  std::string intensity = "linear:1.0";
  std::string t_grid;
  std::uint64_t paths = 100000;
  std::uint64_t seed = 42;
  double trunc_eps = 1e-9;
  unsigned workers = 0;
  std::string out;
};

int run_dimension(const DimensionArgs& args) {
  ExperimentSpec spec;
  spec.quantity = Quantity::alpha;
  spec.intensity = parse_intensity(args.intensity);
  spec.t_grid = parse_t_grid(args.t_grid);
  spec.paths = args.paths;
  spec.master_seed = args.seed;
  spec.trunc_eps = args.trunc_eps;
  spec.workers = args.workers;
  const auto ests = run_experiment(spec);

  // Zero-dimension fractions come from a serial pass over the same per-path
  // streams the engine used, so the two statistics describe the same sample.
  const auto n_trunc = static_cast<std::uint32_t>(
      spec.intensity.truncation_index(spec.t_grid.front(), spec.trunc_eps));
  std::vector<double> rate(n_trunc);
  for (std::uint32_t k = 1; k <= n_trunc; ++k) rate[k - 1] = spec.intensity.rate(k);
  std::vector<std::uint64_t> zero_counts(spec.t_grid.size(), 0);
  for (std::uint64_t path = 0; path < spec.paths; ++path) {
    RngStream rng = derive_path_stream(spec.master_seed, path);
    double last_kill = 0.0;
    for (std::uint32_t k = 1; k <= n_trunc; ++k) {
      last_kill = std::max(last_kill, rng.next_exponential(rate[k - 1]));
    }
    for (std::size_t i = 0; i < spec.t_grid.size(); ++i) {
      if (last_kill <= spec.t_grid[i]) ++zero_counts[i];
    }
  }

  const bool canonical = spec.intensity.is_default_linear();
  std::vector<OutputRecord> rows;
  const double nd = static_cast<double>(spec.paths);
  for (std::size_t i = 0; i < ests.size(); ++i) {
    const MCEstimate& e = ests[i];
    const double log_void = log_void_probability(spec.intensity, e.t);

    OutputRecord alpha_row;
    alpha_row.quantity = "alpha";
    alpha_row.t = e.t;
    alpha_row.mc_mean = e.mean;
    alpha_row.mc_stderr = e.std_error;
    alpha_row.exact = spec.intensity.expected_alpha(e.t, 1e-12);
    alpha_row.ratio = *alpha_row.mc_mean / *alpha_row.exact;
    rows.push_back(std::move(alpha_row));

    OutputRecord zero_row;
    zero_row.quantity = "alpha_zero_prob";
    zero_row.t = e.t;
    const double phat = static_cast<double>(zero_counts[i]) / nd;
    zero_row.mc_mean = phat;
    zero_row.mc_stderr = std::sqrt(phat * (1.0 - phat) / nd);
    zero_row.exact = std::exp(log_void);
    zero_row.ratio = *zero_row.mc_mean / *zero_row.exact;
    rows.push_back(std::move(zero_row));

    OutputRecord scale_row;
    scale_row.quantity = "t_ln_c";
    scale_row.t = e.t;
    scale_row.exact = e.t * log_void;
    if (canonical) {
      scale_row.asymptote = -specfun::kZeta2;  // the t -> 0 limit of t ln c(t)
      scale_row.ratio = *scale_row.exact / *scale_row.asymptote;
    }
    rows.push_back(std::move(scale_row));
  }

  ordered_json summary;
  summary["command"] = "dimension";
  ordered_json flags;
  flags["intensity"] = args.intensity;
  flags["t_grid"] = args.t_grid;
  flags["paths"] = args.paths;
  flags["seed"] = args.seed;
  flags["trunc_eps"] = args.trunc_eps;
  flags["out"] = args.out.empty() ? ordered_json() : ordered_json(args.out);
  summary["flags"] = flags;
  ordered_json derived;
  derived["intensity"] = spec.intensity.description();
  derived["t_grid"] = spec.t_grid;
  derived["truncation"] = n_trunc;
  summary["derived"] = derived;
  summary["rows"] = rows.size();
  emit_csv_and_summary(rows, args.out, summary);
  return 0;
}

struct ExactArgs {
  std::string quantity;
  double t = 0.0;
  std::optional<std::uint64_t> n;
};

int run_exact(const ExactArgs& args) {
  double value = 0.0;
  if (args.quantity == "mean-width-diag") {
    value = args.t == 0.0 ? 0.0 : exact_mean_width_sq_diagonal(args.t, 1e-12);
  } else if (args.quantity == "var-width-diag") {
    value = args.t == 0.0 ? 0.0 : exact_var_width_sq_diagonal(args.t, 1e-12);
  } else if (args.quantity == "mean-width-ell") {
    value = args.t == 0.0 ? 0.0 : exact_mean_width_sq_ellipsoid(args.t, 1e-15);
  } else if (args.quantity == "c-of-t") {
    value = std::exp(log_euler_product(args.t, 1e-12));
  } else if (args.quantity == "alpha-mean") {
    value = IntensityModel::linear(1.0).expected_alpha(args.t, 1e-12);
  } else if (args.quantity == "survival-inv-width") {
    if (!args.n) throw std::invalid_argument("survival-inv-width requires --n");
    value = survival_law_inv_width(args.t, *args.n);
  } else {
    throw std::invalid_argument("unknown --quantity '" + args.quantity + "'");
  }
  std::cout << format_sig12(value) << "\n";
  return 0;
}

struct RandomOpArgs {
  std::string demo;
  std::string family = "rademacher";
  std::uint64_t n = 1000;
  double rate = 5.0;
  std::size_t grid = 256;
  std::uint64_t seed = 42;
  std::string out;
};

int run_randomop(const RandomOpArgs& args) {
  ordered_json report;
  report["command"] = "randomop";
  report["demo"] = args.demo;
  ordered_json flags;
  if (args.demo == "point-eval") {
    flags["family"] = args.family;
    flags["n"] = args.n;
    flags["seed"] = args.seed;
    report["flags"] = flags;
    TestFamily family = TestFamily::rademacher;
    if (args.family == "constant") family = TestFamily::constant;
    if (args.family == "linear") family = TestFamily::linear;
    RngStream rng(args.seed, 0);
    const PointEvalReport r = point_eval_demo(family, args.n, rng);
    ordered_json body;
    body["trials"] = r.trials;
    body["second_moment_estimate"] = r.second_moment_estimate;
    body["second_moment_stderr"] = r.second_moment_stderr;
    body["l2_norm_sq"] = r.l2_norm_sq;
    body["nonvanishing_fraction"] = r.nonvanishing_fraction;
    report["report"] = body;
  } else {
    flags["rate"] = args.rate;
    flags["grid"] = args.grid;
    flags["seed"] = args.seed;
    report["flags"] = flags;
    RngStream rng(args.seed, 0);
    const PoissonPartition part = sample_partition(args.rate, rng);
    const GridProjectionMatrix op = condexp_matrix(part, args.grid);
    const std::size_t n = op.cells();
    double idem = 0.0, row = 0.0, sym = 0.0, trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += op.at(i, i);
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row_sum += op.at(i, j);
        double mm = 0.0;
        for (std::size_t k = 0; k < n; ++k) mm += op.at(i, k) * op.at(k, j);
        idem = std::max(idem, std::abs(mm - op.at(i, j)));
        sym = std::max(sym, std::abs(op.weights[i] * op.at(i, j) -
                                     op.weights[j] * op.at(j, i)));
      }
      row = std::max(row, std::abs(row_sum - 1.0));
    }
    ordered_json body;
    body["nu"] = part.cuts.size();
    body["rank"] = op.rank;
    body["cells"] = n;
    body["trace"] = trace;
    body["hs_full_sum"] = hs_sum_basis(op, n).back();
    body["max_idempotence_defect"] = idem;
    body["max_row_sum_defect"] = row;
    body["max_weighted_symmetry_defect"] = sym;
    report["report"] = body;
  }
  const std::string text = report.dump(2);
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw std::invalid_argument("cannot open --out file '" + args.out + "'");
    out << text << "\n";
  }
  std::cout << text << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t paths = 100000;
  std::uint64_t fields = 10000;
  std::uint64_t seed = 7;
  unsigned workers = 0;
  std::string out;
};

int run_verify(const VerifyArgs& args) {
  verify::VerifyOptions opts;
  opts.paths = args.paths;
  opts.fields = args.fields;
  opts.master_seed = args.seed;
  opts.workers = args.workers;
  const auto results = verify::run_suite(args.suite, opts);
  ordered_json report;
  report["command"] = "verify";
  report["suite"] = args.suite;
  ordered_json flags;
  flags["paths"] = args.paths;
  flags["fields"] = args.fields;
  flags["seed"] = args.seed;
  report["flags"] = flags;
  ordered_json checks = ordered_json::array();
  for (const auto& r : results) {
    ordered_json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["details"] = r.details;
    checks.push_back(std::move(c));
  }
  report["checks"] = checks;
  const bool passed = verify::all_passed(results);
  report["passed"] = passed;
  const std::string text = report.dump(2);
  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw std::invalid_argument("cannot open --out file '" + args.out + "'");
    out << text << "\n";
  }
  std::cout << text << "\n";
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Poisson-clock projection semigroup laboratory: Monte-Carlo estimators, "
      "exact series evaluators and verification suites"};
  app.require_subcommand(1);

  WidthArgs width_args;
  CLI::App* width = app.add_subcommand(
      "width", "Estimate the squared width of a compact set under the projection flow");
  width->add_option("--compact", width_args.compact, "compact set shape")
      ->required()
      ->check(CLI::IsMember({"diagonal", "ellipsoid"}));
  width->add_option("--intensity", width_args.intensity,
                    "clock intensities: linear:c, power:p:c or table:file:tail...")
      ->capture_default_str();
  width->add_option("--a-rule", width_args.a_rule, "diagonal coefficients a_n = 1/(c n)")
      ->capture_default_str();
  width->add_option("--b-rule", width_args.b_rule, "ellipsoid weights b_n = c n")
      ->capture_default_str();
  width->add_option("--t-grid", width_args.t_grid, "comma-separated window lengths > 0")
      ->required();
  width->add_option("--paths", width_args.paths, "Monte-Carlo paths")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  width->add_option("--seed", width_args.seed, "master seed")->capture_default_str();
  width->add_option("--trunc-eps", width_args.trunc_eps, "clock truncation tolerance")
      ->capture_default_str();
  width->add_option("--workers", width_args.workers, "worker threads (0: all cores)")
      ->capture_default_str();
  width->add_flag("--exact", width_args.exact, "add the exact series column");
  width->add_option("--out", width_args.out, "write the CSV to this file");

  DimensionArgs dim_args;
  CLI::App* dimension = app.add_subcommand(
      "dimension", "Estimate the dimension process and the void probability");
  dimension->add_option("--intensity", dim_args.intensity, "clock intensities")
      ->capture_default_str();
  dimension->add_option("--t-grid", dim_args.t_grid, "comma-separated window lengths > 0")
      ->required();
  dimension->add_option("--paths", dim_args.paths, "Monte-Carlo paths")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  dimension->add_option("--seed", dim_args.seed, "master seed")->capture_default_str();
  dimension->add_option("--trunc-eps", dim_args.trunc_eps, "clock truncation tolerance")
      ->capture_default_str();
  dimension->add_option("--workers", dim_args.workers, "worker threads (0: all cores)")
      ->capture_default_str();
  dimension->add_option("--out", dim_args.out, "write the CSV to this file");

  ExactArgs exact_args;
  CLI::App* exact = app.add_subcommand("exact", "Print one exact value");
  exact->add_option("--quantity", exact_args.quantity, "which closed form")
      ->required()
      ->check(CLI::IsMember({"mean-width-diag", "var-width-diag", "mean-width-ell",
                             "c-of-t", "alpha-mean", "survival-inv-width"}));
  exact->add_option("--t", exact_args.t, "window length")
      ->required()
      ->check(CLI::NonNegativeNumber);
  exact->add_option("--n", exact_args.n, "threshold for survival-inv-width");

  RandomOpArgs rop_args;
  CLI::App* randomop = app.add_subcommand("randomop", "Random-operator demonstrations");
  randomop->add_option("--demo", rop_args.demo, "which demonstration")
      ->required()
      ->check(CLI::IsMember({"point-eval", "poisson-condexp"}));
  randomop->add_option("--family", rop_args.family, "test family for point-eval")
      ->capture_default_str()
      ->check(CLI::IsMember({"constant", "linear", "rademacher"}));
  randomop->add_option("--n", rop_args.n, "trials / family size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  randomop->add_option("--rate", rop_args.rate, "Poisson partition rate")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  randomop->add_option("--grid", rop_args.grid, "uniform base grid cells")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  randomop->add_option("--seed", rop_args.seed, "master seed")->capture_default_str();
  randomop->add_option("--out", rop_args.out, "also write the JSON report to this file");

  VerifyArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--suite", verify_args.suite, "suite name")
      ->required()
      ->check(CLI::IsMember(
          {"semigroup", "widths", "dimension", "randomop", "repro", "all"}));
  verify_cmd->add_option("--paths", verify_args.paths, "Monte-Carlo paths per check")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--fields", verify_args.fields, "clock fields for exact-law checks")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_args.seed, "master seed")->capture_default_str();
  verify_cmd->add_option("--workers", verify_args.workers, "worker threads (0: all cores)")
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_args.out, "also write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*width) return run_width(width_args);
    if (*dimension) return run_dimension(dim_args);
    if (*exact) return run_exact(exact_args);
    if (*randomop) return run_randomop(rop_args);
    if (*verify_cmd) return run_verify(verify_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
