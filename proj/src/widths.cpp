#include "rpsemi/widths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rpsemi/specfun.hpp"

namespace rpsemi {

namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kInvE = 0.36787944117144232160;  // exp(-1)

void require_tol(double tol, const char* who) {
  if (!(tol > 0.0)) throw std::invalid_argument(std::string(who) + ": tol must be > 0");
}

void require_time(double t, const char* who) {
  if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

// zeta(2) - Li2(exp(-t)) for the default model/rule. For t < ln 2 the
// reflection Li2(x) + Li2(1-x) = zeta(2) - ln(x)ln(1-x) turns this into
// -t*ln(x) + Li2(x) with x = 1 - exp(-t) computed by expm1, which keeps full
// precision near t = 0.
double mean_diag_base(double t) {
  if (t == 0.0) return 0.0;
  if (t >= kLn2) return specfun::kZeta2 - specfun::dilog_small(std::exp(-t));
  const double x = -std::expm1(-t);
  return -t * std::log(x) + specfun::dilog_small(x);
}

double parse_scale(const std::string& text, const std::string& prefix, const char* who) {
  if (text.size() <= prefix.size() || text.compare(0, prefix.size(), prefix) != 0) {
    throw std::invalid_argument(std::string(who) + ": expected " + prefix + "<scale>, got '" + text + "'");
  }
  std::size_t pos = 0;
  double c = 0.0;
  const std::string num = text.substr(prefix.size());
  try {
    c = std::stod(num, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(who) + ": bad scale in '" + text + "'");
  }
  if (pos != num.size() || !(c > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": bad scale in '" + text + "'");
  }
  return c;
}

}  // namespace

double DiagonalRule::tail_sq_sum(std::uint64_t n) const {
  return specfun::trigamma(static_cast<double>(n) + 1.0) / (c * c);
}

DiagonalRule parse_a_rule(const std::string& text) {
  return {parse_scale(text, "inv:", "a-rule")};
}

EllipsoidRule parse_b_rule(const std::string& text) {
  return {parse_scale(text, "lin:", "b-rule")};
}

WidthSample width_sq_diagonal(std::span<const std::uint32_t> killed,
                              const DiagonalRule& rule, std::uint32_t truncation,
                              double t) {
  double acc = 0.0, comp = 0.0;
  for (std::uint32_t k : killed) {
    if (k == 0 || k > truncation) {
      throw std::invalid_argument("width_sq_diagonal: killed index outside 1..N");
    }
    const double x = rule.a_sq(k);
    const double s = acc + x;
    comp += (acc >= x) ? (acc - s) + x : (x - s) + acc;
    acc = s;
  }
  return {t, acc + comp, rule.tail_sq_sum(truncation), false};
}

WidthSample width_sq_ellipsoid(std::span<const std::uint32_t> killed,
                               const EllipsoidRule& rule, std::uint32_t truncation,
                               double t) {
  if (killed.empty()) {
    return {t, 0.0, rule.inv_b_sq(truncation + 1), true};
  }
  std::uint32_t m = killed[0];
  for (std::uint32_t k : killed) {
    if (k == 0 || k > truncation) {
      throw std::invalid_argument("width_sq_ellipsoid: killed index outside 1..N");
    }
    m = std::min(m, k);
  }
  return {t, rule.inv_b_sq(m), 0.0, false};
}

double exact_mean_width_sq_diagonal(const IntensityModel& model,
                                    const DiagonalRule& rule, double t, double tol) {
  require_time(t, "exact_mean_width_sq_diagonal");
  require_tol(tol, "exact_mean_width_sq_diagonal");
  if (t == 0.0) return 0.0;
  if (auto c = model.linear_scale()) {
    return mean_diag_base(*c * t) / (rule.c * rule.c);
  }
  // Generic model: sum a_n^2 (1 - e^{-lambda_n t}) = tail(0) - sum a_n^2 e^{-...};
  // the subtracted series decays at least geometrically, so the truncation
  // index at eps = tol * c^2 certifies remainder <= tol / (M+1)^2 < tol.
  const std::uint64_t M =
      model.truncation_index(t, std::min(0.5, tol * rule.c * rule.c));
  double acc = rule.tail_sq_sum(0);
  for (std::uint64_t n = 1; n <= M; ++n) {
    acc -= rule.a_sq(n) * std::exp(-model.rate(n) * t);
  }
  return acc;
}

double exact_mean_width_sq_diagonal(double t, double tol) {
  return exact_mean_width_sq_diagonal(IntensityModel::linear(1.0), DiagonalRule{}, t, tol);
}

double mean_width_sq_diagonal_quadrature(double t, double tol) {
  require_time(t, "mean_width_sq_diagonal_quadrature");
  require_tol(tol, "mean_width_sq_diagonal_quadrature");
  if (t == 0.0) return 0.0;
  // -ln(1-e^{-s}) = -ln s + g(s) with g(s) = -ln((1-e^{-s})/s) smooth at 0;
  // the -ln s part integrates to t(1 - ln t) in closed form.
  const auto g = [](double s) {
    if (s == 0.0) return 0.0;
    return -std::log(-std::expm1(-s) / s);
  };
  const double closed = t * (1.0 - std::log(t));
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t panels = 1; panels <= 64; panels *= 2) {
    double acc = 0.0;
    const double h = t / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
      acc += specfun::integrate(g, i * h, (i + 1) * h, 32);
    }
    const double val = closed + acc;
    if (panels > 1 && std::abs(val - prev) <= 0.5 * tol) return val;
    prev = val;
  }
  throw std::runtime_error("mean_width_sq_diagonal_quadrature: did not converge");
}

double exact_var_width_sq_diagonal(const IntensityModel& model,
                                   const DiagonalRule& rule, double t, double tol) {
  require_time(t, "exact_var_width_sq_diagonal");
  require_tol(tol, "exact_var_width_sq_diagonal");
  if (t == 0.0) return 0.0;
  const double c4 = rule.c * rule.c * rule.c * rule.c;
  double acc = 0.0;
  for (std::uint64_t n = 1; n <= (std::uint64_t{1} << 32); ++n) {
    const double y = std::exp(-model.rate(n) * t);
    const double a2 = rule.a_sq(n);
    acc += a2 * a2 * y * (1.0 - y);
    // Remainder <= min(sum_{k>n} a_k^4, a_{n+1}^4 * sum_{k>n} e^{-lambda_k t});
    // the first is the polynomial certificate 1/(3 n^3 c^4).
    const double nd = static_cast<double>(n);
    const double poly = 1.0 / (3.0 * nd * nd * nd * c4);
    if (poly <= tol) return acc;
    if (a2 * a2 * model.survivor_tail_bound(n, t) <= tol) return acc;
  }
  throw std::runtime_error("exact_var_width_sq_diagonal: did not converge");
}

double exact_var_width_sq_diagonal(double t, double tol) {
  return exact_var_width_sq_diagonal(IntensityModel::linear(1.0), DiagonalRule{}, t, tol);
}

double exact_mean_width_sq_ellipsoid(const IntensityModel& model,
                                     const EllipsoidRule& rule, double t, double tol) {
  require_time(t, "exact_mean_width_sq_ellipsoid");
  require_tol(tol, "exact_mean_width_sq_ellipsoid");
  if (t == 0.0) return 0.0;
  // sum_n (1/b_n^2) P{min killed = n} with
  // P{min = n} = exp(-t sum_{j<n} lambda_j) (1 - exp(-lambda_n t)).
  double acc = 0.0;
  double cum = 0.0;  // sum_{j<=n} lambda_j
  for (std::uint64_t n = 1; n <= (std::uint64_t{1} << 32); ++n) {
    const double lam = model.rate(n);
    const double prefix = std::exp(-t * cum);
    acc += rule.inv_b_sq(n) * prefix * (-std::expm1(-lam * t));
    cum += lam;
    // Remaining mass P{min > n} has width values at most 1/b_{n+1}^2.
    if (std::exp(-t * cum) * rule.inv_b_sq(n + 1) <= tol) return acc;
  }
  throw std::runtime_error("exact_mean_width_sq_ellipsoid: did not converge");
}

double exact_mean_width_sq_ellipsoid(double t, double tol) {
  return exact_mean_width_sq_ellipsoid(IntensityModel::linear(1.0), EllipsoidRule{}, t, tol);
}

double survival_law_inv_width(double t, std::uint64_t n) {
  require_time(t, "survival_law_inv_width");
  if (n <= 1) return 1.0;
  const double nd = static_cast<double>(n);
  return std::exp(-nd * (nd - 1.0) * t / 2.0);
}

std::vector<double> alpha_pmf_exact(const IntensityModel& model, double t,
                                    std::uint32_t truncation) {
  if (!(t > 0.0)) throw std::invalid_argument("alpha_pmf_exact: t must be > 0");
  std::vector<double> pmf(static_cast<std::size_t>(truncation) + 1, 0.0);
  pmf[0] = 1.0;
  for (std::uint32_t k = 1; k <= truncation; ++k) {
    const double p = std::exp(-model.rate(k) * t);  // survival probability
    const double q = -std::expm1(-model.rate(k) * t);
    for (std::uint32_t j = k; j >= 1; --j) {
      pmf[j] = pmf[j] * q + pmf[j - 1] * p;
    }
    pmf[0] *= q;
  }
  return pmf;
}

std::vector<double> alpha_pmf_exact(double t, std::uint32_t truncation) {
  return alpha_pmf_exact(IntensityModel::linear(1.0), t, truncation);
}

double dimension_tail_bound(double t, std::uint64_t n) {
  if (!(t > 0.0 && t < 1.0)) {
    throw std::invalid_argument("dimension_tail_bound: t must be in (0,1)");
  }
  if (n == 0) return 1.0;
  const double bound =
      std::exp(-static_cast<double>(n) * t) * (1.0 + (-std::expm1(-1.0)) / t);
  return std::min(1.0, bound);
}

double asymptote(AsymptoteKind kind, double t) {
  if (!(t > 0.0 && t <= kInvE)) {
    throw std::invalid_argument("asymptote: t must be in (0, 1/e]");
  }
  const double lt = -std::log(t);  // |ln t| >= 1 on the domain
  switch (kind) {
    case AsymptoteKind::diag_mean:
      return t * lt;
    case AsymptoteKind::ell_mean:
      return 0.5 * t * lt;
    case AsymptoteKind::phi:
      return std::sqrt(2.0 / t * std::log(lt));
    case AsymptoteKind::alpha_scale:
      return 2.0 * lt / t;
    case AsymptoteKind::c_scale:
      return -specfun::kZeta2 / t;
  }
  throw std::invalid_argument("asymptote: unknown kind");
}

double kolmogorov_width_ellipsoid(std::uint64_t n, const EllipsoidRule& rule) {
  return 1.0 / rule.b(n + 1);
}

double kolmogorov_width_diagonal_ub(std::uint64_t n, const DiagonalRule& rule) {
  return std::sqrt(rule.tail_sq_sum(n));
}

double log_euler_product(double t, double tol) {
  if (!(t > 0.0)) throw std::invalid_argument("log_euler_product: t must be > 0");
  require_tol(tol, "log_euler_product");
  const double x = std::exp(-t);
  const double denom_sq = (1.0 - x) * (1.0 - x);
  double acc = 0.0;
  for (std::uint64_t j = 1; j <= (std::uint64_t{1} << 32); ++j) {
    acc += std::log1p(-std::exp(-static_cast<double>(j) * t));
    // |ln(1-y)| <= y/(1-x) for y = x^j <= x, so the remainder past j is
    // bounded by x^{j+1}/(1-x)^2.
    if (std::exp(-static_cast<double>(j + 1) * t) / denom_sq <= tol) return acc;
  }
  throw std::runtime_error("log_euler_product: did not converge");
}

double log_euler_product_eta(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("log_euler_product_eta: t must be > 0");
  double acc = -specfun::kZeta2 / t + 0.5 * std::log(2.0 * specfun::kPi / t) + t / 24.0;
  const double step = 4.0 * specfun::kPi * specfun::kPi / t;
  for (int n = 1; n < 64; ++n) {
    const double arg = step * n;
    if (arg > 42.0) break;  // exp(-42) is below double noise here
    acc += std::log1p(-std::exp(-arg));
  }
  return acc;
}

}  // namespace rpsemi
