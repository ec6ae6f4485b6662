#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rpsemi {

enum class RateFamily { linear, power, constant, log };

// Analytic growth rule lambda_k = f(k), k >= 1. The linear and power
// families satisfy the summability condition sum_k exp(-rho*lambda_k) < inf
// for every rho > 0; constant and log are diagnostic families that violate
// it and exist only so the rejection paths are constructible.
struct RateRule {
  RateFamily family = RateFamily::linear;
  double c = 1.0;  // scale > 0
  double p = 2.0;  // exponent > 1 (power family only)

  double rate(std::uint64_t k) const;
  // Certified upper bound on sum_{k>n} exp(-rate(k)*t); +inf if divergent.
  double survivor_tail_bound(std::uint64_t n, double t) const;

  static RateRule linear(double c);
  static RateRule power(double p, double c);
  static RateRule constant(double c);     // diagnostic only
  static RateRule logarithmic(double c);  // diagnostic only; f(k)=c*ln(k+1)
};

struct Condition2Report {
  bool passes = false;
  std::string reason;
};

// Intensity sequence lambda_1, lambda_2, ... given by a closed family or an
// explicit table prefix continued by an analytic tail rule.
class IntensityModel {
 public:
  static IntensityModel linear(double c = 1.0);
  static IntensityModel power(double p, double c = 1.0);
  static IntensityModel table(std::vector<double> values, RateRule tail);

  double rate(std::uint64_t k) const;

  // Does sum_k exp(-rho*lambda_k) converge for every rho > 0?
  Condition2Report check_condition2() const;

  // Smallest N such that the certified bound on sum_{k>N} exp(-lambda_k*t)
  // is <= eps. Throws std::domain_error when the sum diverges.
  std::uint64_t truncation_index(double t, double eps) const;

  double survivor_tail_bound(std::uint64_t n, double t) const;

  // sum_{k>=1} exp(-lambda_k*t), absolute error <= tol.
  double expected_alpha(double t, double tol = 1e-12) const;
  double expected_alpha_truncated(double t, std::uint64_t n) const;

  // Scale c when the model is the pure linear family (no table prefix).
  std::optional<double> linear_scale() const;
  bool is_default_linear() const;

  const std::string& description() const { return desc_; }

 private:
  IntensityModel() = default;
  std::vector<double> table_;
  RateRule tail_{};
  bool has_table_ = false;
  std::string desc_;
};

// CLI model syntax: "linear:1.0", "power:2.0:1.0", "table:<path>:linear:1.0"
// (table file holds one positive decimal per line, in index order).
IntensityModel parse_intensity(const std::string& text);

}  // namespace rpsemi
