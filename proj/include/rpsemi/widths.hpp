#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rpsemi/intensity.hpp"

namespace rpsemi {

// Coefficient rule of the diagonal compact {x : (x,e_n)^2 <= a_n^2},
// a_n = 1/(c n). Square-summable by construction.
struct DiagonalRule {
  double c = 1.0;
  double a(std::uint64_t k) const { return 1.0 / (c * static_cast<double>(k)); }
  double a_sq(std::uint64_t k) const {
    const double v = c * static_cast<double>(k);
    return 1.0 / (v * v);
  }
  // Exact tail mass sum_{k>n} a_k^2 = trigamma(n+1)/c^2.
  double tail_sq_sum(std::uint64_t n) const;
};

// Weight rule of the ellipsoid {x : sum b_n^2 (x,e_n)^2 <= 1}, b_n = c n,
// strictly increasing to infinity.
struct EllipsoidRule {
  double c = 1.0;
  double b(std::uint64_t k) const { return c * static_cast<double>(k); }
  double inv_b_sq(std::uint64_t k) const {
    const double v = b(k);
    return 1.0 / (v * v);
  }
};

enum class CompactKind { diagonal, ellipsoid };

struct CompactSpec {
  CompactKind kind = CompactKind::diagonal;
  DiagonalRule a{};
  EllipsoidRule b{};
};

DiagonalRule parse_a_rule(const std::string& text);   // "inv:1"
EllipsoidRule parse_b_rule(const std::string& text);  // "lin:1"

// One realized squared width. tail_bound is a deterministic bound on the
// truncation error of value_sq: the full beyond-N mass for the diagonal
// compact, and 1/b_{N+1}^2 for a censored ellipsoid sample (0 otherwise).
struct WidthSample {
  double t = 0.0;
  double value_sq = 0.0;
  double tail_bound = 0.0;
  bool censored = false;
};

WidthSample width_sq_diagonal(std::span<const std::uint32_t> killed,
                              const DiagonalRule& rule, std::uint32_t truncation,
                              double t = 0.0);

// value_sq = 1/b_m^2 with m = min(killed); an empty killed set within the
// truncation is recorded as censored with value 0 and tail_bound 1/b_{N+1}^2.
WidthSample width_sq_ellipsoid(std::span<const std::uint32_t> killed,
                               const EllipsoidRule& rule, std::uint32_t truncation,
                               double t = 0.0);

// E ||width||^2 for the diagonal compact: sum a_n^2 (1 - exp(-lambda_n t)).
// Defaults use the dilogarithm closed form; other combinations are summed
// directly with a certified remainder < tol.
double exact_mean_width_sq_diagonal(const IntensityModel& model,
                                    const DiagonalRule& rule, double t, double tol);
double exact_mean_width_sq_diagonal(double t, double tol);

// Independent evaluation of the default-model mean via the integral form
// -int_0^t ln(1 - exp(-s)) ds (adaptive Gauss-Legendre after peeling off the
// logarithmic endpoint singularity in closed form).
double mean_width_sq_diagonal_quadrature(double t, double tol);

// Var ||width||^2 = sum a_n^4 exp(-lambda_n t)(1 - exp(-lambda_n t)).
double exact_var_width_sq_diagonal(const IntensityModel& model,
                                   const DiagonalRule& rule, double t, double tol);
double exact_var_width_sq_diagonal(double t, double tol);

// E ||width||^2 for the ellipsoid via the first-killed-index law:
// sum_n (1/b_n^2) * P{min killed = n}, super-exponentially convergent.
double exact_mean_width_sq_ellipsoid(const IntensityModel& model,
                                     const EllipsoidRule& rule, double t, double tol);
double exact_mean_width_sq_ellipsoid(double t, double tol);

// P{1/width >= n} for the default model and ellipsoid defaults:
// exp(-n(n-1)t/2) for n >= 2, and 1 for n <= 1.
double survival_law_inv_width(double t, std::uint64_t n);

// Poisson-binomial pmf of the survivor count over {0..N} with survival
// probabilities exp(-lambda_j t). Entry 0 equals prod_{j<=N}(1-exp(-lambda_j t)).
std::vector<double> alpha_pmf_exact(const IntensityModel& model, double t,
                                    std::uint32_t truncation);
std::vector<double> alpha_pmf_exact(double t, std::uint32_t truncation);

// Default-model bound P{alpha(t) >= n} <= exp(-nt)(1 + (1-e^{-1})/t),
// clipped to [0,1]; n = 0 gives 1. Domain t in (0,1).
double dimension_tail_bound(double t, std::uint64_t n);

enum class AsymptoteKind { diag_mean, ell_mean, phi, alpha_scale, c_scale };

// Small-t reference functions; domain 0 < t <= 1/e.
double asymptote(AsymptoteKind, double t);

// Exact Kolmogorov width of the ellipsoid: d_n = 1/b_{n+1} (the optimal
// subspace is the span of the first n coordinates for monotone weights).
double kolmogorov_width_ellipsoid(std::uint64_t n, const EllipsoidRule& rule = {});

// Coordinate-subspace upper bound sqrt(sum_{k>n} a_k^2) for the diagonal
// compact; the exact width of that set is not computed here.
double kolmogorov_width_diagonal_ub(std::uint64_t n, const DiagonalRule& rule = {});

// ln c(t) where c(t) = prod_{j>=1}(1 - exp(-jt)) = P{alpha(t) = 0},
// via direct summation with remainder < tol.
double log_euler_product(double t, double tol);

// Same quantity through the modular transformation of the Euler product:
// -pi^2/(6t) + ln(2*pi/t)/2 + t/24 + sum_n ln(1 - exp(-4*pi^2*n/t)).
// Agrees with log_euler_product to near machine precision; the correction
// sum is negligible for small t.
double log_euler_product_eta(double t);

}  // namespace rpsemi
