#pragma once

#include <cstddef>
#include <span>

namespace rpsemi::specfun {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kZeta2 = 1.6449340668482264365;  // pi^2/6 = sum 1/n^2
inline constexpr double kZeta3 = 1.2020569031595942854;  // sum 1/n^3

// psi'(x) = sum_{k>=0} 1/(x+k)^2 for x > 0. Used for the exact tail mass
// sum_{n>N} 1/n^2 = trigamma(N+1).
double trigamma(double x);

// Dilogarithm Li2(x) on [0, 1].
double dilog(double x);

// Power series for Li2; requires |x| <= 0.5 where it converges fast.
double dilog_small(double x);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi_square_cdf(double x, double df);
double chi_square_sf(double x, double df);

struct QuadNode {
  double x;
  double w;
};

// Gauss-Legendre nodes/weights on [-1,1]; computed once per order and cached.
std::span<const QuadNode> gauss_legendre(std::size_t order);

template <class F>
double integrate(F&& f, double a, double b, std::size_t order = 32) {
  const auto nodes = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (const auto& n : nodes) acc += n.w * f(mid + half * n.x);
  return acc * half;
}

}  // namespace rpsemi::specfun
