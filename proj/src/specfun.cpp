#include "rpsemi/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace rpsemi::specfun {

double trigamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("trigamma: x must be > 0");
  double acc = 0.0;
  while (x < 16.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  // Asymptotic series with Bernoulli numbers B2..B14; error < 1e-17 for x >= 16.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 1.0 / 6.0 +
                  inv2 * (-1.0 / 30.0 +
                          inv2 * (1.0 / 42.0 +
                                  inv2 * (-1.0 / 30.0 +
                                          inv2 * (5.0 / 66.0 +
                                                  inv2 * (-691.0 / 2730.0 +
                                                          inv2 * (7.0 / 6.0))))));
  return acc + inv + 0.5 * inv2 + inv * inv2 * series;
}

double dilog_small(double x) {
  if (std::abs(x) > 0.5) throw std::invalid_argument("dilog_small: |x| must be <= 0.5");
  double term = x;
  double acc = x;
  for (int n = 2; n < 200; ++n) {
    term *= x;
    const double add = term / (static_cast<double>(n) * n);
    acc += add;
    if (std::abs(add) < 1e-18 * std::abs(acc) + 1e-300) break;
  }
  return acc;
}

double dilog(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("dilog: x must be in [0,1]");
  if (x <= 0.5) return dilog_small(x);
  if (x == 1.0) return kZeta2;
  return kZeta2 - std::log(x) * std::log1p(-x) - dilog_small(1.0 - x);
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  // Lentz's continued fraction for Q(a,x), x >= a+1.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_cdf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi_square_cdf: df must be > 0");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * df, 0.5 * x);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi_square_sf: df must be > 0");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

namespace {

std::vector<QuadNode> compute_gauss_legendre(std::size_t n) {
  std::vector<QuadNode> out(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<double>(j) * p2) / (j + 1.0);
      }
      pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    out[i] = {-z, 2.0 / ((1.0 - z * z) * pp * pp)};
    out[n - 1 - i] = {z, out[i].w};
  }
  return out;
}

}  // namespace

std::span<const QuadNode> gauss_legendre(std::size_t order) {
  if (order == 0) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mu;
  static std::map<std::size_t, std::vector<QuadNode>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return {it->second.data(), it->second.size()};
}

}  // namespace rpsemi::specfun
