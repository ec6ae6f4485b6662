#include "rpsemi/intensity.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rpsemi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

double RateRule::rate(std::uint64_t k) const {
  const double kd = static_cast<double>(k);
  switch (family) {
    case RateFamily::linear:
      return c * kd;
    case RateFamily::power:
      return c * std::pow(kd, p);
    case RateFamily::constant:
      return c;
    case RateFamily::log:
      return c * std::log(kd + 1.0);
  }
  return 0.0;
}

double RateRule::survivor_tail_bound(std::uint64_t n, double t) const {
  const double nd = static_cast<double>(n);
  switch (family) {
    case RateFamily::linear: {
      // Geometric: sum_{k>n} exp(-c k t) = exp(-c(n+1)t)/(1-exp(-ct)).
      const double den = -std::expm1(-c * t);
      return std::exp(-c * (nd + 1.0) * t) / den;
    }
    case RateFamily::power: {
      // k^p >= (n+1)^{p-1} k for k >= n+1 linearizes the exponent, leaving a
      // geometric sum with ratio exp(-c t (n+1)^{p-1}).
      const double slope = std::pow(nd + 1.0, p - 1.0);
      const double den = -std::expm1(-c * t * slope);
      return std::exp(-c * t * slope * (nd + 1.0)) / den;
    }
    case RateFamily::constant:
      return kInf;  // terms exp(-c t) do not vanish
    case RateFamily::log: {
      // exp(-t c ln(k+1)) = (k+1)^{-ct}; p-series integral bound, or divergent.
      const double ct = c * t;
      if (ct <= 1.0) return kInf;
      return std::pow(nd + 1.0, 1.0 - ct) / (ct - 1.0);
    }
  }
  return kInf;
}

RateRule RateRule::linear(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("linear rate: scale must be > 0");
  return {RateFamily::linear, c, 2.0};
}

RateRule RateRule::power(double p, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("power rate: scale must be > 0");
  if (!(p > 1.0)) throw std::invalid_argument("power rate: exponent must be > 1");
  return {RateFamily::power, c, p};
}

RateRule RateRule::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant rate: scale must be > 0");
  return {RateFamily::constant, c, 2.0};
}

RateRule RateRule::logarithmic(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("log rate: scale must be > 0");
  return {RateFamily::log, c, 2.0};
}

IntensityModel IntensityModel::linear(double c) {
  IntensityModel m;
  m.tail_ = RateRule::linear(c);
  m.desc_ = "linear:" + fmt_num(c);
  return m;
}

IntensityModel IntensityModel::power(double p, double c) {
  IntensityModel m;
  m.tail_ = RateRule::power(p, c);
  m.desc_ = "power:" + fmt_num(p) + ":" + fmt_num(c);
  return m;
}

IntensityModel IntensityModel::table(std::vector<double> values, RateRule tail) {
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("table model: all rates must be > 0");
  }
  IntensityModel m;
  m.table_ = std::move(values);
  m.tail_ = tail;
  m.has_table_ = true;
  m.desc_ = "table[" + std::to_string(m.table_.size()) + "]";
  return m;
}

double IntensityModel::rate(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("rate: index must be >= 1");
  if (has_table_ && k <= table_.size()) return table_[k - 1];
  return tail_.rate(k);
}

Condition2Report IntensityModel::check_condition2() const {
  // A finite table prefix never affects convergence; only the tail family does.
  switch (tail_.family) {
    case RateFamily::linear:
      return {true, "exp(-rho*c*k) is geometrically summable for every rho > 0"};
    case RateFamily::power:
      return {true, "exp(-rho*c*k^p), p > 1, is dominated by a geometric series"};
    case RateFamily::constant:
      return {false, "terms exp(-rho*c) do not vanish, the series diverges"};
    case RateFamily::log:
      return {false, "sum (k+1)^(-rho*c) diverges for rho <= 1/c"};
  }
  return {false, "unknown family"};
}

double IntensityModel::survivor_tail_bound(std::uint64_t n, double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("survivor_tail_bound: t must be > 0");
  if (!has_table_ || n >= table_.size()) return tail_.survivor_tail_bound(n, t);
  double head = 0.0;
  for (std::uint64_t k = n + 1; k <= table_.size(); ++k) {
    head += std::exp(-table_[k - 1] * t);
  }
  return head + tail_.survivor_tail_bound(table_.size(), t);
}

std::uint64_t IntensityModel::truncation_index(double t, double eps) const {
  if (!(t > 0.0)) {
    throw std::invalid_argument("truncation_index: t must be > 0 (at t = 0 all coordinates survive)");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("truncation_index: eps must be in (0,1)");
  }
  const auto report = check_condition2();
  if (!report.passes) {
    throw std::domain_error("truncation_index: summability condition fails (" + report.reason + ")");
  }
  if (survivor_tail_bound(0, t) <= eps) return 0;
  std::uint64_t hi = 1;
  while (survivor_tail_bound(hi, t) > eps) {
    if (hi > (std::uint64_t{1} << 40)) {
      throw std::runtime_error("truncation_index: no feasible truncation found");
    }
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // bound(lo) > eps, bound(hi) <= eps
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (survivor_tail_bound(mid, t) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double IntensityModel::expected_alpha(double t, double tol) const {
  if (!(t > 0.0)) throw std::invalid_argument("expected_alpha: t must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("expected_alpha: tol must be > 0");
  if (auto c = linear_scale()) {
    return 1.0 / std::expm1(*c * t);  // sum exp(-ckt) = 1/(e^{ct}-1)
  }
  const auto report = check_condition2();
  if (!report.passes) {
    throw std::domain_error("expected_alpha: series diverges (" + report.reason + ")");
  }
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= (std::uint64_t{1} << 40); ++k) {
    acc += std::exp(-rate(k) * t);
    if (survivor_tail_bound(k, t) <= tol) return acc;
  }
  throw std::runtime_error("expected_alpha: did not converge");
}

double IntensityModel::expected_alpha_truncated(double t, std::uint64_t n) const {
  if (!(t >= 0.0)) throw std::invalid_argument("expected_alpha_truncated: t must be >= 0");
  double acc = 0.0, comp = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double x = std::exp(-rate(k) * t);
    const double s = acc + x;
    comp += (std::abs(acc) >= std::abs(x)) ? (acc - s) + x : (x - s) + acc;
    acc = s;
  }
  return acc + comp;
}

std::optional<double> IntensityModel::linear_scale() const {
  if (!has_table_ && tail_.family == RateFamily::linear) return tail_.c;
  return std::nullopt;
}

bool IntensityModel::is_default_linear() const {
  auto c = linear_scale();
  return c && *c == 1.0;
}

IntensityModel parse_intensity(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);

  auto to_num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("intensity: bad number '" + s + "' in '" + text + "'");
    }
    if (pos != s.size()) {
      throw std::invalid_argument("intensity: bad number '" + s + "' in '" + text + "'");
    }
    return v;
  };

  if (parts.empty() || parts[0].empty()) {
    throw std::invalid_argument("intensity: empty rule string");
  }
  const std::string& fam = parts[0];
  if (fam == "linear") {
    if (parts.size() != 2) throw std::invalid_argument("intensity: expected linear:<c>");
    return IntensityModel::linear(to_num(parts[1]));
  }
  if (fam == "power") {
    if (parts.size() != 3) throw std::invalid_argument("intensity: expected power:<p>:<c>");
    return IntensityModel::power(to_num(parts[1]), to_num(parts[2]));
  }
  if (fam == "table") {
    if (parts.size() < 3) {
      throw std::invalid_argument("intensity: expected table:<path>:<tail-family>:...");
    }
    std::ifstream in(parts[1]);
    if (!in) throw std::invalid_argument("intensity: cannot open table file '" + parts[1] + "'");
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      double v;
      if (ls >> v) values.push_back(v);
    }
    const std::string& tf = parts[2];
    RateRule tail;
    if (tf == "linear" && parts.size() == 4) {
      tail = RateRule::linear(to_num(parts[3]));
    } else if (tf == "power" && parts.size() == 5) {
      tail = RateRule::power(to_num(parts[3]), to_num(parts[4]));
    } else if (tf == "constant" && parts.size() == 4) {
      tail = RateRule::constant(to_num(parts[3]));
    } else if (tf == "log" && parts.size() == 4) {
      tail = RateRule::logarithmic(to_num(parts[3]));
    } else {
      throw std::invalid_argument("intensity: bad tail rule in '" + text + "'");
    }
    return IntensityModel::table(std::move(values), tail);
  }
  throw std::invalid_argument("intensity: unknown family '" + fam + "'");
}

}  // namespace rpsemi
