#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rpsemi {

// One CSV row. Absent optionals render as empty fields.
struct OutputRecord {
  std::string quantity;
  double t = 0.0;
  std::optional<double> mc_mean;
  std::optional<double> mc_stderr;
  std::optional<double> exact;
  std::optional<double> asymptote;
  std::optional<double> ratio;
  std::optional<double> censored_fraction;
};

// 12 significant digits, shortest form ("%.12g"); byte-stable for equal doubles.
std::string format_sig12(double v);

std::string csv_header();
std::string csv_row(const OutputRecord& r);
std::string to_csv(const std::vector<OutputRecord>& rows);

}  // namespace rpsemi
