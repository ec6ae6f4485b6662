#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rpsemi::verify {

struct VerifyOptions {
  std::uint64_t paths = 100000;
  std::uint64_t fields = 10000;
  std::uint64_t master_seed = 7;
  unsigned workers = 0;
};

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string details;
};

// Suites: "semigroup", "widths", "dimension", "randomop", "repro", "all".
// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opts);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace rpsemi::verify
