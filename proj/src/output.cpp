#include "rpsemi/output.hpp"

#include <cstdio>

namespace rpsemi {

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_header() {
  return "quantity,t,mc_mean,mc_stderr,exact,asymptote,ratio,censored_fraction";
}

std::string csv_row(const OutputRecord& r) {
  std::string row = r.quantity;
  row += ',';
  row += format_sig12(r.t);
  const std::optional<double>* fields[] = {&r.mc_mean,    &r.mc_stderr,
                                           &r.exact,      &r.asymptote,
                                           &r.ratio,      &r.censored_fraction};
  for (const auto* f : fields) {
    row += ',';
    if (f->has_value()) row += format_sig12(**f);
  }
  return row;
}

std::string to_csv(const std::vector<OutputRecord>& rows) {
  std::string out = csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += csv_row(r);
    out += '\n';
  }
  return out;
}

}  // namespace rpsemi
