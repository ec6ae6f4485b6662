#include <string>

#include "doctest.h"
#include "rpsemi/output.hpp"

using namespace rpsemi;

TEST_CASE("format_sig12 renders 12 significant digits, shortest form") {
  CHECK(format_sig12(0.1) == "0.1");
  CHECK(format_sig12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig12(1e-9) == "1e-09");
  CHECK(format_sig12(0.0) == "0");
  CHECK(format_sig12(0.74081822068171786607) == "0.740818220682");
  CHECK(format_sig12(0.3327446211048814) == "0.332744621105");
  CHECK(format_sig12(-1.6449340668482264365) == "-1.64493406685");
}

TEST_CASE("csv layout: header, optional fields, terminators") {
  CHECK(csv_header() ==
        "quantity,t,mc_mean,mc_stderr,exact,asymptote,ratio,censored_fraction");

  OutputRecord full;
  full.quantity = "width_diag";
  full.t = 0.1;
  full.mc_mean = 0.5;
  full.mc_stderr = 0.001;
  full.exact = 0.25;
  full.asymptote = 0.2;
  full.ratio = 1.25;
  full.censored_fraction = 0.0;
  CHECK(csv_row(full) == "width_diag,0.1,0.5,0.001,0.25,0.2,1.25,0");

  OutputRecord sparse;
  sparse.quantity = "alpha";
  sparse.t = 1.0;
  sparse.exact = 0.5;
  CHECK(csv_row(sparse) == "alpha,1,,,0.5,,,");

  const std::string doc = to_csv({full, sparse});
  CHECK(doc == csv_header() + "\n" + csv_row(full) + "\n" + csv_row(sparse) + "\n");
}
