#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "rpsemi/intensity.hpp"
#include "rpsemi/mc.hpp"
#include "rpsemi/randomop.hpp"
#include "rpsemi/rng.hpp"
#include "rpsemi/specfun.hpp"
#include "rpsemi/widths.hpp"

namespace py = pybind11;
using namespace rpsemi;

namespace {

Quantity parse_quantity(const std::string& name) {
  if (name == "width_diag") return Quantity::width_diag;
  if (name == "width_ellipsoid") return Quantity::width_ellipsoid;
  if (name == "alpha") return Quantity::alpha;
  if (name == "survival_indicator") return Quantity::survival_indicator;
  throw std::invalid_argument("unknown quantity: " + name);
}

TestFamily parse_family(const std::string& name) {
  if (name == "constant") return TestFamily::constant;
  if (name == "linear") return TestFamily::linear;
  if (name == "rademacher") return TestFamily::rademacher;
  throw std::invalid_argument("unknown family: " + name);
}

AsymptoteKind parse_kind(const std::string& name) {
  if (name == "diag_mean") return AsymptoteKind::diag_mean;
  if (name == "ell_mean") return AsymptoteKind::ell_mean;
  if (name == "phi") return AsymptoteKind::phi;
  if (name == "alpha_scale") return AsymptoteKind::alpha_scale;
  if (name == "c_scale") return AsymptoteKind::c_scale;
  throw std::invalid_argument("unknown asymptote kind: " + name);
}

py::list run_experiment_py(const std::string& quantity, std::vector<double> t_grid,
                           std::uint64_t paths, std::uint64_t seed, unsigned workers,
                           double trunc_eps, const std::string& intensity) {
  ExperimentSpec spec;
  spec.quantity = parse_quantity(quantity);
  spec.intensity = parse_intensity(intensity);
  spec.t_grid = std::move(t_grid);
  spec.paths = paths;
  spec.master_seed = seed;
  spec.workers = workers;
  spec.trunc_eps = trunc_eps;
  py::list rows;
  for (const MCEstimate& e : run_experiment(spec)) {
    py::dict row;
    row["t"] = e.t;
    row["mean"] = e.mean;
    row["variance"] = e.variance;
    row["std_error"] = e.std_error;
    row["ci95_lo"] = e.ci95_lo;
    row["ci95_hi"] = e.ci95_hi;
    row["n_paths"] = e.n_paths;
    row["censored_fraction"] = e.censored_fraction;
    rows.append(row);
  }
  return rows;
}

py::dict point_eval_py(const std::string& family, std::uint64_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const PointEvalReport r = point_eval_demo(parse_family(family), n, rng);
  py::dict d;
  d["trials"] = r.trials;
  d["second_moment_estimate"] = r.second_moment_estimate;
  d["second_moment_stderr"] = r.second_moment_stderr;
  d["l2_norm_sq"] = r.l2_norm_sq;
  d["nonvanishing_fraction"] = r.nonvanishing_fraction;
  return d;
}

py::dict condexp_py(double rate, std::size_t grid, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const PoissonPartition part = sample_partition(rate, rng);
  const GridProjectionMatrix op = condexp_matrix(part, grid);
  double trace = 0.0;
  for (std::size_t i = 0; i < op.cells(); ++i) trace += op.at(i, i);
  py::dict d;
  d["nu"] = part.cuts.size();
  d["rank"] = op.rank;
  d["cells"] = op.cells();
  d["trace"] = trace;
  d["hs_full_sum"] = hs_sum_basis(op, op.cells()).back();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Poisson-clock projection semigroup laboratory (native core)";

  m.def("mean_width_sq_diag",
        [](double t, double tol) { return exact_mean_width_sq_diagonal(t, tol); },
        py::arg("t"), py::arg("tol") = 1e-12,
        "E||width||^2 of the diagonal compact under the canonical model");
  m.def("var_width_sq_diag",
        [](double t, double tol) { return exact_var_width_sq_diagonal(t, tol); },
        py::arg("t"), py::arg("tol") = 1e-12);
  m.def("mean_width_sq_ell",
        [](double t, double tol) { return exact_mean_width_sq_ellipsoid(t, tol); },
        py::arg("t"), py::arg("tol") = 1e-15);
  m.def("mean_width_sq_diag_quadrature", &mean_width_sq_diagonal_quadrature,
        py::arg("t"), py::arg("tol") = 1e-9);
  m.def("survival_law_inv_width", &survival_law_inv_width, py::arg("t"), py::arg("n"));
  m.def("alpha_pmf",
        [](double t, std::uint32_t truncation) { return alpha_pmf_exact(t, truncation); },
        py::arg("t"), py::arg("truncation"),
        "Poisson-binomial pmf of the survivor count over {0..truncation}");
  m.def("dimension_tail_bound", &dimension_tail_bound, py::arg("t"), py::arg("n"));
  m.def("log_euler_product",
        [](double t, double tol) { return log_euler_product(t, tol); },
        py::arg("t"), py::arg("tol") = 1e-12);
  m.def("log_euler_product_eta", &log_euler_product_eta, py::arg("t"));
  m.def("expected_alpha",
        [](double t, double tol) {
          return IntensityModel::linear(1.0).expected_alpha(t, tol);
        },
        py::arg("t"), py::arg("tol") = 1e-12);
  m.def("truncation_index",
        [](double t, double eps) {
          return IntensityModel::linear(1.0).truncation_index(t, eps);
        },
        py::arg("t"), py::arg("eps") = 1e-9);
  m.def("asymptote",
        [](const std::string& kind, double t) { return asymptote(parse_kind(kind), t); },
        py::arg("kind"), py::arg("t"),
        "small-t reference: diag_mean, ell_mean, phi, alpha_scale, c_scale");
  m.def("kolmogorov_width_ellipsoid",
        [](std::uint64_t n) { return kolmogorov_width_ellipsoid(n); }, py::arg("n"));
  m.def("trigamma", &specfun::trigamma, py::arg("x"));
  m.def("dilog", &specfun::dilog, py::arg("x"));

  m.def("run_experiment", &run_experiment_py, py::arg("quantity"), py::arg("t_grid"),
        py::arg("paths"), py::arg("seed"), py::arg("workers") = 0,
        py::arg("trunc_eps") = 1e-9, py::arg("intensity") = "linear:1.0",
        "deterministic Monte Carlo runs; rows are dicts keyed by estimate fields");
  m.def("point_eval_demo", &point_eval_py, py::arg("family"), py::arg("n"),
        py::arg("seed"));
  m.def("sample_partition",
        [](double rate, std::uint64_t seed) {
          RngStream rng(seed, 0);
          return sample_partition(rate, rng).cuts;
        },
        py::arg("rate"), py::arg("seed"));
  m.def("condexp_diagnostics", &condexp_py, py::arg("rate"), py::arg("grid"),
        py::arg("seed"));
}
