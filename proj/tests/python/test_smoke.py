import math

import rpsemi


def test_exact_values():
    assert math.isclose(rpsemi.mean_width_sq_diag(0.1), 0.3327446211048814, rel_tol=1e-12)
    assert math.isclose(rpsemi.var_width_sq_diag(0.1), 0.099463755979753, rel_tol=1e-10)
    assert math.isclose(rpsemi.mean_width_sq_ell(0.1), 0.17947933470324884, rel_tol=1e-12)
    assert math.isclose(
        rpsemi.survival_law_inv_width(0.3, 2), math.exp(-0.3), rel_tol=1e-14
    )
    assert math.isclose(
        rpsemi.mean_width_sq_diag_quadrature(0.1),
        rpsemi.mean_width_sq_diag(0.1),
        abs_tol=1e-7,
    )
    assert math.isclose(
        rpsemi.asymptote("diag_mean", 0.1), 0.1 * math.log(10.0), rel_tol=1e-14
    )
    assert rpsemi.truncation_index(1.0, 1e-9) == 21


def test_alpha_pmf():
    n = rpsemi.truncation_index(0.5, 1e-9)
    pmf = rpsemi.alpha_pmf(0.5, n)
    assert len(pmf) == n + 1
    assert math.isclose(sum(pmf), 1.0, rel_tol=1e-12)
    assert math.isclose(pmf[0], 0.13485937957882912, rel_tol=1e-11)
    mean = sum(j * p for j, p in enumerate(pmf))
    assert math.isclose(mean, 1.5414940818278575, rel_tol=1e-11)


def test_run_experiment_determinism_and_sanity():
    rows1 = rpsemi.run_experiment("width_diag", [0.1, 1.0], 20000, 42, workers=1)
    rows4 = rpsemi.run_experiment("width_diag", [0.1, 1.0], 20000, 42, workers=4)
    assert rows1 == rows4
    for row, target in zip(rows1, (0.3327446211048814, 1.2361797794993302)):
        assert abs(row["mean"] - target) <= 4.0 * row["std_error"]
        assert row["n_paths"] == 20000

    alpha = rpsemi.run_experiment("alpha", [1.0], 20000, 7)[0]
    assert abs(alpha["mean"] - rpsemi.expected_alpha(1.0)) <= 4.0 * alpha["std_error"]


def test_point_eval_families():
    r = rpsemi.point_eval_demo("rademacher", 1000, 9)
    assert r["nonvanishing_fraction"] == 1.0
    assert r["second_moment_estimate"] == 1.0
    lin = rpsemi.point_eval_demo("linear", 50000, 9)
    assert abs(lin["second_moment_estimate"] - 4.0 / 3.0) <= 4.0 * lin["second_moment_stderr"]


def test_condexp_diagnostics():
    d = rpsemi.condexp_diagnostics(5.0, 128, 3)
    assert d["rank"] == d["nu"] + 1
    assert math.isclose(d["trace"], d["rank"], abs_tol=1e-9)
    assert math.isclose(d["hs_full_sum"], d["rank"], abs_tol=1e-10)
    cuts = rpsemi.sample_partition(5.0, 3)
    assert cuts == sorted(cuts)
    assert all(0.0 < c < 1.0 for c in cuts)
