import math

import numpy as np
import pytest

from loopfield.stats import (
    CheckResult,
    bool_check,
    calibration_check,
    chi2_goodness,
    chi2_two_sample,
    exact_check,
    finalize_suite,
    ks_check,
    make_rng,
    moment_check,
)


def test_make_rng_streams():
    a = make_rng(1, "x").random(4)
    b = make_rng(1, "x").random(4)
    c = make_rng(1, "y").random(4)
    d = make_rng(2, "x").random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    # mixed key types are allowed
    make_rng(0, "s", 3, "t").random()


def test_ks_check_behaviour():
    rng = make_rng(3, "ks")
    a, b = rng.normal(size=800), rng.normal(size=800)
    res = ks_check("same law", a, b)
    assert res.kind == "ks" and res.p_value > 0.01
    res = ks_check("shifted", a, b + 1.0)
    assert res.p_value < 1e-6
    with pytest.raises(ValueError):
        ks_check("tiny", a[:5], b)


def test_chi2_goodness_pools_and_rejects_support_violations():
    res = chi2_goodness("fit", {0: 510, 1: 490},
                        {0: 0.5, 1: 0.5})
    assert res.p_value > 0.01
    # mass outside the declared support is an automatic failure
    res = chi2_goodness("bad support", {0: 999, 7: 1}, {0: 1.0})
    assert not res.passed and res.p_value == 0.0
    # sparse categories fold into the rest bucket instead of breaking chi2
    res = chi2_goodness("pooled", {0: 986, 1: 10, 2: 4},
                        {0: 0.986, 1: 0.01, 2: 0.004})
    assert "pooled" in res.detail and res.passed
    res = chi2_goodness("degenerate", {0: 100}, {0: 1.0})
    assert res.passed and res.detail.startswith("degenerate")


def test_chi2_two_sample():
    rng = make_rng(4, "c2")
    a = dict(zip(*np.unique(rng.poisson(2.0, 4000), return_counts=True)))
    b = dict(zip(*np.unique(rng.poisson(2.0, 4000), return_counts=True)))
    c = dict(zip(*np.unique(rng.poisson(3.0, 4000), return_counts=True)))
    a = {int(k): int(v) for k, v in a.items()}
    b = {int(k): int(v) for k, v in b.items()}
    c = {int(k): int(v) for k, v in c.items()}
    assert chi2_two_sample("same", a, b).p_value > 0.01
    assert chi2_two_sample("different", a, c).p_value < 1e-10
    assert chi2_two_sample("point mass", {0: 50}, {0: 60}).passed


def test_calibration_check():
    rng = make_rng(5, "cal")
    p = rng.uniform(0.05, 0.95, size=5000)
    good = (rng.random(5000) < p).astype(float)
    bad = (rng.random(5000) < np.clip(p + 0.15, 0, 1)).astype(float)
    assert calibration_check("calibrated", p, good).p_value > 0.01
    assert calibration_check("miscalibrated", p, bad).p_value < 1e-10
    with pytest.raises(ValueError):
        calibration_check("empty", [], [])


def test_moment_check():
    rng = make_rng(6, "mom")
    x = rng.normal(loc=2.0, size=5000)
    assert moment_check("mean", x, 2.0).passed
    assert not moment_check("wrong mean", x, 2.5).passed
    # vector-valued moments check every component
    xy = np.stack([x, x + 1.0], axis=1)
    assert moment_check("vector", xy, [2.0, 3.0]).passed
    # a deterministic sample falls back to an exact comparison
    assert moment_check("constant", np.full(100, 1.5), 1.5).passed
    assert not moment_check("constant off", np.full(100, 1.5), 1.6).passed
    with pytest.raises(ValueError):
        moment_check("short", [1.0], 1.0)


def test_exact_and_bool_checks():
    assert exact_check("id", 1.0 + 1e-12, 1.0, tol=1e-9).passed
    assert not exact_check("id", 1.1, 1.0, tol=1e-9).passed
    assert bool_check("flag", True).passed
    assert not bool_check("flag", False, detail="why").passed


def test_finalize_suite_bonferroni():
    rng = make_rng(7, "fin")
    a, b = rng.normal(size=500), rng.normal(size=500)
    checks = [
        ks_check("one", a, b),
        ks_check("two", a, b),
        bool_check("structural", True),
        moment_check("m", a, 0.0),
    ]
    rep = finalize_suite("demo", 7, checks, alpha=0.01)
    # only the two p-valued checks share the familywise budget
    assert rep.level == pytest.approx(0.005)
    assert rep.passed
    assert rep.checks[0].threshold == pytest.approx(0.005)
    lines = rep.lines()
    assert lines[0].startswith("suite demo seed=7: PASS (4/4")
    assert all(ln.lstrip().startswith("[pass]") for ln in lines[1:])
    rows = rep.rows()
    assert {r["check"] for r in rows} == {"one", "two", "structural", "m"}
    assert all(r["suite"] == "demo" and r["seed"] == 7 for r in rows)


def test_finalize_suite_adjustment():
    borderline = CheckResult(name="borderline", kind="ks", statistic=1.0,
                             p_value=0.004, passed=True, threshold=None,
                             detail="")
    rep = finalize_suite("demo", 0, [borderline], alpha=0.01)
    assert rep.level == pytest.approx(0.01)
    assert not rep.checks[0].passed  # 0.004 < 0.01 with a single check
    rep4 = finalize_suite("demo", 0, [borderline] * 4, alpha=0.01)
    assert rep4.level == pytest.approx(0.0025)
    assert all(c.passed for c in rep4.checks)  # 0.004 >= 0.01/4
    # rows expose the unadjusted verdict alongside the applied one
    assert all(r["passed_raw"] is False for r in rep4.rows())
