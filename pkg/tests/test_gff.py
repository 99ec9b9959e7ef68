import math

import numpy as np
import pytest
from scipy.stats import multivariate_normal

from loopfield import (
    FieldReal,
    GraphError,
    build_graph,
    condition,
    conditional_moments,
    dirichlet_form,
    green_function,
    pin,
    sample_gff,
)
from loopfield.stats import make_rng


def path3():
    return build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
        "kappa": {"a": 1.0},
    })


def test_unconditioned_moments_match_green():
    g = path3()
    mom = conditional_moments(g, condition(None))
    assert np.allclose(mom.mean, 0.0)
    assert np.allclose(mom.cov, green_function(g), atol=1e-12)


def test_pinned_moments_two_vertex():
    g = build_graph({"vertices": ["a", "b"], "edges": [["a", "b", 1.0]],
                     "kappa": {"a": 1.0}})
    mom = conditional_moments(g, condition({0: 2.0}))
    # conditioning at a leaves b centred at the pinned value with var 1/W
    assert mom.free == (1,)
    assert np.allclose(mom.mean, [2.0, 2.0])
    assert np.allclose(mom.cov, [[1.0]])


def test_pin_helper_matches_condition():
    g = path3()
    assert pin(g, {"a": 1.0}).pinned == condition({0: 1.0}).pinned


def test_sample_determinism_and_pin():
    g = path3()
    cond = condition({0: 1.5})
    f1 = sample_gff(g, cond, make_rng(11, "gff"))
    f2 = sample_gff(g, cond, make_rng(11, "gff"))
    assert isinstance(f1, FieldReal)
    assert np.array_equal(f1.values, f2.values)
    assert f1.values[0] == 1.5


def test_sample_batch_shape():
    g = path3()
    vals = sample_gff(g, condition(None), make_rng(3, "gff"), size=7)
    assert vals.shape == (7, 3)


def test_sample_moments():
    g = path3()
    n = 60_000
    vals = sample_gff(g, condition(None), make_rng(5, "gff"), size=n)
    gmat = green_function(g)
    se = np.sqrt(np.diag(gmat) / n)
    assert np.all(np.abs(vals.mean(axis=0)) < 5 * se)
    emp = np.cov(vals.T)
    # variance of an empirical covariance entry ~ (G_xx G_yy + G_xy^2)/n
    for i in range(3):
        for j in range(3):
            tol = 5 * math.sqrt((gmat[i, i] * gmat[j, j] + gmat[i, j] ** 2) / n)
            assert abs(emp[i, j] - gmat[i, j]) < tol


def test_log_density_ratio_is_energy_difference():
    g = path3()
    gmat = green_function(g)
    dist = multivariate_normal(mean=np.zeros(3), cov=gmat)
    f = np.array([0.4, -1.1, 0.7])
    ratio = dist.logpdf(f) - dist.logpdf(np.zeros(3))
    assert math.isclose(ratio, -0.5 * dirichlet_form(g, f), rel_tol=1e-10)


def test_field_magnitude_and_signs():
    f = FieldReal(np.array([-1.5, 0.0, 2.0]))
    assert np.allclose(f.magnitude, [1.5, 0.0, 2.0])
    # zero entries carry a + sign by convention
    assert np.array_equal(f.signs, [-1, 1, 1])


def test_condition_rejects_out_of_range_pin():
    g = path3()
    with pytest.raises(GraphError):
        conditional_moments(g, condition({7: 1.0}))
