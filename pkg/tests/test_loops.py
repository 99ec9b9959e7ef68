import math

import numpy as np
import pytest

from loopfield import (
    GraphError,
    build_graph,
    fields,
    green_function,
    sample_loop_soup,
    sample_loops_at_vertex,
    sample_pd_partition,
)
from loopfield.stats import make_rng


def path3():
    return build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
        "kappa": {"a": 1.0},
    })


def test_pd_partition_mass_and_order():
    rng = make_rng(1, "pd")
    for _ in range(50):
        part = sample_pd_partition(0.5, rng)
        assert math.isclose(sum(part.blocks) + part.remainder, 1.0,
                            rel_tol=1e-12)
        assert all(b > 0 for b in part.blocks)
        assert part.remainder < 1e-9


def test_pd_partition_first_block_mean():
    # first stick is Beta(1, alpha): mean 1/(1+alpha)
    rng = make_rng(2, "pd")
    n = 20_000
    alpha = 0.5
    first = np.array([sample_pd_partition(alpha, rng).blocks[0]
                      for _ in range(n)])
    mean = 1.0 / (1.0 + alpha)
    var = alpha / ((1 + alpha) ** 2 * (2 + alpha))
    assert abs(first.mean() - mean) < 4.5 * math.sqrt(var / n)


def test_pd_partition_validation():
    with pytest.raises(GraphError):
        sample_pd_partition(0.0, make_rng(0))
    with pytest.raises(GraphError):
        sample_pd_partition(0.5, make_rng(0), eps=2.0)


def test_loops_at_vertex_are_rooted_closed():
    g = path3()
    rng = make_rng(3, "loops")
    for _ in range(40):
        loops = sample_loops_at_vertex(g, 1, 0.5, rng)
        for lp in loops:
            assert lp.start == 1
            assert lp.final_vertex == 1
            assert lp.total_time > 0
            assert np.all(lp.crossings(g) % 2 == 0)


def test_loop_soup_occupation_moment():
    g = path3()
    rng = make_rng(4, "soup")
    n = 1500
    alpha = 0.5
    occ_b = np.empty(n)
    for i in range(n):
        soup = sample_loop_soup(g, alpha, rng)
        occ_b[i] = fields(g, soup)[0][1]
    gbb = green_function(g)[1, 1]
    # occupation at a vertex is Gamma(alpha, G(x,x))
    mean, var = alpha * gbb, alpha * gbb * gbb
    assert abs(occ_b.mean() - mean) < 4.5 * math.sqrt(var / n)


def test_soup_fields_match_loop_sums():
    g = path3()
    soup = sample_loop_soup(g, 0.5, make_rng(5, "soup"))
    occ, crossings = fields(g, soup)
    occ2 = sum((lp.local_times(g) for lp in soup.loops), np.zeros(g.n))
    cr2 = sum((lp.crossings(g) for lp in soup.loops), np.zeros(g.m, dtype=int))
    assert np.allclose(occ, occ2, atol=1e-12)
    assert np.array_equal(crossings, cr2)


def test_soup_law_ignores_enumeration_in_expectation():
    g = path3()
    n = 1200
    means = []
    for order in ([0, 1, 2], [2, 0, 1]):
        rng = make_rng(6, "soup-order", *[str(v) for v in order])
        occ = np.empty(n)
        for i in range(n):
            soup = sample_loop_soup(g, 0.5, rng, enumeration=order)
            occ[i] = fields(g, soup)[0][2]
        means.append(occ.mean())
    gcc = green_function(g)[2, 2]
    se = math.sqrt(0.5 * gcc * gcc / n)
    assert abs(means[0] - means[1]) < 6 * se


def test_soup_validation():
    g = path3()
    with pytest.raises(GraphError):
        sample_loop_soup(g, 0.5, make_rng(0), enumeration=[0, 0, 1])
    recurrent = build_graph({"vertices": ["a", "b"],
                             "edges": [["a", "b", 1.0]]},
                            allow_recurrent=True)
    with pytest.raises(GraphError):
        sample_loop_soup(recurrent, 0.5, make_rng(0))
