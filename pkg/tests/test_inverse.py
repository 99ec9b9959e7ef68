import math

import numpy as np
import pytest

from loopfield import (
    FieldReal,
    GraphError,
    build_graph,
    condition,
    forward_enlarged,
    forward_rk_coupling,
    init_inverse_from_field,
    init_inverse_from_field_and_config,
    init_inverse_from_counts,
    invert_current_from_fk,
    invert_loop_soup,
    reconstruct_initial_field,
    run_inverse,
    run_inverse_discrete,
    run_inverse_jump_rates,
    sample_gff,
)
from loopfield.inverse import _zt_poisson
from loopfield.loops import fields as soup_fields
from loopfield.stats import make_rng


def single_edge():
    return build_graph({"vertices": ["a", "b"], "edges": [["a", "b", 1.0]],
                        "kappa": {"a": 1.0}})


def path3():
    return build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
        "kappa": {"a": 1.0},
    })


def test_zero_truncated_poisson():
    rng = make_rng(1, "ztp")
    lam = 1.7
    draws = np.array([_zt_poisson(rng, lam) for _ in range(20_000)])
    assert draws.min() >= 1
    mean = lam / -math.expm1(-lam)
    # Var = mean (1 + lam - mean)
    var = mean * (1.0 + lam - mean)
    assert abs(draws.mean() - mean) < 4.5 * math.sqrt(var / draws.size)
    with pytest.raises(GraphError):
        _zt_poisson(rng, 0.0)


def test_init_from_field_loads_equal_sign_edges_only():
    g = path3()
    phi = FieldReal(np.array([1.0, -0.8, 1.2]))
    rng = make_rng(2, "init")
    st = init_inverse_from_field(g, phi, 0, rng)
    counts = st.counts()
    assert counts[0] == 0 and counts[1] == 0  # sign changes across both edges
    assert st.open_edges() == frozenset()


def test_init_requires_positive_pin():
    g = path3()
    rng = make_rng(3, "init")
    with pytest.raises(GraphError):
        init_inverse_from_field(g, FieldReal(np.array([0.0, 1.0, 1.0])), 0, rng)
    with pytest.raises(GraphError):
        init_inverse_from_field(g, FieldReal(np.array([-1.0, 1.0, 1.0])), 0, rng)


def test_init_given_open_forces_positive_counts():
    g = path3()
    phi = FieldReal(np.array([1.0, 0.8, 1.2]))
    rng = make_rng(4, "init")
    for _ in range(50):
        st = init_inverse_from_field(g, phi, 0, rng, given_open=[0, 1])
        assert np.all(st.counts() >= 1)
    for _ in range(50):
        st = init_inverse_from_field_and_config(g, phi, 0, [0, 1], rng)
        assert np.all(st.counts() >= 1)


def test_run_inverse_conservation():
    g = path3()
    rng = make_rng(5, "run")
    for _ in range(100):
        phi = sample_gff(g, condition({0: math.sqrt(2.0)}), rng)
        st = init_inverse_from_field(g, phi, 0, rng)
        run = run_inverse(st, rng)
        assert run.terminal_vertex == 0
        assert run.terminal_sq[0] == 0.0
        assert run.containment_violations == 0
        # each vertex's squared magnitude decays by twice its local time
        assert np.allclose(run.terminal_sq, phi.values ** 2 - 2 * st.ell,
                           atol=1e-9)
        assert math.isclose(run.duration, float(st.ell.sum()), rel_tol=1e-9)
        times = [ev.time for ev in run.events]
        assert times == sorted(times)
        assert np.allclose(run.trajectory.local_times(g), st.ell, atol=1e-9)


def test_reconstruct_initial_field():
    g = path3()
    rng = make_rng(6, "rec")
    phi = sample_gff(g, condition({0: 2.0}), rng)
    st = init_inverse_from_field(g, phi, 0, rng)
    run = run_inverse(st, rng)
    rec = reconstruct_initial_field(g, run, rng)
    assert np.allclose(rec.values ** 2, run.terminal_sq, atol=1e-12)
    # signs constant across the terminal open set
    for eid in run.terminal_open:
        e = g.edges[g.edge_position(eid)]
        assert rec.signs[e.u] == rec.signs[e.v]


def test_discrete_chain_single_edge_two_points():
    g = single_edge()
    rng = make_rng(7, "disc")
    n = 4000
    hits = {0: 0, 2: 0}
    for _ in range(n):
        run = run_inverse_discrete(g, 0, [2], rng)
        assert run.terminal_vertex == 0
        assert np.array_equal(run.remaining, [0])
        hits[int(run.crossings[0])] += 1
    # two stack points: the free pop moves or stays 1/2-1/2, the last is
    # forced back to the pin, so crossings are 0 or 2 equally often
    assert set(hits) == {0, 2}
    se = math.sqrt(0.25 / n)
    assert abs(hits[2] / n - 0.5) < 4.5 * se


def test_jump_rate_engine_terminates_at_pin():
    g = path3()
    phi = FieldReal(np.array([1.1, 0.9, 1.3]))
    rng = make_rng(8, "rate")
    for _ in range(50):
        run = run_inverse_jump_rates(g, phi, 0, [0, 1], rng)
        assert run.terminal_vertex == 0
        assert run.terminal_sq[0] == 0.0
        assert run.duration > 0
        assert run.terminal_open <= frozenset([0, 1])


def test_forward_enlarged_square_identity():
    g = path3()
    rng = make_rng(9, "fwd")
    for _ in range(100):
        run = forward_enlarged(g, 0, 0.75, rng)
        lt = run.trajectory.local_times(g)
        # level-u field squares to the initial square plus twice local time
        assert np.allclose(run.phi_u.values ** 2,
                           run.phi0.values ** 2 + 2 * lt, atol=1e-9)
        assert abs(run.phi_u.values[0]) == pytest.approx(math.sqrt(1.5))
        times = [ev.time for ev in run.events]
        assert times == sorted(times)


def test_forward_coupling_conserves_open_set():
    g = path3()
    rng = make_rng(10, "fc")
    for _ in range(100):
        cpl = forward_rk_coupling(g, 0, 0.6, rng)
        crossed = {g.edges[pos].id
                   for pos, k in enumerate(cpl.trajectory.crossings(g)) if k}
        # edges open at time 0 or crossed by the walk stay open at level u
        assert cpl.open0 | crossed <= cpl.open_u


def test_invert_loop_soup_occupation_identity():
    g = path3()
    rng = make_rng(11, "ils")
    phi = sample_gff(g, condition(None), rng)
    while np.any(phi.values == 0.0):  # full support needed
        phi = sample_gff(g, condition(None), rng)
    soup = invert_loop_soup(g, phi, rng)
    occ, _ = soup_fields(g, soup)
    assert np.allclose(2.0 * occ, phi.values ** 2, atol=1e-9)
    assert soup.alpha == 0.5
    with pytest.raises(GraphError):
        invert_loop_soup(g, FieldReal(np.array([1.0, 0.0, 1.0])), rng)


def test_invert_current_validation_and_parity():
    g = path3()
    rng = make_rng(12, "ic")
    with pytest.raises(GraphError):
        invert_current_from_fk(g, 1.0, [0], rng, stack_law="bogus")
    with pytest.raises(GraphError):
        invert_current_from_fk(g, 1.0, [0], rng, enumeration=[0, 0, 1])
    for _ in range(100):
        cur = invert_current_from_fk(g, 1.0, [0, 1], rng)
        deg = np.zeros(g.n, dtype=int)
        for pos, k in enumerate(cur):
            deg[g.edges[pos].u] += k
            deg[g.edges[pos].v] += k
        assert np.all(deg % 2 == 0)


def test_counts_initializer_matches_given_counts():
    g = path3()
    phi = FieldReal(np.array([1.0, 1.1, 0.9]))
    st = init_inverse_from_counts(g, phi, 0, [3, 0], make_rng(13, "cnt"))
    assert np.array_equal(st.counts(), [3, 0])
    assert st.open_edges() == frozenset([0])
