import math

import numpy as np
import pytest

from loopfield import (
    FieldReal,
    GraphError,
    build_graph,
    clusters,
    condition,
    current_exact,
    current_fk_forward,
    fk_exact,
    fk_from_field,
    interaction_weights,
    ising_exact,
    sample_gff,
    sign_sample_on_clusters,
)
from loopfield.stats import make_rng


def single_edge(w=1.0):
    return build_graph({"vertices": ["a", "b"], "edges": [["a", "b", w]],
                        "kappa": {"a": 1.0}})


def triangle():
    return build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0], ["a", "c", 1.0]],
        "kappa": {"a": 1.0},
    })


def test_interaction_weights():
    g = triangle()
    j = interaction_weights(g, [1.0, 2.0, 0.5])
    assert np.allclose(j, [2.0, 1.0, 0.5])  # W |phi_u| |phi_v| per edge


def test_single_edge_identities():
    for j in (0.3, 1.0, 2.0):
        g = single_edge()
        spins = ising_exact(g, j)
        fk = fk_exact(g, j)
        cur = current_exact(g, j, n_max=40)
        # <sigma_a sigma_b> = tanh J
        corr = sum(p * o[0] * o[1] for o, p in zip(spins.outcomes, spins.probs))
        assert math.isclose(corr, math.tanh(j), rel_tol=1e-12)
        # P(edge open) = tanh J
        assert math.isclose(fk.prob((1,)), math.tanh(j), rel_tol=1e-12)
        # P(current 0) = 1 / cosh J
        assert math.isclose(cur.prob((0,)), 1.0 / math.cosh(j), rel_tol=1e-10)
        # Z_spin = 4 cosh J on a single edge
        assert math.isclose(spins.log_z, math.log(4.0 * math.cosh(j)),
                            rel_tol=1e-12)


def test_partition_function_identities():
    g = triangle()
    j = np.array([0.5, 0.8, 0.3])
    spins = ising_exact(g, j)
    fk = fk_exact(g, j)
    cur = current_exact(g, j, n_max=30)
    n_log2 = g.n * math.log(2.0)
    assert math.isclose(spins.log_z, n_log2 + cur.log_z, rel_tol=1e-10)
    assert math.isclose(spins.log_z, float(j.sum()) + fk.log_z, rel_tol=1e-10)


def test_spin_correlation_equals_connection_probability():
    g = triangle()
    j = np.array([0.4, 0.9, 0.2])
    spins = ising_exact(g, j)
    fk = fk_exact(g, j)
    for x, y in ((0, 1), (1, 2), (0, 2)):
        corr = sum(p * o[x] * o[y] for o, p in zip(spins.outcomes, spins.probs))
        conn = 0.0
        for om, p in zip(fk.outcomes, fk.probs):
            ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
            if clusters(g, ids).same(x, y):
                conn += p
        assert math.isclose(corr, conn, rel_tol=1e-10)


def test_cluster_sign_pushforward_is_spin_law():
    g = triangle()
    j = np.array([0.5, 0.8, 0.3])
    fk = fk_exact(g, j)
    spins = ising_exact(g, j)
    push = {}
    for om, p in zip(fk.outcomes, fk.probs):
        ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
        part = clusters(g, ids)
        # each cluster flips a fair coin; enumerate the 2^k sign choices
        k = part.count
        for mask in range(1 << k):
            sig = tuple(1 if (mask >> part.assignment[x]) & 1 else -1
                        for x in range(g.n))
            push[sig] = push.get(sig, 0.0) + p / (1 << k)
    tv = 0.5 * sum(abs(push.get(o, 0.0) - q)
                   for o, q in zip(spins.outcomes, spins.probs))
    assert tv < 1e-10


def test_current_outcomes_are_source_free():
    g = triangle()
    cur = current_exact(g, 0.6, n_max=10)
    assert math.isclose(float(cur.probs.sum()), 1.0, rel_tol=1e-9)
    assert cur.truncation_bound < 1e-6
    for om in cur.outcomes:
        deg = np.zeros(g.n, dtype=int)
        for pos, ncur in enumerate(om):
            deg[g.edges[pos].u] += ncur
            deg[g.edges[pos].v] += ncur
        assert np.all(deg % 2 == 0)


def test_fk_from_field_respects_signs():
    g = triangle()
    phi = FieldReal(np.array([1.0, -1.0, 2.0]))
    rng = make_rng(7, "fk")
    for _ in range(200):
        open_ids = fk_from_field(g, phi, rng)
        # an edge with opposite endpoint signs can never open
        assert 0 not in open_ids  # a-b
        assert 1 not in open_ids  # b-c


def test_fk_from_field_open_probability():
    g = single_edge()
    phi = FieldReal(np.array([0.8, 1.1]))
    p = -math.expm1(-2.0 * 0.8 * 1.1)
    rng = make_rng(8, "fk-p")
    n = 4000
    hits = sum(1 for _ in range(n) if 0 in fk_from_field(g, phi, rng))
    se = math.sqrt(p * (1 - p) / n)
    assert abs(hits / n - p) < 4.5 * se


def test_sign_sample_constant_on_clusters():
    g = triangle()
    rng = make_rng(9, "signs")
    for _ in range(100):
        sig = sign_sample_on_clusters(g, [0], rng, pin=0)
        assert sig[0] == 1
        assert sig[1] == sig[0]  # a-b open forces equal signs
        assert sig[2] in (-1, 1)


def test_current_fk_forward_opens_every_used_edge():
    g = triangle()
    j = np.array([0.5, 0.8, 0.3])
    cur = current_exact(g, j, n_max=10)
    rng = make_rng(10, "cur-fwd")
    for _ in range(100):
        ncur = cur.sample(rng)
        open_ids = current_fk_forward(g, j, ncur, rng)
        for pos, k in enumerate(ncur):
            if k > 0:
                assert g.edges[pos].id in open_ids


def test_discrete_distribution_helpers():
    g = single_edge()
    fk = fk_exact(g, 1.0)
    assert fk.prob((7,)) == 0.0
    assert fk.tv_distance(fk) == 0.0
    draws = fk.sample(make_rng(11, "dd"), size=5)
    assert len(draws) == 5
    assert all(d in fk.outcomes for d in draws)


def test_weight_validation():
    g = triangle()
    with pytest.raises(GraphError):
        ising_exact(g, [0.1, 0.2])  # one weight per edge
    with pytest.raises(GraphError):
        fk_exact(g, [-0.5, 0.1, 0.1])
    big = build_graph({
        "vertices": [f"v{i}" for i in range(17)],
        "edges": [[f"v{i}", f"v{i + 1}", 1.0] for i in range(16)],
        "kappa": {"v0": 1.0},
    })
    with pytest.raises(GraphError):
        ising_exact(big, 0.5)


def test_field_coupling_round_trip_consistency():
    # open sets drawn from a pinned field are a subset of same-sign edges
    g = triangle()
    rng = make_rng(12, "roundtrip")
    phi = sample_gff(g, condition({0: 1.0}), rng)
    open_ids = fk_from_field(g, phi, rng)
    sgn = phi.signs
    for eid in open_ids:
        e = g.edges[g.edge_position(eid)]
        assert sgn[e.u] == sgn[e.v]
