import math

import numpy as np
import pytest

from loopfield import (
    GraphError,
    build_graph,
    excursion_split,
    run_conditioned_to_return,
    run_to_inverse_local_time,
)
from loopfield.stats import make_rng


def walk_graph():
    # killing away from the root: G(a,a) = 3
    return build_graph({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
        "kappa": {"c": 1.0},
    })


def test_killed_run_bookkeeping():
    g = walk_graph()
    rng = make_rng(2, "jump")
    for _ in range(200):
        traj = run_to_inverse_local_time(g, 0, 0.7, rng)
        lt = traj.local_times(g)
        assert math.isclose(traj.total_time, sum(s.holding for s in traj.steps),
                            rel_tol=1e-12)
        if traj.reached:
            # stopped exactly when the root clock hits u
            assert traj.final_vertex == 0
            assert traj.steps[-1].exit == "stopped"
            assert math.isclose(lt[0], 0.7, rel_tol=1e-12)
        else:
            assert traj.steps[-1].exit == "killed"
            assert lt[0] < 0.7 + 1e-12


def test_killed_run_survival_probability():
    g = walk_graph()
    u = 1.0
    n = 4000
    rng = make_rng(9, "jump-survival")
    hits = np.array([float(run_to_inverse_local_time(g, 0, u, rng).reached)
                     for _ in range(n)])
    p = math.exp(-u / 3.0)  # survival e^{-u/G(a,a)}
    se = math.sqrt(p * (1 - p) / n)
    assert abs(hits.mean() - p) < 4.5 * se


def test_conditioned_run_always_reaches():
    g = walk_graph()
    rng = make_rng(4, "jump-cond")
    for _ in range(300):
        traj = run_conditioned_to_return(g, 0, 0.5, rng)
        assert traj.reached
        assert traj.final_vertex == 0
        assert math.isclose(traj.local_times(g)[0], 0.5, rel_tol=1e-12)
        # every closed root-to-root path crosses each edge an even # of times
        assert np.all(traj.crossings(g) % 2 == 0)


def test_conditioned_run_matches_plain_walk_when_killing_sits_at_root():
    g = build_graph({"vertices": ["a", "b"], "edges": [["a", "b", 1.0]],
                     "kappa": {"a": 2.0}})
    rng = make_rng(6, "jump-root")
    n = 3000
    lb = np.array([run_conditioned_to_return(g, 0, 1.0, rng).local_times(g)[1]
                   for _ in range(n)])
    # unkilled symmetric walk: E l_b(tau_u) = u, Var = 2u * E(holding) = 2u
    se = math.sqrt(2.0 / n)
    assert abs(lb.mean() - 1.0) < 5 * se


def test_excursion_split_conserves_everything():
    g = walk_graph()
    rng = make_rng(8, "jump-split")
    traj = run_conditioned_to_return(g, 0, 2.0, rng)
    pieces = excursion_split(traj, 0, [0.5, 1.25])
    assert len(pieces) == 3
    total_lt = sum(p.local_times(g) for p in pieces)
    total_cr = sum(p.crossings(g) for p in pieces)
    assert np.allclose(total_lt, traj.local_times(g), atol=1e-9)
    assert np.array_equal(total_cr, traj.crossings(g))
    for piece, quota in zip(pieces, (0.5, 0.75, 0.75)):
        assert piece.start == 0
        assert piece.final_vertex == 0
        assert math.isclose(piece.local_times(g)[0], quota, rel_tol=1e-9)


def test_excursion_split_rejects_bad_thresholds():
    g = walk_graph()
    traj = run_conditioned_to_return(g, 0, 1.0, make_rng(1, "jump-bad"))
    with pytest.raises(GraphError):
        excursion_split(traj, 0, [0.8, 0.2])
    with pytest.raises(GraphError):
        excursion_split(traj, 0, [1.5])


def test_u_must_be_positive():
    g = walk_graph()
    with pytest.raises(GraphError):
        run_to_inverse_local_time(g, 0, 0.0, make_rng(0))
    with pytest.raises(GraphError):
        run_conditioned_to_return(g, 0, -1.0, make_rng(0))
