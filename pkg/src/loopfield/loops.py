"""Rooted loop ensembles on a transient network.

A loop rooted at x is a path that starts and ends at x.  The ensemble with
intensity alpha > 0 is sampled vertex by vertex along an enumeration
x_1, ..., x_n of the vertices: the loops through x_1, then the loops through
x_2 avoiding x_1, and so on.  Avoidance is implemented by deleting the
already-processed vertices and transferring the conductances of deleted
edges into killing at the surviving endpoints, which preserves the law of
the killed walk on the remaining graph.

For a fixed root x the total local time spent at x by all loops through x is
Gamma(alpha, G(x, x)) distributed (shape-scale), and given that total the
concatenated path is the walk conditioned to return, cut at the points of a
Poisson-Dirichlet PD(0, alpha) partition of the local time interval.  The
stick-breaking construction emits blocks in size-biased order; it is
truncated when the undivided remainder falls below ``eps`` of the total, and
the corresponding final segment of the path is emitted as one last loop so
that occupation times are conserved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import (
    Graph,
    GraphError,
    component_subgraph,
    delete_vertices,
    green_function,
)
from .jump import JUMP, Step, Trajectory, excursion_split, run_conditioned_to_return


@dataclass(frozen=True)
class PDPartition:
    """Stick-breaking blocks of the unit interval, in generation order.

    blocks[j] = B_j * prod_{i<j} (1 - B_i) with B_i iid Beta(1, alpha);
    ``remainder`` is the mass left when breaking stopped, so
    sum(blocks) + remainder == 1 exactly up to rounding.
    """

    alpha: float
    blocks: tuple[float, ...]
    remainder: float


def sample_pd_partition(alpha: float, rng: np.random.Generator,
                        eps: float = 1e-9) -> PDPartition:
    """Stick-breaking sample of PD(0, alpha), truncated at remainder < eps."""
    if not (alpha > 0):
        raise GraphError(f"alpha must be positive, got {alpha}")
    if not (0 < eps < 1):
        raise GraphError(f"eps must be in (0, 1), got {eps}")
    blocks: list[float] = []
    remaining = 1.0
    while remaining >= eps:
        b = rng.beta(1.0, alpha)
        blocks.append(remaining * b)
        remaining *= 1.0 - b
    return PDPartition(alpha=alpha, blocks=tuple(blocks), remainder=remaining)


@dataclass
class LoopSoupSample:
    """A finite sample of rooted loops; each loop is a Trajectory whose
    `start` is its root."""

    alpha: float
    loops: tuple[Trajectory, ...]


def sample_loops_at_vertex(g: Graph, x: int, alpha: float,
                           rng: np.random.Generator,
                           eps: float = 1e-9) -> list[Trajectory]:
    """All loops of the intensity-alpha ensemble that visit vertex x.

    Total local time at x is Gamma(alpha, G(x,x)); the conditioned-return
    path at that inverse local time is cut at PD(0, alpha) points.
    """
    gr = green_function(g)
    total = float(rng.gamma(alpha, gr[x, x]))
    if total <= 0.0:  # numerically possible for tiny shape values
        return []
    traj = run_conditioned_to_return(g, x, total, rng)
    pd = sample_pd_partition(alpha, rng, eps)
    cuts = []
    acc = 0.0
    for y in pd.blocks:
        acc += y
        t = total * acc
        # guard against rounding: splits must stay strictly inside (0, total)
        if t >= total * (1.0 - 1e-15):
            break
        if cuts and t <= cuts[-1]:
            continue
        cuts.append(t)
    return excursion_split(traj, x, cuts)


def sample_loop_soup(g: Graph, alpha: float, rng: np.random.Generator,
                     enumeration: Sequence[int] | None = None,
                     eps: float = 1e-9) -> LoopSoupSample:
    """Sample the full loop ensemble along a vertex enumeration.

    Stage i draws the loops through ``enumeration[i]`` in the graph with the
    earlier vertices deleted (their edge conductances turned into killing).
    Loops are returned in the original graph's vertex indexing and keep
    original edge ids.  The ensemble's law does not depend on the
    enumeration; the default is declaration order.
    """
    if not g.is_transient():
        raise GraphError("loop ensemble needs a transient network")
    order = list(range(g.n)) if enumeration is None else [int(v) for v in enumeration]
    if sorted(order) != list(range(g.n)):
        raise GraphError("enumeration must be a permutation of all vertices")

    loops: list[Trajectory] = []
    for i, x in enumerate(order):
        if i == 0:
            sub, to_orig = component_subgraph(g, x)
        else:
            reduced = delete_vertices(g, order[:i])
            kept = [v for v in range(g.n) if v not in set(order[:i])]
            pos = kept.index(x)
            sub, to_sub_orig = component_subgraph(reduced, pos)
            to_orig = tuple(kept[j] for j in to_sub_orig)
        x_sub = to_orig.index(x)
        for lp in sample_loops_at_vertex(sub, x_sub, alpha, rng, eps):
            steps = tuple(
                Step(to_orig[s.vertex], s.holding, s.exit, s.edge) for s in lp.steps
            )
            loops.append(Trajectory(start=x, steps=steps, reached=True))
    return LoopSoupSample(alpha=alpha, loops=tuple(loops))


def fields(g: Graph, soup: LoopSoupSample) -> tuple[np.ndarray, np.ndarray]:
    """Occupation and crossing fields of a loop sample.

    Returns ``(L, N)``: ``L[x]`` is the total time the loops spend at x and
    ``N[e]`` the total number of traversals of edge e (by edge position).
    """
    ell = np.zeros(g.n)
    crossings = np.zeros(g.m, dtype=int)
    for lp in soup.loops:
        for s in lp.steps:
            ell[s.vertex] += s.holding
            if s.exit == JUMP:
                crossings[g.edge_position(s.edge)] += 1
    return ell, crossings
