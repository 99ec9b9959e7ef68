"""Markov jump process on a network: inverse local times and excursions.

The walk at x waits an exponential time with rate kappa_x + sum of W_e over
edges at x, then either dies (probability proportional to kappa_x) or crosses
one of the adjacent edges (probability proportional to its conductance).
Time spent sitting at a vertex is its local time.

`run_to_inverse_local_time` runs until the local time accumulated at the root
x0 reaches u, truncating the final holding mid-flight (memorylessness makes
the truncation exact), or until the walk dies, whichever comes first.

`run_conditioned_to_return` samples the walk conditioned to survive until
that local-time level.  Conditioning is implemented exactly, not by
rejection: the conditioned walk is the jump process of the harmonic killing
transform (conductances W h h, killing only at the root, which conditioning
removes) slowed down by h(x)^2 at each vertex.  Holding times are returned
already mapped back to original time, so for zero killing off the root the
output is just the plain walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, harmonic_killing_transform

JUMP = "jump"
KILLED = "killed"
STOPPED = "stopped"


@dataclass(frozen=True)
class Step:
    """One holding period: vertex, duration, and how it ended.

    `exit` is "jump" (with `edge` the edge id crossed), "killed", or
    "stopped" (the run terminated mid-holding).
    """

    vertex: int
    holding: float
    exit: str
    edge: int | None = None


@dataclass
class Trajectory:
    """A finite path of the jump process, as an ordered list of holdings."""

    start: int
    steps: tuple[Step, ...]
    reached: bool

    @property
    def total_time(self) -> float:
        return float(sum(s.holding for s in self.steps))

    @property
    def final_vertex(self) -> int:
        return self.steps[-1].vertex if self.steps else self.start

    def local_times(self, g: Graph) -> np.ndarray:
        ell = np.zeros(g.n)
        for s in self.steps:
            ell[s.vertex] += s.holding
        return ell

    def crossings(self, g: Graph) -> np.ndarray:
        """Number of traversals per edge, indexed by edge position."""
        k = np.zeros(g.m, dtype=int)
        for s in self.steps:
            if s.exit == JUMP:
                k[g.edge_position(s.edge)] += 1
        return k


def _draw_exit(g: Graph, x: int, rng: np.random.Generator, kill: bool):
    """Choose the exit event at x: ('killed', None) or ('jump', edge pos)."""
    kap = g._kappa_arr[x] if kill else 0.0
    total = g._wsum[x] + kap
    pick = rng.random() * total
    if pick < kap:
        return KILLED, None
    acc = kap
    adj = g.adjacency(x)
    for pos, eid, y, w in adj:
        acc += w
        if pick < acc:
            return JUMP, (pos, eid, y)
    pos, eid, y, w = adj[-1]  # guard against rounding at the top end
    return JUMP, (pos, eid, y)


def _run(g: Graph, x0: int, u: float, rng: np.random.Generator, *,
         kill: bool, scale: np.ndarray | None) -> Trajectory:
    if not (0 <= x0 < g.n):
        raise GraphError(f"vertex index {x0} out of range")
    if not (u > 0):
        raise GraphError(f"u must be positive, got {u}")
    steps: list[Step] = []
    x = x0
    ell0 = 0.0  # local time at the root, in the clock used for stopping
    while True:
        kap = g._kappa_arr[x] if kill else 0.0
        total = g._wsum[x] + kap
        hold = rng.exponential(1.0 / total) if total > 0 else math.inf
        if x == x0:
            gap = u - ell0
            if hold >= gap:
                out = gap if scale is None else gap * scale[x]
                steps.append(Step(x, out, STOPPED))
                return Trajectory(start=x0, steps=tuple(steps), reached=True)
            ell0 += hold
        elif not math.isfinite(hold):
            raise GraphError("walk absorbed away from the root: zero exit rate")
        kind, target = _draw_exit(g, x, rng, kill)
        out = hold if scale is None else hold * scale[x]
        if kind == KILLED:
            steps.append(Step(x, out, KILLED))
            return Trajectory(start=x0, steps=tuple(steps), reached=False)
        _, eid, y = target
        steps.append(Step(x, out, JUMP, eid))
        x = y


def run_to_inverse_local_time(g: Graph, x0: int, u: float,
                              rng: np.random.Generator) -> Trajectory:
    """Run the killed walk from x0 until its local time there reaches u.

    Returns a trajectory with ``reached=True`` and exact root local time u,
    or one ending in a "killed" step with ``reached=False``.
    """
    return _run(g, x0, u, rng, kill=True, scale=None)


def run_conditioned_to_return(g: Graph, x0: int, u: float,
                              rng: np.random.Generator) -> Trajectory:
    """The walk conditioned to accumulate root local time u before dying.

    Always returns ``reached=True``.  Killing at the root itself never needs
    conditioning (it only costs a constant factor exp(-kappa_x0 u) on the
    event), so for kappa supported at the root this is the plain walk with
    killing switched off.
    """
    gh, h = harmonic_killing_transform(g, x0)
    if np.all(h == 1.0):
        return _run(gh, x0, u, rng, kill=False, scale=None)
    return _run(gh, x0, u, rng, kill=False, scale=h * h)


def excursion_split(traj: Trajectory, x0: int,
                    thresholds: Sequence[float]) -> list[Trajectory]:
    """Cut a root-to-root trajectory at inverse local times of the root.

    ``thresholds`` must be strictly increasing values in (0, u) where u is
    the root local time of `traj`; the trajectory must start and end at x0
    (exit kind "stopped").  Returns len(thresholds)+1 sub-trajectories, each
    starting and ending at x0, whose concatenation reproduces the input:
    local times are additive across the pieces and crossings are preserved.
    A cut lands inside a holding at the root and splits it in two.
    """
    if traj.start != x0 or not traj.steps or traj.steps[-1].vertex != x0 \
            or traj.steps[-1].exit != STOPPED:
        raise GraphError("trajectory must start and end (stopped) at the root")
    u = float(sum(s.holding for s in traj.steps if s.vertex == x0))
    cuts = [float(t) for t in thresholds]
    for a, b in zip(cuts, cuts[1:]):
        if not (a < b):
            raise GraphError("thresholds must be strictly increasing")
    if cuts and not (0.0 < cuts[0] and cuts[-1] < u):
        raise GraphError(f"thresholds must lie strictly inside (0, {u})")

    pieces: list[Trajectory] = []
    current: list[Step] = []
    ell = 0.0
    k = 0
    for s in traj.steps:
        if s.vertex != x0:
            current.append(s)
            continue
        remaining = s.holding
        while k < len(cuts) and cuts[k] <= ell + remaining:
            part = cuts[k] - ell
            current.append(Step(x0, part, STOPPED))
            pieces.append(Trajectory(start=x0, steps=tuple(current), reached=True))
            current = []
            ell += part
            remaining -= part
            k += 1
        current.append(Step(x0, remaining, s.exit, s.edge))
        ell += remaining
    pieces.append(Trajectory(start=x0, steps=tuple(current), reached=True))
    return pieces
