"""Couplings between fields, edge percolation, spins and integer currents.

Given a nonnegative magnitude field Phi, the interaction weight of edge e is
J_e = W_e Phi(e+) Phi(e-).  A signed field phi induces a random open-edge set
where an edge is closed with probability one if its endpoint signs differ and
with probability exp(-2 W_e phi(e+) phi(e-)) otherwise; conditionally on the
magnitudes this is exactly the FK-Ising (q=2 random cluster) law with edge
parameters 1 - exp(-2 J_e), and uniform cluster signs recover the Ising law
with coupling constants J_e.  Integer currents with weights J (even vertex
degrees, weight prod J^n / n!) relate to FK by opening every edge carrying
current and each zero-current edge independently with probability
1 - exp(-J_e).

The *_exact functions enumerate small state spaces and return explicit
distributions; they are the ground truth the samplers are tested against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp
from scipy.stats import poisson as _poisson

from .gff import ConditionSpec, FieldReal, condition, sample_gff
from .graph import Graph, GraphError, clusters
from .jump import Trajectory, run_conditioned_to_return
from .loops import LoopSoupSample, fields as soup_fields

MAX_SPIN_VERTICES = 16
MAX_SUBSET_EDGES = 20
DEFAULT_N_MAX = 40


def interaction_weights(g: Graph, magnitude: Sequence[float]) -> np.ndarray:
    """J_e = W_e Phi(e+) Phi(e-) per edge (by position).  Phi must be >= 0."""
    mag = np.asarray(magnitude, dtype=float)
    if mag.shape != (g.n,):
        raise GraphError(f"magnitude must have one value per vertex, got {mag.shape}")
    if np.any(mag < 0):
        raise GraphError("magnitude field must be nonnegative")
    return np.array([e.w * mag[e.u] * mag[e.v] for e in g.edges])


def fk_from_field(g: Graph, phi: FieldReal, rng: np.random.Generator) -> frozenset[int]:
    """Sample the open-edge set of a signed field.

    An edge with opposite endpoint signs (or a zero endpoint) is closed with
    probability one; otherwise it is closed with probability
    exp(-2 W_e phi(e+) phi(e-)), independently across edges.  Returns open
    edge ids.
    """
    vals = phi.values
    open_ids = []
    for e in g.edges:
        prod = vals[e.u] * vals[e.v]
        if prod <= 0:
            continue
        if rng.random() < -math.expm1(-2.0 * e.w * prod):
            open_ids.append(e.id)
    return frozenset(open_ids)


def sign_sample_on_clusters(g: Graph, open_edges: Iterable[int],
                            rng: np.random.Generator,
                            pin: int | None = None) -> np.ndarray:
    """Uniform +-1 signs, constant on clusters of the open set.

    With ``pin`` given, the cluster containing that vertex is forced to +1.
    """
    part = clusters(g, open_edges)
    flips = np.where(rng.random(part.count) < 0.5, -1, 1)
    if pin is not None:
        flips[part.assignment[pin]] = 1
    return flips[np.asarray(part.assignment)]


def lupu_lift_loopsoup(g: Graph, soup: LoopSoupSample, rng: np.random.Generator,
                       pin: int | None = None) -> tuple[frozenset[int], FieldReal]:
    """Lift a loop ensemble (intensity 1/2) to a signed Gaussian field.

    Opens every edge crossed by a loop, plus each uncrossed edge
    independently with probability 1 - exp(-2 W_e sqrt(L(e+) L(e-))) where L
    is the occupation field; draws uniform signs per cluster of the open set
    (optionally pinned to +1 at ``pin``) and returns
    (open edges, sigma * sqrt(2 L)).  Without pinning the output field has
    the unconditioned Gaussian law.
    """
    occupation, crossings = soup_fields(g, soup)
    open_ids = set()
    for pos, e in enumerate(g.edges):
        if crossings[pos] > 0:
            open_ids.add(e.id)
        else:
            rate = 2.0 * e.w * math.sqrt(occupation[e.u] * occupation[e.v])
            if rate > 0 and rng.random() < -math.expm1(-rate):
                open_ids.add(e.id)
    sigma = sign_sample_on_clusters(g, open_ids, rng, pin=pin)
    phi = FieldReal(sigma * np.sqrt(2.0 * occupation))
    return frozenset(open_ids), phi


# ---------------------------------------------------------------------------
# forward coupling: pinned field + conditioned walk -> field at level u


@dataclass
class ForwardCoupling:
    """One draw of the forward level-u coupling."""

    phi0: FieldReal
    open0: frozenset[int]
    trajectory: Trajectory
    open_u: frozenset[int]
    phi_u: FieldReal


def forward_rk_coupling(g: Graph, x0: int, u: float,
                        rng: np.random.Generator) -> ForwardCoupling:
    """Couple a field pinned to zero at x0 with the conditioned walk.

    Draws phi0 from the law pinned to 0 at x0 and its open-edge set, runs the
    walk conditioned to reach root local time u, then opens, on top of the
    phi0 clusters and the crossed edges, each remaining edge independently
    with probability

        1 - exp( W_e |phi0(e+) phi0(e-)|
                 - W_e sqrt((phi0(e+)^2 + 2 l(e+)) (phi0(e-)^2 + 2 l(e-))) )

    where l is the walk's local time field.  Signs are uniform per cluster of
    the enlarged set, pinned +1 at x0, and the output field is
    sigma * sqrt(phi0^2 + 2 l), which has the law pinned to sqrt(2u) at x0.
    """
    phi0 = sample_gff(g, condition({x0: 0.0}), rng)
    open0 = fk_from_field(g, phi0, rng)
    traj = run_conditioned_to_return(g, x0, u, rng)
    ell = traj.local_times(g)
    crossed = {e.id for e, k in zip(g.edges, traj.crossings(g)) if k > 0}

    open_u = set(open0) | crossed
    v0 = phi0.values
    for e in g.edges:
        if e.id in open_u:
            continue
        before = e.w * abs(v0[e.u] * v0[e.v])
        after = e.w * math.sqrt(
            (v0[e.u] ** 2 + 2.0 * ell[e.u]) * (v0[e.v] ** 2 + 2.0 * ell[e.v])
        )
        if rng.random() < -math.expm1(before - after):
            open_u.add(e.id)

    sigma = sign_sample_on_clusters(g, open_u, rng, pin=x0)
    phi_u = FieldReal(sigma * np.sqrt(v0 ** 2 + 2.0 * ell))
    return ForwardCoupling(
        phi0=phi0,
        open0=open0,
        trajectory=traj,
        open_u=frozenset(open_u),
        phi_u=phi_u,
    )


# ---------------------------------------------------------------------------
# exact finite distributions


@dataclass
class DiscreteDistribution:
    """An explicit distribution over a finite outcome tuple.

    `log_z` is the log normalising constant of the unnormalised weights the
    distribution was built from; `truncation_bound` bounds the probability
    mass lost to any enumeration cutoff.
    """

    outcomes: tuple
    probs: np.ndarray
    log_z: float
    truncation_bound: float = 0.0
    _pos: dict = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        self._pos = {o: i for i, o in enumerate(self.outcomes)}

    def prob(self, outcome) -> float:
        i = self._pos.get(outcome)
        return float(self.probs[i]) if i is not None else 0.0

    def sample(self, rng: np.random.Generator, size: int | None = None):
        ix = rng.choice(len(self.outcomes), size=size, p=self.probs)
        if size is None:
            return self.outcomes[int(ix)]
        return [self.outcomes[int(i)] for i in ix]

    def tv_distance(self, other: "DiscreteDistribution") -> float:
        keys = set(self.outcomes) | set(other.outcomes)
        return 0.5 * sum(abs(self.prob(k) - other.prob(k)) for k in keys)


def _as_weights(g: Graph, weights) -> np.ndarray:
    arr = np.asarray(weights, dtype=float)
    if arr.ndim == 0:
        arr = np.full(g.m, float(arr))
    if arr.shape != (g.m,):
        raise GraphError(f"need one weight per edge, got shape {arr.shape}")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise GraphError("interaction weights must be finite and nonnegative")
    return arr


def ising_exact(g: Graph, weights) -> DiscreteDistribution:
    """Spin law P(sigma) proportional to exp(sum_e J_e sigma(e+) sigma(e-)).

    Outcomes are +-1 tuples in vertex order.  Enumerates 2^n states.
    """
    j = _as_weights(g, weights)
    if g.n > MAX_SPIN_VERTICES:
        raise GraphError(f"spin enumeration capped at {MAX_SPIN_VERTICES} vertices")
    outcomes = list(itertools.product((-1, 1), repeat=g.n))
    logw = np.empty(len(outcomes))
    for i, sig in enumerate(outcomes):
        logw[i] = sum(
            jw * sig[e.u] * sig[e.v] for jw, e in zip(j, g.edges)
        )
    log_z = float(logsumexp(logw))
    return DiscreteDistribution(tuple(outcomes), np.exp(logw - log_z), log_z)


def fk_exact(g: Graph, weights) -> DiscreteDistribution:
    """FK-Ising (q=2 random cluster) law with edge parameters 1 - e^{-2 J_e}.

    P(omega) proportional to 2^{#clusters} prod p_e^{omega} (1-p_e)^{1-omega}.
    Outcomes are 0/1 tuples in edge order.  Enumerates 2^m subsets.
    """
    j = _as_weights(g, weights)
    if g.m > MAX_SUBSET_EDGES:
        raise GraphError(f"subset enumeration capped at {MAX_SUBSET_EDGES} edges")
    log_open = np.array([math.log(-math.expm1(-2.0 * jw)) if jw > 0 else -math.inf
                         for jw in j])
    log_closed = -2.0 * j
    outcomes = list(itertools.product((0, 1), repeat=g.m))
    logw = np.empty(len(outcomes))
    ln2 = math.log(2.0)
    for i, om in enumerate(outcomes):
        open_ids = [g.edges[pos].id for pos, o in enumerate(om) if o]
        cl = clusters(g, open_ids).count
        lw = cl * ln2
        for pos, o in enumerate(om):
            lw += log_open[pos] if o else log_closed[pos]
        logw[i] = lw
    keep = logw > -math.inf
    outcomes = tuple(o for o, k in zip(outcomes, keep) if k)
    logw = logw[keep]
    log_z = float(logsumexp(logw))
    return DiscreteDistribution(outcomes, np.exp(logw - log_z), log_z)


def current_exact(g: Graph, weights, n_max: int = DEFAULT_N_MAX) -> DiscreteDistribution:
    """Integer-current law with weights J, truncated at n_e <= n_max.

    Outcomes are tuples of nonnegative integers in edge order, restricted to
    configurations whose total at every vertex is even; weight
    prod_e J_e^{n_e} / n_e!.  `truncation_bound` reports
    sum_e P(Poisson(J_e) > n_max), an upper bound on the relative mass lost.
    """
    j = _as_weights(g, weights)
    if n_max < 0:
        raise GraphError("n_max must be nonnegative")
    if (n_max + 1) ** g.m > 6_000_000:
        raise GraphError("current enumeration too large; lower n_max or edges")
    log_j = np.where(j > 0, np.log(np.where(j > 0, j, 1.0)), -math.inf)
    lgamma = np.array([math.lgamma(k + 1) for k in range(n_max + 1)])

    outcomes = []
    logw = []
    for n in itertools.product(range(n_max + 1), repeat=g.m):
        deg = np.zeros(g.n, dtype=int)
        for pos, cnt in enumerate(n):
            if cnt:
                e = g.edges[pos]
                deg[e.u] += cnt
                deg[e.v] += cnt
        if np.any(deg & 1):
            continue
        lw = 0.0
        for pos, cnt in enumerate(n):
            if cnt:
                if j[pos] == 0:
                    lw = -math.inf
                    break
                lw += cnt * log_j[pos] - lgamma[cnt]
        if lw > -math.inf:
            outcomes.append(tuple(n))
            logw.append(lw)
    logw = np.asarray(logw)
    log_z = float(logsumexp(logw))
    bound = float(sum(_poisson.sf(n_max, jw) for jw in j if jw > 0))
    return DiscreteDistribution(tuple(outcomes), np.exp(logw - log_z), log_z,
                                truncation_bound=bound)


def current_fk_forward(g: Graph, weights, current: Sequence[int],
                       rng: np.random.Generator) -> frozenset[int]:
    """Open-edge set coupled over an integer current.

    Every edge with positive current opens; each zero-current edge opens
    independently with probability 1 - exp(-J_e).  If the current has the
    weight-J current law the output has the FK-Ising law with parameters
    1 - exp(-2 J_e).
    """
    j = _as_weights(g, weights)
    cur = np.asarray(current, dtype=int)
    if cur.shape != (g.m,):
        raise GraphError(f"current must have one entry per edge, got {cur.shape}")
    if np.any(cur < 0):
        raise GraphError("current entries must be nonnegative")
    open_ids = []
    for pos, e in enumerate(g.edges):
        if cur[pos] > 0:
            open_ids.append(e.id)
        elif j[pos] > 0 and rng.random() < -math.expm1(-j[pos]):
            open_ids.append(e.id)
    return frozenset(open_ids)
