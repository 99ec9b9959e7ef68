"""Self-interacting inversion engines and the enlarged forward process.

The inverse walk unwinds a signed field phi-check into the path that built
it.  Its state is the current vertex, the squared magnitude field (which
decreases at rate 2 per unit of local time at the current vertex, i.e.
Phi(t) = sqrt(Phi(0)^2 - 2 l(t))), and one stack of points per edge.  Stacks
are realised as Poisson point sets on (0, 2 J_e] in the interaction-weight
coordinate J_e(t) = W_e Phi(e+, t) Phi(e-, t): an edge is open while its
stack is nonempty, and a point fires when the decreasing level 2 J_e(t)
reaches it.  On a firing that leaves the stack nonempty, or one that empties
it without splitting the cluster of the pin vertex, the walk crosses the
edge or stays put with probability 1/2 each; if the closure splits the
cluster the walk moves deterministically to the endpoint still connected to
the pin.  The run stops when the current vertex's magnitude hits zero, which
(because every adjacent point fires strictly earlier) can only happen once
the walk is isolated, hence at the pin vertex.

All event times are solved exactly in the J coordinate: a point p on edge
{x, y} with the walk at x fires after local time
s = (Phi_x(t)^2 - (p / (2 W_e Phi_y))^2) / 2, and depletion after
s0 = Phi_x(t)^2 / 2.  Killing rates never enter the dynamics: reducing a
killed network by the harmonic killing transform rescales conductances and
magnitudes in a way that leaves every J_e, hence every stack and every event
order, unchanged, and only relabels local time by h(x)^2 per vertex; solving
in original coordinates performs that reduction implicitly.

Three equivalent drivers are provided: the stack engine (`run_inverse`), the
counts-only discrete chain (`run_inverse_discrete`, pick an adjacent edge
with probability proportional to its stack size), and the annealed jump-rate
process (`run_inverse_jump_rates`) with plain-jump rate W Phi_y / Phi_x and
closure rate 2 W (Phi_y / Phi_x) / (exp(2 J_e) - 1) per open adjacent edge.

`forward_enlarged` runs the forward construction with live stacks: initial
counts Poisson(2 J_e) on equal-sign edges, new points arriving at unit rate
per unit of increasing J_e, plus one point per crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .couplings import _as_weights, sign_sample_on_clusters
from .gff import FieldReal, condition, sample_gff
from .graph import Graph, GraphError
from .jump import JUMP, STOPPED, Step, Trajectory, excursion_split, run_conditioned_to_return
from .loops import LoopSoupSample, sample_pd_partition

PLAIN_JUMP = "plain-jump"
STAY = "stay"
CLOSE_JUMP = "close-jump"
CLOSE_STAY = "close-stay"
DEPLETE = "deplete"


@dataclass(frozen=True)
class InverseEvent:
    time: float
    edge: int | None
    kind: str
    src: int
    dst: int
    n_after: int


@dataclass
class InverseState:
    """Mutable state of an inverse run; engines update it in place."""

    graph: Graph
    root: int
    x: int
    sq: np.ndarray          # current squared magnitudes
    sq0: np.ndarray         # squared magnitudes at initialisation
    ell: np.ndarray         # accumulated local times
    stacks: list            # per edge position: ascending list of points
    signs: np.ndarray
    t: float = 0.0

    def open_edges(self) -> frozenset[int]:
        return frozenset(
            e.id for pos, e in enumerate(self.graph.edges) if self.stacks[pos]
        )

    def counts(self) -> np.ndarray:
        return np.array([len(s) for s in self.stacks], dtype=int)


@dataclass
class InverseRun:
    """Record of one inverse stage."""

    root: int
    events: list
    trajectory: Trajectory
    duration: float
    terminal_vertex: int
    terminal_sq: np.ndarray
    terminal_open: frozenset[int]
    containment_violations: int


def _zt_poisson(rng: np.random.Generator, lam: float) -> int:
    """Poisson(lam) conditioned to be >= 1."""
    if not (lam > 0):
        raise GraphError("zero-truncated Poisson needs a positive mean")
    if lam > 30.0:  # P(0) < 1e-13; a plain draw is the conditioned law
        k = int(rng.poisson(lam))
        return k if k >= 1 else 1
    u = rng.random() * -math.expm1(-lam)
    term = lam * math.exp(-lam)
    acc = term
    k = 1
    while acc < u and k < 10_000:
        k += 1
        term *= lam / k
        acc += term
    return k


def _edge_rates(g: Graph, values: np.ndarray) -> np.ndarray:
    """2 J_e for equal-sign edges, 0 otherwise (zero values close the edge)."""
    out = np.zeros(g.m)
    for pos, e in enumerate(g.edges):
        prod = values[e.u] * values[e.v]
        if prod > 0:
            out[pos] = 2.0 * e.w * prod
    return out


def _make_state(g: Graph, phi: FieldReal, root: int, stacks: list) -> InverseState:
    values = phi.values
    sq = values * values
    return InverseState(
        graph=g,
        root=root,
        x=root,
        sq=sq.copy(),
        sq0=sq.copy(),
        ell=np.zeros(g.n),
        stacks=stacks,
        signs=np.where(values < 0, -1, 1),
    )


def _sorted_uniform(rng: np.random.Generator, high: float, k: int) -> list[float]:
    if k == 0:
        return []
    pts = rng.uniform(0.0, high, size=k)
    pts.sort()
    return pts.tolist()


def init_inverse_from_field(g: Graph, phi: FieldReal, x0: int,
                            rng: np.random.Generator,
                            given_open: Iterable[int] | None = None) -> InverseState:
    """Stacks from a signed field: Poisson(2 J_e) points on equal-sign edges.

    With ``given_open`` the counts are conditioned on that open set instead:
    zero off it, zero-truncated Poisson(2 J_e) on it.  The pin value
    ``phi[x0]`` must be positive.
    """
    if not (0 <= x0 < g.n):
        raise GraphError(f"vertex index {x0} out of range")
    if not (phi.values[x0] > 0):
        raise GraphError(
            f"field value at the pin vertex must be positive, got {phi.values[x0]}"
        )
    rates = _edge_rates(g, phi.values)
    stacks: list[list[float]] = []
    if given_open is None:
        for pos in range(g.m):
            k = int(rng.poisson(rates[pos])) if rates[pos] > 0 else 0
            stacks.append(_sorted_uniform(rng, rates[pos], k))
    else:
        open_pos = {g.edge_position(eid) for eid in given_open}
        for pos in range(g.m):
            if pos in open_pos:
                if rates[pos] <= 0:
                    raise GraphError(
                        f"open set contains edge {g.edges[pos].id} whose field "
                        "interaction weight vanishes"
                    )
                k = _zt_poisson(rng, rates[pos])
                stacks.append(_sorted_uniform(rng, rates[pos], k))
            else:
                stacks.append([])
    return _make_state(g, phi, x0, stacks)


def init_inverse_from_field_and_config(g: Graph, phi: FieldReal, x0: int,
                                       open0: Iterable[int],
                                       rng: np.random.Generator) -> InverseState:
    """Stacks with counts 1 + Poisson(2 J_e) on ``open0`` and 0 elsewhere.

    Note this law differs from conditioning Poisson(2 J_e) counts on being
    positive (see `init_inverse_from_field` with ``given_open``); the
    conditioned variant is the one consistent with the exact current law.
    """
    if not (0 <= x0 < g.n):
        raise GraphError(f"vertex index {x0} out of range")
    if not (phi.values[x0] > 0):
        raise GraphError(
            f"field value at the pin vertex must be positive, got {phi.values[x0]}"
        )
    rates = _edge_rates(g, phi.values)
    open_pos = {g.edge_position(eid) for eid in open0}
    stacks: list[list[float]] = []
    for pos in range(g.m):
        if pos in open_pos:
            if rates[pos] <= 0:
                raise GraphError(
                    f"open set contains edge {g.edges[pos].id} whose field "
                    "interaction weight vanishes"
                )
            k = 1 + int(rng.poisson(rates[pos]))
            stacks.append(_sorted_uniform(rng, rates[pos], k))
        else:
            stacks.append([])
    return _make_state(g, phi, x0, stacks)


def init_inverse_from_counts(g: Graph, phi: FieldReal, x0: int,
                             counts: Sequence[int],
                             rng: np.random.Generator) -> InverseState:
    """Stacks with prescribed counts (by edge position); point positions are
    uniform below the current level, which is their conditional law given
    the counts."""
    rates = _edge_rates(g, phi.values)
    stacks: list[list[float]] = []
    for pos, k in enumerate(counts):
        k = int(k)
        if k < 0:
            raise GraphError("stack counts must be nonnegative")
        if k > 0 and rates[pos] <= 0:
            raise GraphError(
                f"edge {g.edges[pos].id} cannot hold points: interaction "
                "weight vanishes"
            )
        stacks.append(_sorted_uniform(rng, rates[pos], k))
    return _make_state(g, phi, x0, stacks)


# ---------------------------------------------------------------------------
# connectivity among open edges


def _connected(g: Graph, is_open, a: int, b: int) -> bool:
    """Is there a path from a to b along edges with ``is_open(pos)`` true?"""
    if a == b:
        return True
    seen = {a}
    stack = [a]
    while stack:
        x = stack.pop()
        for pos, _, y, _ in g.adjacency(x):
            if y not in seen and is_open(pos):
                if y == b:
                    return True
                seen.add(y)
                stack.append(y)
    return False


# ---------------------------------------------------------------------------
# stack engine


def run_inverse(st: InverseState, rng: np.random.Generator) -> InverseRun:
    """Run the stack engine from the state's current vertex to depletion.

    Mutates ``st`` (squared magnitudes, local times, stacks, clock) and
    returns the stage record.  The movement rules are pinned to ``st.root``;
    the stage ends when the current vertex's magnitude reaches zero, which is
    recorded as a "deplete" event.
    """
    g = st.graph
    stacks = st.stacks
    events: list[InverseEvent] = []
    steps: list[Step] = []
    violations = 0
    x = st.x
    start_vertex = x
    t0 = st.t
    hold = 0.0

    def is_open(pos: int) -> bool:
        return bool(stacks[pos])

    while True:
        pops = []
        sx = st.sq[x]
        for pos, eid, y, w in g.adjacency(x):
            if not stacks[pos]:
                continue
            beta = stacks[pos][-1] / (2.0 * w * math.sqrt(st.sq[y]))
            s_e = 0.5 * (sx - beta * beta)
            if s_e < 0.0:
                s_e = 0.0  # rounding guard: the point is already due
            pops.append((s_e, eid, pos, y))
        if not pops:
            s = 0.5 * sx
            st.t += s
            st.ell[x] += s
            st.sq[x] = 0.0
            hold += s
            steps.append(Step(x, hold, STOPPED))
            events.append(InverseEvent(st.t, None, DEPLETE, x, x, 0))
            break

        s, eid, pos, y = min(pops)
        st.t += s
        st.ell[x] += s
        st.sq[x] = sx - 2.0 * s
        hold += s
        stacks[pos].pop()
        remaining = len(stacks[pos])
        if remaining > 0:
            move = rng.random() < 0.5
            kind = PLAIN_JUMP if move else STAY
        elif _connected(g, is_open, x, y):
            move = rng.random() < 0.5
            kind = CLOSE_JUMP if move else CLOSE_STAY
        else:
            # the closure split the cluster; follow the pin's side
            move = not _connected(g, is_open, st.root, x)
            kind = CLOSE_JUMP if move else CLOSE_STAY
        dst = y if move else x
        events.append(InverseEvent(st.t, eid, kind, x, dst, remaining))
        if move:
            steps.append(Step(x, hold, JUMP, eid))
            hold = 0.0
            x = dst
        if not _connected(g, is_open, st.root, x):
            violations += 1

    st.x = x
    traj = Trajectory(start=start_vertex, steps=tuple(steps), reached=True)
    return InverseRun(
        root=st.root,
        events=events,
        trajectory=traj,
        duration=st.t - t0,
        terminal_vertex=x,
        terminal_sq=st.sq.copy(),
        terminal_open=st.open_edges(),
        containment_violations=violations,
    )


def reconstruct_initial_field(g: Graph, run: InverseRun, rng: np.random.Generator,
                              pin: int | None = None) -> FieldReal:
    """Resample signs on the terminal clusters and return sigma * Phi(end).

    With the pin at the run's root this realises the conditional law of the
    zero-pinned field given the level-u field the run was started from.
    """
    if pin is None:
        pin = run.root
    sigma = sign_sample_on_clusters(g, run.terminal_open, rng, pin=pin)
    return FieldReal(sigma * np.sqrt(run.terminal_sq))


# ---------------------------------------------------------------------------
# discrete chain (counts only)


@dataclass
class DiscreteInverseRun:
    root: int
    initial: np.ndarray
    steps: tuple
    terminal_vertex: int
    crossings: np.ndarray
    remaining: np.ndarray


def run_inverse_discrete(g: Graph, x0: int, counts, rng: np.random.Generator,
                         ) -> DiscreteInverseRun:
    """Embedded chain of the stack engine, driven by counts alone.

    ``counts`` maps edge id -> stack size (or is an array by edge position).
    Each step picks an edge adjacent to the current vertex with probability
    proportional to its count and decrements it; movement follows the same
    half/half and cluster rules as the stack engine, pinned at ``x0``.  Stops
    when no adjacent count is positive; from a valid initial state that can
    only happen at ``x0``.
    """
    if not (0 <= x0 < g.n):
        raise GraphError(f"vertex index {x0} out of range")
    if isinstance(counts, Mapping):
        n = np.zeros(g.m, dtype=int)
        for eid, c in counts.items():
            n[g.edge_position(eid)] = int(c)
    else:
        n = np.asarray(counts, dtype=int).copy()
        if n.shape != (g.m,):
            raise GraphError(f"need one count per edge, got shape {n.shape}")
    if np.any(n < 0):
        raise GraphError("stack counts must be nonnegative")

    initial = n.copy()
    crossings = np.zeros(g.m, dtype=int)
    steps: list[tuple[int, int, int]] = []
    x = x0

    def is_open(pos: int) -> bool:
        return n[pos] > 0

    while True:
        adj = [(pos, eid, y) for pos, eid, y, _ in g.adjacency(x) if n[pos] > 0]
        if not adj:
            break
        total = sum(n[pos] for pos, _, _ in adj)
        pick = rng.random() * total
        acc = 0
        pos, eid, y = adj[-1]
        for cand in adj:
            acc += n[cand[0]]
            if pick < acc:
                pos, eid, y = cand
                break
        n[pos] -= 1
        if n[pos] > 0:
            move = rng.random() < 0.5
        elif _connected(g, is_open, x, y):
            move = rng.random() < 0.5
        else:
            move = not _connected(g, is_open, x0, x)
        dst = y if move else x
        if move:
            crossings[pos] += 1
        steps.append((eid, x, dst))
        x = dst

    return DiscreteInverseRun(
        root=x0,
        initial=initial,
        steps=tuple(steps),
        terminal_vertex=x,
        crossings=crossings,
        remaining=n,
    )


# ---------------------------------------------------------------------------
# annealed jump-rate engine


def run_inverse_jump_rates(g: Graph, phi: FieldReal, x0: int,
                           open0: Iterable[int],
                           rng: np.random.Generator) -> InverseRun:
    """Markov dynamics on (vertex, open set, magnitudes), no stacks.

    Per open adjacent edge {x, y}: a plain jump to y at rate
    W Phi_y(t) / Phi_x(t), and a closure at rate
    2 W (Phi_y / Phi_x) / (exp(2 J_e(t)) - 1); closures resolve with the same
    half/half and cluster rules, pinned at ``x0``.  Clocks are solved in
    closed form in the J coordinate: the closure of an edge currently at
    J(0) fires at the level j solving 1 - e^{-2j} = U (1 - e^{-2 J(0)}),
    and the plain jump at level J(0) - E with E standard exponential (never,
    if that is negative).  Equal-sign open edges are required.
    """
    if not (0 <= x0 < g.n):
        raise GraphError(f"vertex index {x0} out of range")
    if not (phi.values[x0] > 0):
        raise GraphError(
            f"field value at the pin vertex must be positive, got {phi.values[x0]}"
        )
    values = phi.values
    rates = _edge_rates(g, values)
    open_pos = set()
    for eid in open0:
        pos = g.edge_position(eid)
        if rates[pos] <= 0:
            raise GraphError(
                f"open set contains edge {g.edges[pos].id} whose field "
                "interaction weight vanishes"
            )
        open_pos.add(pos)

    sq = values * values
    sq0 = sq.copy()
    ell = np.zeros(g.n)
    signs = np.where(values < 0, -1, 1)
    events: list[InverseEvent] = []
    steps: list[Step] = []
    violations = 0
    x = x0
    t = 0.0
    hold = 0.0

    def is_open(pos: int) -> bool:
        return pos in open_pos

    while True:
        sx = sq[x]
        cands = []  # (s, edge id, order, action, pos, y)
        for pos, eid, y, w in g.adjacency(x):
            if pos not in open_pos:
                continue
            wy = w * math.sqrt(sq[y])
            j_now = wy * math.sqrt(sx)
            # closure clock: exact inversion of the survival function
            u = rng.random()
            j_star = -0.5 * math.log1p(u * math.expm1(-2.0 * j_now))
            beta = j_star / wy
            s_close = max(0.0, 0.5 * (sx - beta * beta))
            cands.append((s_close, eid, 0, "close", pos, y))
            # plain-jump clock: integrated hazard is J(0) - J(s)
            target = j_now - rng.exponential()
            if target > 0:
                beta = target / wy
                s_jump = max(0.0, 0.5 * (sx - beta * beta))
                cands.append((s_jump, eid, 1, "jump", pos, y))
        if not cands:
            s = 0.5 * sx
            t += s
            ell[x] += s
            sq[x] = 0.0
            hold += s
            steps.append(Step(x, hold, STOPPED))
            events.append(InverseEvent(t, None, DEPLETE, x, x, 0))
            break

        s, eid, _, action, pos, y = min(cands)
        t += s
        ell[x] += s
        sq[x] = sx - 2.0 * s
        hold += s
        if action == "jump":
            move = True
            kind = PLAIN_JUMP
        else:
            open_pos.discard(pos)
            if _connected(g, is_open, x, y):
                move = rng.random() < 0.5
                kind = CLOSE_JUMP if move else CLOSE_STAY
            else:
                move = not _connected(g, is_open, x0, x)
                kind = CLOSE_JUMP if move else CLOSE_STAY
        dst = y if move else x
        events.append(InverseEvent(t, eid, kind, x, dst, 1 if pos in open_pos else 0))
        if move:
            steps.append(Step(x, hold, JUMP, eid))
            hold = 0.0
            x = dst
        if not _connected(g, is_open, x0, x):
            violations += 1

    traj = Trajectory(start=x0, steps=tuple(steps), reached=True)
    return InverseRun(
        root=x0,
        events=events,
        trajectory=traj,
        duration=t,
        terminal_vertex=x,
        terminal_sq=sq,
        terminal_open=frozenset(g.edges[pos].id for pos in open_pos),
        containment_violations=violations,
    )


# ---------------------------------------------------------------------------
# forward enlarged process (field + live stacks along the conditioned walk)


@dataclass
class EnlargedRun:
    phi0: FieldReal
    n0: np.ndarray          # initial stack sizes, by edge position
    trajectory: Trajectory
    events: list
    n_end: np.ndarray
    open_end: frozenset[int]
    phi_u: FieldReal


@dataclass(frozen=True)
class EnlargedEvent:
    time: float
    edge: int
    kind: str  # "poisson" or "crossing"
    n_after: int


def forward_enlarged(g: Graph, x0: int, u: float,
                     rng: np.random.Generator) -> EnlargedRun:
    """Forward level-u construction carrying edge stacks along the walk.

    Starts from a field pinned to zero at x0 with initial counts
    Poisson(2 J_e) on equal-sign edges; while the walk runs, each edge gains
    a point whenever its increasing interaction weight J_e(t) crosses the
    next arrival of a unit-rate Poisson process (sampled lazily through
    exponential spacings), and one point per crossing.  Ends with uniform
    cluster signs on the open set, pinned +1 at x0; the output field is
    sigma * sqrt(phi0^2 + 2 l(tau_u)).

    The coupling (phi0, open set at 0, phi_u, open set at the end) has the
    same joint law as `forward_rk_coupling`.
    """
    phi0 = sample_gff(g, condition({x0: 0.0}), rng)
    v0 = phi0.values
    rates0 = _edge_rates(g, v0)  # 2 J_e at time zero on equal-sign edges
    n = np.array(
        [int(rng.poisson(r)) if r > 0 else 0 for r in rates0], dtype=int
    )
    n0 = n.copy()

    traj = run_conditioned_to_return(g, x0, u, rng)

    mags = np.abs(v0)
    # next Poisson arrival level per edge, strictly above the current J_e
    j_now = np.array([e.w * mags[e.u] * mags[e.v] for e in g.edges])
    next_arrival = j_now + rng.exponential(size=g.m)

    events: list[EnlargedEvent] = []
    t = 0.0
    for step in traj.steps:
        x = step.vertex
        m_start = mags[x]
        m_end = math.sqrt(m_start * m_start + 2.0 * step.holding)
        batch = []
        for pos, eid, y, w in g.adjacency(x):
            wy = w * mags[y]
            j_end = wy * m_end
            while next_arrival[pos] <= j_end:
                level = next_arrival[pos]
                m_at = level / wy if wy > 0 else m_end
                s = 0.5 * (m_at * m_at - m_start * m_start)
                n[pos] += 1
                batch.append(EnlargedEvent(t + s, eid, "poisson", int(n[pos])))
                next_arrival[pos] += rng.exponential()
        batch.sort(key=lambda ev: ev.time)
        events.extend(batch)
        mags[x] = m_end
        t += step.holding
        if step.exit == JUMP:
            pos = g.edge_position(step.edge)
            n[pos] += 1
            events.append(EnlargedEvent(t, step.edge, "crossing", int(n[pos])))

    open_ids = frozenset(e.id for pos, e in enumerate(g.edges) if n[pos] > 0)
    sigma = sign_sample_on_clusters(g, open_ids, rng, pin=x0)
    phi_u = FieldReal(sigma * mags)
    return EnlargedRun(
        phi0=phi0,
        n0=n0,
        trajectory=traj,
        events=events,
        n_end=n,
        open_end=open_ids,
        phi_u=phi_u,
    )


# ---------------------------------------------------------------------------
# full inversions


def invert_loop_soup(g: Graph, phi: FieldReal, rng: np.random.Generator,
                     enumeration: Sequence[int] | None = None,
                     eps: float = 1e-9) -> LoopSoupSample:
    """Unwind a full-support signed field into an intensity-1/2 loop ensemble.

    One shared stack family drives |V| stages: stage i starts at the i-th
    vertex of the enumeration with the movement rules re-pinned there, runs
    the stack engine until that vertex's magnitude hits zero, and cuts the
    stage path into loops at the points of a PD(0, 1/2) partition of its
    root local time.  Earlier roots are depleted so later stages avoid them
    automatically.  The occupation field of the output satisfies
    2 L_x = phi_x^2 identically.
    """
    values = phi.values
    if np.any(values == 0):
        raise GraphError("loop-ensemble inversion needs a full-support field")
    order = list(range(g.n)) if enumeration is None else [int(v) for v in enumeration]
    if sorted(order) != list(range(g.n)):
        raise GraphError("enumeration must be a permutation of all vertices")

    # engines only read squared magnitudes; signs enter through the rates
    rates = _edge_rates(g, values)
    stacks: list[list[float]] = []
    for pos in range(g.m):
        k = int(rng.poisson(rates[pos])) if rates[pos] > 0 else 0
        stacks.append(_sorted_uniform(rng, rates[pos], k))
    st = _make_state(g, phi, order[0], stacks)

    loops = []
    for x in order:
        if st.sq[x] <= 0.0:
            continue
        st.root = x
        st.x = x
        run = run_inverse(st, rng)
        if run.terminal_vertex != x:
            raise GraphError(
                f"inverse stage pinned at {g.labels[x]} terminated at "
                f"{g.labels[run.terminal_vertex]}"
            )
        total = float(sum(s.holding for s in run.trajectory.steps if s.vertex == x))
        pd = sample_pd_partition(0.5, rng, eps)
        cuts = []
        acc = 0.0
        for y in pd.blocks:
            acc += y
            cut = total * acc
            if cut >= total * (1.0 - 1e-15):
                break
            if cuts and cut <= cuts[-1]:
                continue
            cuts.append(cut)
        loops.extend(excursion_split(run.trajectory, x, cuts))
    return LoopSoupSample(alpha=0.5, loops=tuple(loops))


def invert_current_from_fk(g: Graph, weights, fk_open: Iterable[int],
                           rng: np.random.Generator,
                           enumeration: Sequence[int] | None = None,
                           stack_law: str = "conditioned") -> np.ndarray:
    """Turn an FK-Ising open-edge sample into an integer current.

    Loads each open edge with a stack of points - by default a
    zero-truncated Poisson(2 J_e) count, the conditional stack law given
    openness and the one consistent with the exact current distribution;
    ``stack_law="one-plus-poisson"`` uses 1 + Poisson(2 J_e) instead - then
    plays the discrete chain through the vertex enumeration, each stage
    pinned at its own starting vertex and stopped when its adjacent counts
    vanish.  Returns total crossings per edge (by position); if the input is
    FK-Ising with parameters 1 - e^{-2 J_e}, the output has the weight-J
    current law.
    """
    j = _as_weights(g, weights)
    order = list(range(g.n)) if enumeration is None else [int(v) for v in enumeration]
    if sorted(order) != list(range(g.n)):
        raise GraphError("enumeration must be a permutation of all vertices")
    if stack_law not in ("conditioned", "one-plus-poisson"):
        raise GraphError(f"unknown stack law {stack_law!r}")

    counts = np.zeros(g.m, dtype=int)
    for eid in fk_open:
        pos = g.edge_position(eid)
        lam = 2.0 * j[pos]
        if lam <= 0:
            raise GraphError(
                f"open set contains edge {g.edges[pos].id} with zero weight"
            )
        if stack_law == "conditioned":
            counts[pos] = _zt_poisson(rng, lam)
        else:
            counts[pos] = 1 + int(rng.poisson(lam))

    total = np.zeros(g.m, dtype=int)
    for x in order:
        run = run_inverse_discrete(g, x, counts, rng)
        if run.terminal_vertex != x:
            raise GraphError(
                f"discrete stage pinned at {g.labels[x]} terminated at "
                f"{g.labels[run.terminal_vertex]}"
            )
        total += run.crossings
        counts = run.remaining.copy()
    return total
