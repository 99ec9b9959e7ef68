"""Weighted-graph primitives: conductances, killing rates, network algebra.

A network here is a finite connected undirected graph with strictly positive
edge conductances W_e and a nonnegative killing rate kappa_x per vertex.
Parallel edges are legal and kept as distinct records; self-loops are not
allowed.  Vertices are indexed by declaration order and every matrix-valued
quantity (precision matrix, Green function) uses that order, so layouts are
reproducible run to run.

The precision matrix is

    Lambda[x, x] = kappa_x + sum of W_e over edges at x
    Lambda[x, y] = - (total conductance between x and y),   x != y

and the associated energy form is

    E(f, f) = sum_x kappa_x f(x)^2 + sum_e W_e (f(e+) - f(e-))^2 = f' Lambda f.

When the total killing is zero the walk is recurrent and Lambda is singular;
`green_function` refuses to invert it, while purely combinatorial operations
still work if the graph was built with ``allow_recurrent=True``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised when a graph description or graph-level query is invalid."""


@dataclass(frozen=True)
class Edge:
    """Undirected edge record.  `u` and `v` are vertex indices, `w` > 0."""

    id: int
    u: int
    v: int
    w: float

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise GraphError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class Graph:
    """Immutable network.  Construct through `build_graph` for validation.

    Identity (hashing, equality) is carried by `labels`, `edges` and `kappa`
    alone; the remaining attributes are derived caches.
    """

    labels: tuple[str, ...]
    edges: tuple[Edge, ...]
    kappa: tuple[float, ...]
    # derived, excluded from identity
    _index: dict = field(init=False, compare=False, repr=False, default=None)
    _adj: tuple = field(init=False, compare=False, repr=False, default=None)
    _kappa_arr: np.ndarray = field(init=False, compare=False, repr=False, default=None)
    _wsum: np.ndarray = field(init=False, compare=False, repr=False, default=None)
    _pos_of_id: dict = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self):
        index = {lab: i for i, lab in enumerate(self.labels)}
        adj: list[list[tuple[int, int, int, float]]] = [[] for _ in self.labels]
        for pos, e in enumerate(self.edges):
            adj[e.u].append((pos, e.id, e.v, e.w))
            adj[e.v].append((pos, e.id, e.u, e.w))
        kappa_arr = np.asarray(self.kappa, dtype=float)
        wsum = np.zeros(len(self.labels))
        for e in self.edges:
            wsum[e.u] += e.w
            wsum[e.v] += e.w
        pos_of_id = {e.id: pos for pos, e in enumerate(self.edges)}
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))
        object.__setattr__(self, "_kappa_arr", kappa_arr)
        object.__setattr__(self, "_wsum", wsum)
        object.__setattr__(self, "_pos_of_id", pos_of_id)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertex(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown vertex label {label!r}") from None

    def adjacency(self, x: int) -> tuple[tuple[int, int, int, float], ...]:
        """Edges at x as (position, edge id, other endpoint, conductance)."""
        return self._adj[x]

    def edge_position(self, edge_id: int) -> int:
        try:
            return self._pos_of_id[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id}") from None

    def is_transient(self) -> bool:
        return bool(np.any(self._kappa_arr > 0))

    def total_rate(self, x: int) -> float:
        """Exit rate of the killed jump process at x."""
        return float(self._wsum[x] + self._kappa_arr[x])


def build_graph(spec: Mapping, *, allow_recurrent: bool = False) -> Graph:
    """Validate a graph description and construct a `Graph`.

    `spec` is a mapping with keys:

    - ``vertices``: list of distinct string labels,
    - ``edges``: list of ``[from_label, to_label, W]`` with W > 0,
    - ``kappa``: optional mapping label -> killing rate >= 0 (default 0).

    The graph must be connected.  A graph with identically zero killing is
    recurrent (the Green function does not exist) and is rejected unless
    ``allow_recurrent`` is set.
    """
    try:
        labels = list(spec["vertices"])
    except (KeyError, TypeError):
        raise GraphError("graph description must contain a 'vertices' list")
    if not labels:
        raise GraphError("graph needs at least one vertex")
    if len(set(labels)) != len(labels):
        raise GraphError("duplicate vertex labels")
    labels = [str(lab) for lab in labels]
    index = {lab: i for i, lab in enumerate(labels)}

    edges: list[Edge] = []
    for k, item in enumerate(spec.get("edges", [])):
        try:
            a, b, w = item
        except (TypeError, ValueError):
            raise GraphError(f"edge entry {k} is not a [from, to, W] triple")
        for lab in (a, b):
            if lab not in index:
                raise GraphError(f"edge entry {k} references unknown vertex {lab!r}")
        if a == b:
            raise GraphError(f"edge entry {k} is a self-loop at {a!r}")
        w = float(w)
        if not (w > 0) or not np.isfinite(w):
            raise GraphError(f"edge entry {k} has non-positive conductance {w}")
        edges.append(Edge(id=k, u=index[a], v=index[b], w=w))

    kappa = [0.0] * len(labels)
    for lab, val in dict(spec.get("kappa", {}) or {}).items():
        if lab not in index:
            raise GraphError(f"kappa references unknown vertex {lab!r}")
        val = float(val)
        if val < 0 or not np.isfinite(val):
            raise GraphError(f"kappa[{lab!r}] = {val} is not a nonnegative real")
        kappa[index[lab]] = val

    g = Graph(labels=tuple(labels), edges=tuple(edges), kappa=tuple(kappa))
    if not _connected_all(g):
        raise GraphError("graph is not connected")
    if not g.is_transient() and not allow_recurrent:
        raise GraphError(
            "recurrent network (zero killing everywhere): Green function "
            "undefined; pass allow_recurrent=True for combinatorial use"
        )
    return g


def _connected_all(g: Graph) -> bool:
    if g.n == 0:
        return False
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    while stack:
        x = stack.pop()
        for _, _, y, _ in g.adjacency(x):
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return all(seen)


# ---------------------------------------------------------------------------
# quadratic forms and linear algebra


def dirichlet_form(g: Graph, f: Sequence[float]) -> float:
    """Energy E(f, f) = sum kappa f^2 + sum_e W_e (f(e+) - f(e-))^2."""
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise GraphError(f"f must have one value per vertex, got shape {f.shape}")
    total = float(np.dot(g._kappa_arr, f * f))
    for e in g.edges:
        d = f[e.u] - f[e.v]
        total += e.w * d * d
    return total


@lru_cache(maxsize=256)
def _precision_cached(g: Graph) -> np.ndarray:
    lam = np.zeros((g.n, g.n))
    for e in g.edges:
        lam[e.u, e.v] -= e.w
        lam[e.v, e.u] -= e.w
        lam[e.u, e.u] += e.w
        lam[e.v, e.v] += e.w
    lam[np.diag_indices(g.n)] += g._kappa_arr
    lam.setflags(write=False)
    return lam


def precision_matrix(g: Graph) -> np.ndarray:
    """The matrix Lambda of the energy form (read-only view, cached)."""
    return _precision_cached(g)


@lru_cache(maxsize=256)
def _green_cached(g: Graph) -> np.ndarray:
    if not g.is_transient():
        raise GraphError("recurrent network: Green function undefined")
    lam = _precision_cached(g)
    # Lambda is symmetric positive definite for a connected transient network.
    gr = np.linalg.inv(lam)
    gr = (gr + gr.T) / 2.0
    gr.setflags(write=False)
    return gr


def green_function(g: Graph) -> np.ndarray:
    """G = Lambda^{-1} (read-only view, cached).  Requires transience."""
    return _green_cached(g)


@lru_cache(maxsize=256)
def _harmonic_cached(g: Graph, x0: int) -> tuple[Graph, np.ndarray]:
    if not (0 <= x0 < g.n):
        raise GraphError(f"vertex index {x0} out of range")
    h = np.ones(g.n)
    rest = [x for x in range(g.n) if x != x0]
    if rest:
        lam = _precision_cached(g)
        sub = lam[np.ix_(rest, rest)]
        # right-hand side: total conductance from each vertex to x0
        b = np.zeros(len(rest))
        colmap = {x: i for i, x in enumerate(rest)}
        for e in g.edges:
            if e.u == x0 and e.v != x0:
                b[colmap[e.v]] += e.w
            elif e.v == x0 and e.u != x0:
                b[colmap[e.u]] += e.w
        sol = np.linalg.solve(sub, b)
        for x, val in zip(rest, sol):
            h[x] = val
    h.setflags(write=False)

    new_edges = tuple(
        Edge(id=e.id, u=e.u, v=e.v, w=e.w * h[e.u] * h[e.v]) for e in g.edges
    )
    new_kappa = [0.0] * g.n
    new_kappa[x0] = g.kappa[x0]
    gh = Graph(labels=g.labels, edges=new_edges, kappa=tuple(new_kappa))
    return gh, h


def harmonic_killing_transform(g: Graph, x0: int) -> tuple[Graph, np.ndarray]:
    """Reduce killing to the root by a harmonic change of conductances.

    Returns ``(g_h, h)`` where ``h(x)`` is the probability that the killed
    walk started at x reaches ``x0`` before being killed (so ``h(x0) = 1``,
    and ``h`` solves ``-kappa_x h(x) + sum_y W_xy (h(y) - h(x)) = 0`` off the
    root), and ``g_h`` carries conductances ``W_xy h(x) h(y)`` with zero
    killing except possibly at ``x0``, where the original rate is kept.

    The walk on ``g_h`` (killing at the root ignored), run until its local
    time at ``x0`` reaches u and then slowed down by ``h(x)^2`` at each x, has
    the law of the original walk conditioned to accumulate local time u at
    ``x0`` before dying.  If kappa vanishes off the root then h is identically
    one and ``g_h == g``.
    """
    gh, h = _harmonic_cached(g, x0)
    return gh, h


# ---------------------------------------------------------------------------
# clusters of an open edge set


@dataclass(frozen=True)
class ClusterPartition:
    """Partition of the vertex set induced by a set of open edges.

    `assignment[x]` is the cluster index of vertex x; clusters are numbered
    0, 1, ... by first appearance in vertex order, so the labelling is
    deterministic.
    """

    assignment: tuple[int, ...]
    count: int

    def same(self, x: int, y: int) -> bool:
        return self.assignment[x] == self.assignment[y]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for x, c in enumerate(self.assignment):
            out[c].append(x)
        return tuple(tuple(b) for b in out)


def clusters(g: Graph, open_edges: Iterable[int]) -> ClusterPartition:
    """Connected components of (V, open_edges); isolated vertices count.

    ``open_edges`` is a set of edge ids.
    """
    open_ids = set(open_edges)
    for eid in open_ids:
        if eid not in g._pos_of_id:
            raise GraphError(f"unknown edge id {eid}")
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in g.edges:
        if e.id in open_ids:
            ra, rb = find(e.u), find(e.v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    label: dict[int, int] = {}
    assignment = []
    for x in range(g.n):
        r = find(x)
        if r not in label:
            label[r] = len(label)
        assignment.append(label[r])
    return ClusterPartition(assignment=tuple(assignment), count=len(label))


# ---------------------------------------------------------------------------
# subgraph machinery (vertex removal sends conductances into killing)


def delete_vertices(g: Graph, doomed: Iterable[int]) -> Graph:
    """Remove vertices; each deleted edge adds its conductance to the killing
    rate of its surviving endpoint, so the killed walk restricted to the
    remaining vertex set keeps its law (jumping to a removed vertex = death).

    The result may be disconnected; restrict with `component_subgraph` before
    running anything that needs connectivity.
    """
    doomed = set(doomed)
    keep = [x for x in range(g.n) if x not in doomed]
    if not keep:
        raise GraphError("cannot delete every vertex")
    remap = {x: i for i, x in enumerate(keep)}
    kappa = [g.kappa[x] for x in keep]
    edges = []
    for e in g.edges:
        u_in, v_in = e.u not in doomed, e.v not in doomed
        if u_in and v_in:
            edges.append(Edge(id=e.id, u=remap[e.u], v=remap[e.v], w=e.w))
        elif u_in:
            kappa[remap[e.u]] += e.w
        elif v_in:
            kappa[remap[e.v]] += e.w
    return Graph(
        labels=tuple(g.labels[x] for x in keep),
        edges=tuple(edges),
        kappa=tuple(kappa),
    )


def component_subgraph(g: Graph, root: int) -> tuple[Graph, tuple[int, ...]]:
    """Restrict to the connected component of `root`.

    Returns ``(sub, to_orig)`` where ``to_orig[i]`` is the original index of
    the i-th vertex of ``sub``.  Edge ids are preserved.
    """
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for _, _, y, _ in g.adjacency(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    keep = [x for x in range(g.n) if x in seen]
    remap = {x: i for i, x in enumerate(keep)}
    edges = tuple(
        Edge(id=e.id, u=remap[e.u], v=remap[e.v], w=e.w)
        for e in g.edges
        if e.u in seen and e.v in seen
    )
    sub = Graph(
        labels=tuple(g.labels[x] for x in keep),
        edges=edges,
        kappa=tuple(g.kappa[x] for x in keep),
    )
    return sub, tuple(keep)


# ---------------------------------------------------------------------------
# file format: JSON record, round-trippable


def load_graph(path) -> tuple[Graph, str | None, float | None]:
    """Read a graph description file (JSON).

    Schema::

        {
          "vertices": ["a", "b"],
          "edges": [["a", "b", 1.0]],
          "kappa": {"a": 1.0},
          "x0": "a",            # optional
          "u": 1.0              # optional, > 0
        }

    Returns ``(graph, x0_label_or_None, u_or_None)``.
    """
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph file {path} is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise GraphError("graph file must contain a JSON object")
    g = build_graph(spec, allow_recurrent=True)
    x0 = spec.get("x0")
    if x0 is not None:
        x0 = str(x0)
        g.vertex(x0)  # validate
    u = spec.get("u")
    if u is not None:
        u = float(u)
        if not (u > 0):
            raise GraphError(f"u must be positive, got {u}")
    return g, x0, u


def save_graph(path, g: Graph, x0: str | None = None, u: float | None = None) -> None:
    """Write a graph description file readable by `load_graph`."""
    spec = {
        "vertices": list(g.labels),
        "edges": [[g.labels[e.u], g.labels[e.v], e.w] for e in g.edges],
        "kappa": {lab: k for lab, k in zip(g.labels, g.kappa) if k != 0.0},
    }
    if x0 is not None:
        spec["x0"] = x0
    if u is not None:
        spec["u"] = float(u)
    with open(path, "w") as fh:
        json.dump(spec, fh, indent=2)
        fh.write("\n")
