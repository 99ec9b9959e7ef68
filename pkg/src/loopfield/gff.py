"""Gaussian fields on networks: exact conditional sampling, no MCMC.

The centred field has density proportional to exp(-E(f, f)/2) where E is the
network energy form, i.e. covariance G = Lambda^{-1}.  Conditioning on pinned
values is Gaussian conditioning: with U the pinned set and A its complement,

    phi_A | phi_U = f   ~   Normal( -Lambda_AA^{-1} Lambda_AU f,  Lambda_AA^{-1} ).

Lambda_AA is positive definite whenever each component of A reaches either a
pinned vertex or positive killing, so pinned sampling works on recurrent
networks too; only the fully unconditioned law needs transience.

Sampling is by Cholesky factorisation of Lambda_AA: exact in one shot.
Factorisations are cached per (graph, conditioning) pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np
from scipy.linalg import solve_triangular

from .graph import Graph, GraphError, precision_matrix


@dataclass
class FieldReal:
    """Real-valued field on the vertices of a graph (declaration order)."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).copy()

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def signs(self) -> np.ndarray:
        """Signs in {-1, +1}; the sign of an exact zero is +1."""
        return np.where(self.values < 0, -1, 1)


def field_decompose(phi: FieldReal) -> tuple[np.ndarray, np.ndarray]:
    """Split a field into (magnitude, signs), signs in {-1,+1}, sign(0) = +1."""
    return phi.magnitude, phi.signs


@dataclass(frozen=True)
class ConditionSpec:
    """Pinned vertices and their values, as a sorted tuple of (index, value)."""

    pinned: tuple[tuple[int, float], ...]

    def vertices(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.pinned)


def condition(pinned: Mapping[int, float] | None = None) -> ConditionSpec:
    """Build a ConditionSpec from a mapping vertex index -> pinned value."""
    items = tuple(sorted((int(x), float(v)) for x, v in (pinned or {}).items()))
    seen = [x for x, _ in items]
    if len(set(seen)) != len(seen):
        raise GraphError("conditioning pins a vertex twice")
    return ConditionSpec(pinned=items)


def pin(g: Graph, values: Mapping[str, float]) -> ConditionSpec:
    """ConditionSpec from vertex labels."""
    return condition({g.vertex(lab): v for lab, v in values.items()})


@dataclass
class GffMoments:
    """Conditional mean over all vertices and covariance over the free ones."""

    mean: np.ndarray
    cov: np.ndarray
    free: tuple[int, ...]


@lru_cache(maxsize=512)
def _factorization(g: Graph, cond: ConditionSpec):
    for x, _ in cond.pinned:
        if not (0 <= x < g.n):
            raise GraphError(f"conditioning references vertex index {x} out of range")
    pinned_ix = [x for x, _ in cond.pinned]
    pinned_val = np.array([v for _, v in cond.pinned])
    free = tuple(x for x in range(g.n) if x not in set(pinned_ix))

    mean = np.zeros(g.n)
    if pinned_ix:
        mean[pinned_ix] = pinned_val

    if not free:
        return mean, free, np.zeros((0, 0)), np.zeros((0, 0))

    lam = precision_matrix(g)
    sub = lam[np.ix_(free, free)]
    if not pinned_ix and not g.is_transient():
        raise GraphError(
            "unconditioned field on a recurrent network has no law; "
            "pin a vertex or add killing"
        )
    try:
        chol = np.linalg.cholesky(sub)
    except np.linalg.LinAlgError:
        raise GraphError(
            "restricted precision matrix is not positive definite; "
            "some free component reaches neither killing nor a pinned vertex"
        ) from None
    if pinned_ix:
        cross = lam[np.ix_(free, pinned_ix)]
        rhs = cross @ pinned_val
        y = solve_triangular(chol, -rhs, lower=True)
        mean[list(free)] = solve_triangular(chol.T, y, lower=False)
    cov = solve_triangular(
        chol.T, solve_triangular(chol, np.eye(len(free)), lower=True), lower=False
    )
    cov = (cov + cov.T) / 2.0
    mean.setflags(write=False)
    cov.setflags(write=False)
    return mean, free, chol, cov


def conditional_moments(g: Graph, cond: ConditionSpec) -> GffMoments:
    """Exact conditional mean and covariance of the field given `cond`.

    The mean is the energy-harmonic extension of the pinned values (it solves
    the same linear system as the hitting probability weighted by values); the
    covariance is the inverse of the restricted precision matrix, returned
    over the free vertices in `free` order.
    """
    mean, free, _, cov = _factorization(g, cond)
    return GffMoments(mean=mean.copy(), cov=cov.copy(), free=free)


def sample_gff(g: Graph, cond: ConditionSpec, rng: np.random.Generator, size: int | None = None):
    """Draw from the conditional field law by exact factorisation.

    With ``size=None`` returns a single `FieldReal`; with an integer returns
    an ``(size, n)`` array whose rows are independent draws.  Pinned entries
    are reproduced exactly.
    """
    mean, free, chol, _ = _factorization(g, cond)
    k = len(free)
    if size is None:
        values = mean.copy()
        if k:
            z = rng.standard_normal(k)
            values[list(free)] += solve_triangular(chol.T, z, lower=False)
        return FieldReal(values)
    out = np.tile(mean, (size, 1))
    if k:
        z = rng.standard_normal((k, size))
        out[:, list(free)] += solve_triangular(chol.T, z, lower=False).T
    return out
