"""Minimum-weight perfect matching on general weighted graphs."""

from dataclasses import dataclass, field

import numpy as np

from ._blossom import blossom_kernel
from .errors import NoPerfectMatchingError

__all__ = [
    "GeneralGraph",
    "PerfectMatching",
    "MatchingDuals",
    "min_weight_perfect_matching",
    "solve_with_duals",
]


@dataclass(frozen=True, eq=False)
class GeneralGraph:
    """Sparse undirected graph with non-negative edge weights.

    Edges are held as three parallel arrays; ``edges`` yields them as
    ``(u, v, w)`` tuples in insertion order.
    """

    vertex_count: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.int64)
        v = np.ascontiguousarray(self.v, dtype=np.int64)
        w = np.ascontiguousarray(self.w, dtype=np.float64)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        if not (u.shape == v.shape == w.shape) or u.ndim != 1:
            raise ValueError("edge arrays must be 1-D and of equal length")
        n = int(self.vertex_count)
        if n < 0:
            raise ValueError("vertex_count must be non-negative")
        if len(u):
            if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise ValueError("edge weights must be finite and non-negative")
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            if len(np.unique(lo * n + hi)) != len(u):
                raise ValueError("parallel edges are not allowed")

    @classmethod
    def from_edges(cls, vertex_count, edges):
        edges = list(edges)
        if not edges:
            return cls(vertex_count, np.empty(0), np.empty(0), np.empty(0))
        u, v, w = zip(*edges)
        return cls(vertex_count, np.array(u), np.array(v), np.array(w, dtype=float))

    @property
    def edge_count(self):
        return len(self.u)

    @property
    def edges(self):
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.u, self.v, self.w)]

    def weight_lookup(self):
        return {(min(a, b), max(a, b)): c for a, b, c in self.edges}


@dataclass(frozen=True)
class PerfectMatching:
    pairs: tuple
    weight: float
    mate: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class MatchingDuals:
    """Optimality certificate in minimisation form.

    For every edge ``(i, j, w)``::

        w - vertex[i] - vertex[j] - sum(blossom[B] for B containing i and j) >= 0

    with equality on matched edges; every blossom dual is <= 0 and a
    non-zero blossom dual implies the blossom is full.
    """

    vertex: np.ndarray
    blossoms: tuple  # of (sorted vertex tuple, dual)


def _csr_endpoints(n, u, v):
    m = len(u)
    owner = np.empty(2 * m, np.int64)
    owner[1::2] = u  # endpoint 2k+1 is seen from u
    owner[0::2] = v
    nb_end = np.argsort(owner, kind="stable").astype(np.int64)
    counts = np.bincount(owner, minlength=n)
    nb_ptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=nb_ptr[1:])
    endpoint = np.empty(2 * m, np.int64)
    endpoint[0::2] = u
    endpoint[1::2] = v
    return endpoint, nb_ptr, nb_end


def _blossom_leaves(parent, base, n):
    members = {}
    for x in range(n):
        b = parent[x]
        while b != -1:
            members.setdefault(int(b), []).append(x)
            b = parent[b]
    return {b: tuple(sorted(vs)) for b, vs in members.items() if base[b] >= 0}


def solve_with_duals(g):
    """Minimum-weight perfect matching plus its dual certificate."""
    n = int(g.vertex_count)
    if n % 2:
        raise NoPerfectMatchingError(f"odd vertex count ({n})")
    if n == 0:
        return (PerfectMatching((), 0.0, np.empty(0, np.int64)),
                MatchingDuals(np.empty(0), ()))
    endpoint, nb_ptr, nb_end = _csr_endpoints(n, g.u, g.v)
    # maximise -w over maximum-cardinality matchings
    mate, dualvar, parent, base = blossom_kernel(n, endpoint, -g.w, nb_ptr, nb_end)
    if np.any(mate < 0):
        raise NoPerfectMatchingError(
            f"no perfect matching: {int(np.sum(mate < 0))} vertices left unmatched")

    sel = mate[g.u] == g.v
    pairs = tuple(sorted(zip(np.minimum(g.u[sel], g.v[sel]).tolist(),
                             np.maximum(g.u[sel], g.v[sel]).tolist())))
    weight = float(np.sum(g.w[sel]))
    leaves = _blossom_leaves(parent, base, n)
    blossoms = tuple((leaves[b], -float(dualvar[b])) for b in sorted(leaves))
    duals = MatchingDuals(-dualvar[:n] / 2.0, blossoms)
    return PerfectMatching(pairs, weight, mate), duals


def min_weight_perfect_matching(g):
    """Return a perfect matching of ``g`` of minimum total weight.

    Raises :class:`NoPerfectMatchingError` when the vertex count is odd or
    the graph has no perfect matching. Among several optimal matchings the
    one returned is unspecified.
    """
    return solve_with_duals(g)[0]
