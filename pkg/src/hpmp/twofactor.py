"""Minimum-weight 2-factors through a perfect-matching gadget.

Every original vertex ``v`` becomes two vertices ``b1[v]``, ``b2[v]``; every
original edge ``e = {u, v}`` becomes two vertices ``a_u[e]``, ``a_v[e]`` and
five gadget edges::

    b1[u] - a_u[e]   weight c_e / 2
    b2[u] - a_u[e]   weight c_e / 2
    a_u[e] - a_v[e]  weight 0
    b1[v] - a_v[e]   weight c_e / 2
    b2[v] - a_v[e]   weight c_e / 2

A perfect matching must cover both copies of each original vertex with two
distinct incident edge gadgets, so the edges whose ``a`` vertices are matched
to ``b`` vertices form a 2-factor, and the matching weight equals its weight.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InternalInvariantError
from .matching import GeneralGraph, solve_with_duals

__all__ = [
    "CycleCover",
    "GadgetGraph",
    "build_gadget",
    "canonical_cycle",
    "min_weight_two_factor",
    "two_factor_on_edges",
]

log = logging.getLogger(__name__)

# gadget edge slots, in the order they are laid out for each original edge
B1_AU, B2_AU, AU_AV, B1_AV, B2_AV = range(5)

FULL_GADGET_MAX_N = 30
PRICING_TOL = 1e-9


def canonical_cycle(seq):
    """Rotate to the smallest id and orient toward its smaller neighbour."""
    seq = [int(x) for x in seq]
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


@dataclass(frozen=True)
class CycleCover:
    """Vertex-disjoint cycles (each of length >= 3) covering ``0..n-1``."""

    cycles: tuple
    weight: float

    @classmethod
    def from_cycles(cls, inst, cycles):
        canon = sorted(canonical_cycle(c) for c in cycles)
        weight = sum(inst.cycle_weight(c) for c in canon)
        return cls(tuple(canon), weight)

    @property
    def q(self):
        return len(self.cycles)

    @property
    def sizes(self):
        return [len(c) for c in self.cycles]

    def edges(self):
        for c in self.cycles:
            for i, a in enumerate(c):
                b = c[(i + 1) % len(c)]
                yield (min(a, b), max(a, b))

    def validate(self, n):
        seen = sorted(v for c in self.cycles for v in c)
        if seen != list(range(n)):
            raise InternalInvariantError("cycles do not partition the vertex set")
        if any(len(c) < 3 for c in self.cycles):
            raise InternalInvariantError("cycle shorter than 3")


@dataclass(frozen=True)
class GadgetGraph:
    """The auxiliary matching graph together with its index maps.

    ``vertex_map[v] = (b1, b2)``; ``a_vertices[e] = (a_u, a_v)`` for the
    original edge ``orig_edges[e] = (u, v)`` with ``u < v``;
    ``edge_ids[e]`` lists the five gadget edge ids in slot order.
    """

    graph: GeneralGraph
    n: int
    orig_edges: np.ndarray
    orig_weights: np.ndarray
    vertex_map: np.ndarray
    a_vertices: np.ndarray
    edge_ids: np.ndarray


def _all_pairs(n):
    iu, ju = np.triu_indices(n, k=1)
    return np.stack([iu, ju], axis=1)


def build_gadget(inst, edges=None):
    """Gadget graph for the complete instance, or for a subset of its edges
    given as an ``(k, 2)`` array of vertex pairs."""
    n = inst.n
    if edges is None:
        pairs = _all_pairs(n)
    else:
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        pairs = np.sort(pairs, axis=1)
    m = len(pairs)
    u, v = pairs[:, 0], pairs[:, 1]
    c = inst.weights[u, v]

    vertex_map = np.arange(2 * n, dtype=np.int64).reshape(n, 2)
    a_vertices = (2 * n + np.arange(2 * m, dtype=np.int64)).reshape(m, 2)
    au, av = a_vertices[:, 0], a_vertices[:, 1]

    gu = np.empty((m, 5), np.int64)
    gv = np.empty((m, 5), np.int64)
    gw = np.zeros((m, 5))
    gu[:, B1_AU], gv[:, B1_AU] = vertex_map[u, 0], au
    gu[:, B2_AU], gv[:, B2_AU] = vertex_map[u, 1], au
    gu[:, AU_AV], gv[:, AU_AV] = au, av
    gu[:, B1_AV], gv[:, B1_AV] = vertex_map[v, 0], av
    gu[:, B2_AV], gv[:, B2_AV] = vertex_map[v, 1], av
    half = c / 2.0
    for slot in (B1_AU, B2_AU, B1_AV, B2_AV):
        gw[:, slot] = half

    graph = GeneralGraph(2 * n + 2 * m, gu.ravel(), gv.ravel(), gw.ravel())
    edge_ids = np.arange(5 * m, dtype=np.int64).reshape(m, 5)
    return GadgetGraph(graph, n, pairs, c, vertex_map, a_vertices, edge_ids)


def _cycles_from_edges(n, edge_list):
    adj = [[] for _ in range(n)]
    for a, b in edge_list:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(x) != 2 for x in adj):
        raise InternalInvariantError("extracted edge set is not 2-regular")
    seen = [False] * n
    cycles = []
    for s in range(n):
        if seen[s]:
            continue
        cyc = [s]
        seen[s] = True
        prev, cur = s, adj[s][0]
        while cur != s:
            cyc.append(cur)
            seen[cur] = True
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
        if len(cyc) < 3:
            raise InternalInvariantError("extracted a cycle shorter than 3")
        cycles.append(cyc)
    return cycles


def extract_two_factor(gadget, mate):
    """Original edges selected by a perfect matching of the gadget."""
    vm = gadget.vertex_map
    u, v = gadget.orig_edges[:, 0], gadget.orig_edges[:, 1]
    au, av = gadget.a_vertices[:, 0], gadget.a_vertices[:, 1]
    u_side = (mate[au] == vm[u, 0]) | (mate[au] == vm[u, 1])
    v_side = (mate[av] == vm[v, 0]) | (mate[av] == vm[v, 1])
    middle = mate[au] == av
    if not np.array_equal(u_side, v_side) or not np.array_equal(u_side, ~middle):
        raise InternalInvariantError("gadget matching is inconsistent")
    return gadget.orig_edges[u_side]


@dataclass(frozen=True)
class _GadgetSolve:
    cover: CycleCover
    matching_weight: float
    potentials: np.ndarray  # per original vertex, max over its two copies
    gadget: GadgetGraph


def two_factor_on_edges(inst, edges=None):
    """Solve the gadget restricted to ``edges`` (all edges when ``None``)."""
    gadget = build_gadget(inst, edges)
    matching, duals = solve_with_duals(gadget.graph)
    chosen = extract_two_factor(gadget, matching.mate)
    cover = CycleCover.from_cycles(inst, _cycles_from_edges(inst.n, chosen.tolist()))
    tol = 1e-9 * max(1.0, cover.weight)
    if abs(matching.weight - cover.weight) > tol:
        raise InternalInvariantError(
            f"matching weight {matching.weight} != 2-factor weight {cover.weight}")
    pot = duals.vertex[gadget.vertex_map].max(axis=1)
    return _GadgetSolve(cover, matching.weight, pot, gadget)


def _seed_edges(inst, k):
    n = inst.n
    w = np.array(inst.weights)
    np.fill_diagonal(w, np.inf)
    nearest = np.argsort(w, axis=1, kind="stable")[:, :k]
    rows = np.repeat(np.arange(n), k)
    knn = np.stack([rows, nearest.ravel()], axis=1)
    # a Hamiltonian cycle keeps the restricted gadget perfectly matchable
    ring = np.stack([np.arange(n), (np.arange(n) + 1) % n], axis=1)
    return np.unique(np.sort(np.vstack([knn, ring]), axis=1), axis=0)


def min_weight_two_factor(inst, method="auto", k_nearest=10):
    """Minimum-weight 2-factor of the complete graph of ``inst``.

    ``method="full"`` matches on the whole gadget. ``method="pricing"``
    starts from a sparse candidate edge set and uses the matching duals to
    price every excluded edge: an edge ``{u, v}`` with
    ``c_uv < P[u] + P[v]`` (``P`` the larger potential of the two copies of
    a vertex) could improve the solution and is added; when no such edge
    remains the restricted optimum is optimal for the complete gadget.
    ``"auto"`` picks ``full`` for ``n <= 30``.
    """
    n = inst.n
    if n < 3:
        raise ValueError("n must be >= 3")
    if method == "auto":
        method = "full" if n <= FULL_GADGET_MAX_N else "pricing"
    if method == "full":
        return two_factor_on_edges(inst).cover
    if method != "pricing":
        raise ValueError(f"unknown method {method!r}")

    cand = _seed_edges(inst, min(k_nearest, n - 1))
    in_cand = np.zeros((n, n), dtype=bool)
    in_cand[cand[:, 0], cand[:, 1]] = True
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    rounds = 0
    while True:
        rounds += 1
        res = two_factor_on_edges(inst, cand)
        rc = inst.weights - res.potentials[:, None] - res.potentials[None, :]
        viol = upper & ~in_cand & (rc < -PRICING_TOL)
        iu, ju = np.nonzero(viol)
        if len(iu) == 0:
            log.debug("pricing converged after %d rounds, %d edges", rounds, len(cand))
            return res.cover
        order = np.argsort(rc[iu, ju], kind="stable")[: 20 * n]
        new = np.stack([iu[order], ju[order]], axis=1)
        in_cand[new[:, 0], new[:, 1]] = True
        cand = np.vstack([cand, new])
