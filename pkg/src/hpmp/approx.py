"""Approximation algorithm for the Hamiltonian p-median problem.

Starting from a minimum-weight 2-factor ``F`` with ``q`` cycles:

* ``q == p``: ``F`` itself is optimal.
* ``q > p``: join cycles with the lightest edges of a minimum spanning forest
  with ``p`` trees, doubling each added edge (ratio 3).
* ``q < p``: peel three-vertex paths off components with at least six
  vertices until there are ``p`` components, then double every edge
  (ratio 2).

The two non-trivial branches end with an even-degree multigraph with ``p``
components, which is turned into ``p`` cycles by shortcutting an Eulerian
circuit of each component.
"""

import logging
import math
import time
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from ._jit import jit
from .errors import AlgorithmInapplicableError, InfeasibleProblemError, InternalInvariantError
from .instance import check_triangle_inequality
from .twofactor import CycleCover, canonical_cycle, min_weight_two_factor

__all__ = [
    "HpmpSolution",
    "MultiEdge",
    "WorkingMultigraph",
    "RunReport",
    "MetricWarning",
    "feasibility_threshold",
    "l_value",
    "max_l_partition",
    "mst_forest",
    "merge_branch",
    "split_branch",
    "eulerian_shortcut",
    "solve",
]

log = logging.getLogger(__name__)

WEIGHT_TOL = 1e-9
GUARANTEE_TOL = 1e-6


class MetricWarning(UserWarning):
    """The instance violates the triangle inequality; ratio bounds are void."""


@dataclass(frozen=True)
class HpmpSolution(CycleCover):
    """A cover by exactly ``p`` cycles."""

    @property
    def p(self):
        return len(self.cycles)

    def validate(self, n, p=None):
        super().validate(n)
        if p is not None and self.p != p:
            raise InternalInvariantError(f"expected {p} cycles, got {self.p}")


@dataclass(frozen=True)
class RunReport:
    n: int
    p: int
    lb: float
    ub: float
    ratio: float
    q: int
    branch: str
    guaranteed_ratio: int
    time_ms_two_factor: float
    time_ms_branch: float
    time_ms_total: float
    metric: bool = True


# --- feasibility machinery ---------------------------------------------------

def _ceil_div(a, b):
    return -(-a // b)


def feasibility_threshold(n):
    """Largest p for which the split branch is guaranteed to succeed."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return _ceil_div(n - 2 * _ceil_div(n, 5), 3)


def l_value(cover):
    """Number of vertices left over when every cycle is cut into triples.

    Accepts a :class:`CycleCover` or a plain list of cycle sizes.
    """
    sizes = cover.sizes if hasattr(cover, "sizes") else cover
    return sum(s % 3 for s in sizes)


# remainder of 5..9 vertices after the leading five-cycles
_REMAINDER_PARTS = {5: [5], 6: [6], 7: [7], 8: [5, 3], 9: [5, 4]}


def max_l_partition(n):
    """Cycle sizes with as many five-cycles as possible, and their l value.

    Uses ``n // 5 - 1`` five-cycles and arranges the 5..9 remaining vertices
    by a fixed case table.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if n < 5:
        sizes = [n]
    else:
        fives = n // 5 - 1
        sizes = [5] * fives + _REMAINDER_PARTS[n - 5 * fives]
    return sizes, l_value(sizes)


# --- spanning forest -----------------------------------------------------------

def _prim_np(w):
    n = w.shape[0]
    parent = np.full(n, -1, np.int64)
    key = np.full(n, np.inf)
    done = np.zeros(n, np.bool_)
    key[0] = 0.0
    for _ in range(n):
        masked = np.where(done, np.inf, key)
        v = int(np.argmin(masked))
        done[v] = True
        better = (~done) & (w[v] < key)
        key[better] = w[v][better]
        parent[better] = v
    return parent


@jit(fallback=_prim_np)
def _prim(w):
    n = w.shape[0]
    parent = np.full(n, -1, np.int64)
    key = np.full(n, np.inf)
    done = np.zeros(n, np.bool_)
    key[0] = 0.0
    for _ in range(n):
        v = -1
        best = np.inf
        for x in range(n):
            if not done[x] and (v == -1 or key[x] < best):
                v = x
                best = key[x]
        done[v] = True
        for x in range(n):
            if not done[x] and w[v, x] < key[x]:
                key[x] = w[v, x]
                parent[x] = v
    return parent


def mst_forest(inst, p):
    """Minimum spanning tree minus its ``p - 1`` heaviest edges.

    Returns ``n - p`` edges ``(u, v, w)`` (``u < v``), sorted by weight.
    Ties between equally heavy edges are broken by vertex ids.
    """
    n = inst.n
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    parent = _prim(np.ascontiguousarray(inst.weights))
    tree = sorted(
        (inst.w(v, int(parent[v])), min(v, int(parent[v])), max(v, int(parent[v])))
        for v in range(n) if parent[v] >= 0)
    kept = tree[: len(tree) - (p - 1)]
    return [(u, v, w) for w, u, v in kept]


# --- working multigraph --------------------------------------------------------

@dataclass(frozen=True)
class MultiEdge:
    u: int
    v: int
    w: float
    mult: int
    origin: str  # "two_factor" or "tree"


@dataclass
class WorkingMultigraph:
    n: int
    edges: list
    components: list = field(default_factory=list)

    def degrees(self):
        deg = np.zeros(self.n, np.int64)
        for e in self.edges:
            deg[e.u] += e.mult
            deg[e.v] += e.mult
        return deg

    @property
    def weight(self):
        return sum(e.w * e.mult for e in self.edges)

    def component_of(self):
        comp = np.full(self.n, -1, np.int64)
        for i, c in enumerate(self.components):
            comp[list(c)] = i
        return comp

    def check_shortcut_ready(self, p=None):
        if np.any(self.degrees() % 2):
            raise InternalInvariantError("multigraph has an odd-degree vertex")
        if p is not None and len(self.components) != p:
            raise InternalInvariantError(
                f"multigraph has {len(self.components)} components, expected {p}")
        if any(len(c) < 3 for c in self.components):
            raise InternalInvariantError("component with fewer than 3 vertices")
        comp = self.component_of()
        if np.any(comp < 0):
            raise InternalInvariantError("vertex outside every component")
        for e in self.edges:
            if comp[e.u] != comp[e.v]:
                raise InternalInvariantError("edge joins two components")


def _cycle_edges(inst, cyc, closed=True):
    k = len(cyc)
    stop = k if closed else k - 1
    return [(min(cyc[i], cyc[(i + 1) % k]), max(cyc[i], cyc[(i + 1) % k]),
             inst.w(cyc[i], cyc[(i + 1) % k])) for i in range(stop)]


def merge_branch(F, forest, p, inst):
    """Join the cycles of ``F`` into ``p`` components using forest edges.

    Forest edges joining two different current components are taken in
    ascending weight; each one added is doubled.
    """
    n = inst.n
    if F.q < p:
        raise ValueError("merge branch needs at least p cycles")
    ds = DisjointSet(range(n))
    edges = []
    for cyc in F.cycles:
        for a in cyc[1:]:
            ds.merge(cyc[0], a)
        edges.extend(MultiEdge(u, v, w, 1, "two_factor") for u, v, w in _cycle_edges(inst, cyc))
    count = F.q
    for u, v, w in sorted(forest, key=lambda e: (e[2], e[0], e[1])):
        if count == p:
            break
        if not ds.connected(u, v):
            ds.merge(u, v)
            edges.append(MultiEdge(u, v, w, 2, "tree"))
            count -= 1
    if count != p:
        raise InternalInvariantError(
            f"forest could not reduce {F.q} cycles to {p} components")
    comps = sorted(tuple(sorted(s)) for s in ds.subsets())
    return WorkingMultigraph(n, edges, comps)


def _orient(seq, is_cycle):
    if is_cycle:
        return list(canonical_cycle(seq))
    return list(seq) if seq[0] < seq[-1] else list(seq[::-1])


def _component_weight(inst, seq, is_cycle):
    return sum(w for _, _, w in _cycle_edges(inst, seq, closed=is_cycle))


def split_branch(F, p, inst):
    """Peel paths ``(v1, v2, v3)`` off components until there are ``p``.

    Always splits a largest component with at least six vertices (ties go
    to the smallest contained vertex id). Raises
    :class:`AlgorithmInapplicableError` when no such component is left.
    """
    comps = [(list(c), True) for c in F.cycles]
    if len(comps) > p:
        raise ValueError("split branch needs at most p cycles")
    while len(comps) < p:
        big = [i for i, (seq, _) in enumerate(comps) if len(seq) >= 6]
        if not big:
            raise AlgorithmInapplicableError(
                f"cannot reach {p} components: sizes "
                f"{sorted(len(s) for s, _ in comps)} have none with 6 or more vertices")
        i = max(big, key=lambda j: (len(comps[j][0]), -min(comps[j][0])))
        seq, is_cycle = comps.pop(i)
        seq = _orient(seq, is_cycle)
        before = _component_weight(inst, seq, is_cycle)
        head, tail = seq[:3], seq[3:]
        after = _component_weight(inst, head, False) + _component_weight(inst, tail, False)
        if after > before + WEIGHT_TOL:
            raise InternalInvariantError("split increased the weight")
        comps.extend([(head, False), (tail, False)])

    edges = []
    for seq, is_cycle in comps:
        edges.extend(MultiEdge(u, v, w, 2, "two_factor")
                     for u, v, w in _cycle_edges(inst, seq, closed=is_cycle))
    components = sorted(tuple(sorted(seq)) for seq, _ in comps)
    return WorkingMultigraph(inst.n, edges, components)


# --- Eulerian shortcutting ---------------------------------------------------------

def _euler_circuit(start, adj, n_edges):
    """Hierholzer's algorithm on adjacency lists of ``(neighbour, edge_id)``."""
    used = [False] * n_edges
    ptr = {v: 0 for v in adj}
    stack = [start]
    circuit = []
    while stack:
        v = stack[-1]
        nbrs = adj[v]
        i = ptr[v]
        while i < len(nbrs) and used[nbrs[i][1]]:
            i += 1
        ptr[v] = i
        if i == len(nbrs):
            circuit.append(stack.pop())
        else:
            x, eid = nbrs[i]
            used[eid] = True
            stack.append(x)
    if not all(used):
        raise InternalInvariantError("component is not connected")
    return circuit[::-1]


def eulerian_shortcut(mg, inst, check_metric_bound=True):
    """One cycle per component: an Eulerian circuit from the smallest vertex,
    keeping first visits only."""
    mg.check_shortcut_ready()
    comp = mg.component_of()
    per_comp = [[] for _ in mg.components]
    for e in mg.edges:
        per_comp[comp[e.u]].extend([e] * e.mult)

    cycles = []
    for ci, verts in enumerate(mg.components):
        copies = per_comp[ci]
        adj = {v: [] for v in verts}
        for eid, e in enumerate(copies):
            adj[e.u].append((e.v, eid))
            adj[e.v].append((e.u, eid))
        for v in adj:
            adj[v].sort()
        tour = _euler_circuit(min(verts), adj, len(copies))
        seen = set()
        cyc = []
        for v in tour:
            if v not in seen:
                seen.add(v)
                cyc.append(v)
        if sorted(cyc) != list(verts):
            raise InternalInvariantError("tour misses vertices of its component")
        if check_metric_bound:
            comp_weight = sum(e.w for e in copies)
            if inst.cycle_weight(cyc) > comp_weight + WEIGHT_TOL * max(1.0, comp_weight):
                raise InternalInvariantError("shortcut increased weight on a metric instance")
        cycles.append(cyc)
    canon = sorted(canonical_cycle(c) for c in cycles)
    return HpmpSolution(tuple(canon), sum(inst.cycle_weight(c) for c in canon))


# --- driver ------------------------------------------------------------------------

def solve(inst, p, two_factor_method="auto"):
    """Run the approximation algorithm; return ``(solution, report)``.

    Raises :class:`InfeasibleProblemError` unless ``1 <= p <= n // 3`` and
    :class:`AlgorithmInapplicableError` when the split branch gets stuck
    (possible only for p above :func:`feasibility_threshold`).
    """
    n = inst.n
    if p < 1 or 3 * p > n:
        raise InfeasibleProblemError(f"p={p} is infeasible for n={n} (need 1 <= p <= {n // 3})")
    metric = check_triangle_inequality(inst, 1e-9)
    if not metric:
        warnings.warn(f"instance {inst.name} violates the triangle inequality",
                      MetricWarning, stacklevel=2)

    t0 = time.perf_counter()
    F = min_weight_two_factor(inst, method=two_factor_method)
    t1 = time.perf_counter()
    q = F.q
    if q == p:
        sol = HpmpSolution(F.cycles, F.weight)
        branch, guaranteed = "equal", 1
        bound = F.weight
    elif q > p:
        mg = merge_branch(F, mst_forest(inst, p), p, inst)
        mg.check_shortcut_ready(p)
        sol = eulerian_shortcut(mg, inst, check_metric_bound=metric)
        branch, guaranteed = "merge", 3
        # c(F) and the p-tree forest are each at most c(H*), which gives the
        # factor 3 against the optimum; against c(F) alone only this holds
        bound = F.weight + 2 * sum(e.w for e in mg.edges if e.origin == "tree")
    else:
        try:
            mg = split_branch(F, p, inst)
        except AlgorithmInapplicableError as exc:
            exc.lb, exc.q = F.weight, q
            raise
        mg.check_shortcut_ready(p)
        sol = eulerian_shortcut(mg, inst, check_metric_bound=metric)
        branch, guaranteed = "split", 2
        bound = 2 * F.weight
    t2 = time.perf_counter()

    sol.validate(n, p)
    lb, ub = F.weight, sol.weight
    if metric and ub > bound + GUARANTEE_TOL:
        raise InternalInvariantError(f"ub={ub} exceeds the {branch} branch bound {bound}")
    if ub > guaranteed * lb + GUARANTEE_TOL:
        log.info("%s: ub/lb=%.4f exceeds %d; the guarantee is against the optimum, "
                 "not against c(F)", inst.name, ub / lb, guaranteed)
    if lb > 0:
        ratio = ub / lb
    else:
        ratio = 1.0 if ub == 0 else math.inf
    report = RunReport(
        n=n, p=p, lb=lb, ub=ub, ratio=ratio, q=q, branch=branch,
        guaranteed_ratio=guaranteed,
        time_ms_two_factor=(t1 - t0) * 1e3,
        time_ms_branch=(t2 - t1) * 1e3,
        time_ms_total=(t2 - t0) * 1e3,
        metric=metric,
    )
    return sol, report


def edge_multiplicities(mg):
    """Counter of ``(u, v) -> multiplicity`` for inspection and tests."""
    cnt = Counter()
    for e in mg.edges:
        cnt[(e.u, e.v)] += e.mult
    return cnt
