"""Exhaustive reference solvers for small instances.

These favour obviousness over speed and share no code with the matching,
gadget or approximation paths they are used to check.
"""

from dataclasses import dataclass

import numpy as np

from .approx import HpmpSolution
from .errors import InfeasibleProblemError, NoPerfectMatchingError, OracleLimitError
from .matching import PerfectMatching
from .twofactor import CycleCover

__all__ = [
    "OracleLimitConfig",
    "DEFAULT_LIMITS",
    "brute_matching",
    "cheapest_cycle_table",
    "brute_two_factor",
    "brute_hpmp",
    "max_l_exhaustive",
]


@dataclass(frozen=True)
class OracleLimitConfig:
    max_n_matching: int = 12
    max_n_two_factor: int = 10
    max_n_hpmp: int = 10

    def __post_init__(self):
        if min(self.max_n_matching, self.max_n_two_factor, self.max_n_hpmp) <= 0:
            raise ValueError("oracle limits must be positive")


DEFAULT_LIMITS = OracleLimitConfig()


def brute_matching(g, limits=DEFAULT_LIMITS):
    """Minimum perfect matching by enumerating every pairing."""
    n = g.vertex_count
    if n > limits.max_n_matching:
        raise OracleLimitError(f"n={n} exceeds max_n_matching={limits.max_n_matching}")
    if n % 2:
        raise NoPerfectMatchingError(f"odd vertex count ({n})")
    wt = g.weight_lookup()
    best_w = None
    best_pairs = None

    def rec(free, chosen, acc):
        nonlocal best_w, best_pairs
        if not free:
            if best_w is None or acc < best_w:
                best_w, best_pairs = acc, list(chosen)
            return
        a = free[0]
        for i in range(1, len(free)):
            b = free[i]
            key = (min(a, b), max(a, b))
            if key in wt:
                chosen.append(key)
                rec(free[1:i] + free[i + 1:], chosen, acc + wt[key])
                chosen.pop()

    rec(list(range(n)), [], 0.0)
    if best_w is None:
        raise NoPerfectMatchingError("graph has no perfect matching")
    mate = np.full(n, -1, np.int64)
    for a, b in best_pairs:
        mate[a], mate[b] = b, a
    return PerfectMatching(tuple(sorted(best_pairs)), float(best_w), mate)


def cheapest_cycle_table(weights):
    """Cheapest Hamiltonian cycle of every vertex subset (bitmask).

    Held-Karp paths start at the lowest vertex of the subset. Returns
    ``(cost, order)`` where ``cost[mask]`` is ``inf`` for subsets with fewer
    than three vertices and ``order[mask]`` is the cycle's vertex list.
    """
    w = np.asarray(weights, dtype=float).tolist()
    n = len(w)
    full = 1 << n
    inf = float("inf")
    path = [dict() for _ in range(full)]  # end vertex -> (cost, prev)
    for s in range(n):
        path[1 << s][s] = (0.0, -1)
    for mask in range(1, full):
        low = (mask & -mask).bit_length() - 1
        for v, (c, _) in list(path[mask].items()):
            for x in range(low + 1, n):
                if mask >> x & 1:
                    continue
                nm = mask | (1 << x)
                nc = c + w[v][x]
                cur = path[nm].get(x)
                if cur is None or nc < cur[0]:
                    path[nm][x] = (nc, v)

    cost = [inf] * full
    order = [None] * full
    for mask in range(1, full):
        if bin(mask).count("1") < 3:
            continue
        low = (mask & -mask).bit_length() - 1
        best, end = inf, -1
        for v, (c, _) in path[mask].items():
            if v != low and c + w[v][low] < best:
                best, end = c + w[v][low], v
        seq = []
        m, v = mask, end
        while v != -1:
            seq.append(v)
            prev = path[m][v][1]
            m ^= 1 << v
            v = prev
        cost[mask] = best
        order[mask] = seq[::-1]
    return cost, order


def _submasks_with_low(mask):
    low = mask & -mask
    rest = mask ^ low
    sub = rest
    while True:
        yield sub | low
        if sub == 0:
            return
        sub = (sub - 1) & rest


def brute_two_factor(inst, limits=DEFAULT_LIMITS):
    """Cheapest partition of the vertices into cycles of length >= 3."""
    n = inst.n
    if n > limits.max_n_two_factor:
        raise OracleLimitError(f"n={n} exceeds max_n_two_factor={limits.max_n_two_factor}")
    cost, order = cheapest_cycle_table(inst.weights)
    full = (1 << n) - 1
    best = {0: (0.0, None)}

    def solve_mask(mask):
        if mask in best:
            return best[mask][0]
        res = (float("inf"), None)
        for block in _submasks_with_low(mask):
            if cost[block] == float("inf"):
                continue
            c = cost[block] + solve_mask(mask ^ block)
            if c < res[0]:
                res = (c, block)
        best[mask] = res
        return res[0]

    solve_mask(full)
    cycles = []
    mask = full
    while mask:
        block = best[mask][1]
        cycles.append(order[block])
        mask ^= block
    return CycleCover.from_cycles(inst, cycles)


def brute_hpmp(inst, p, limits=DEFAULT_LIMITS):
    """Exact optimum: cheapest partition into exactly ``p`` cycles."""
    n = inst.n
    if p < 1 or 3 * p > n:
        raise InfeasibleProblemError(f"p={p} is infeasible for n={n}")
    if n > limits.max_n_hpmp:
        raise OracleLimitError(f"n={n} exceeds max_n_hpmp={limits.max_n_hpmp}")
    cost, order = cheapest_cycle_table(inst.weights)
    inf = float("inf")
    memo = {}

    def solve_mask(mask, k):
        if k == 0:
            return (0.0, None) if mask == 0 else (inf, None)
        key = (mask, k)
        if key in memo:
            return memo[key]
        res = (inf, None)
        for block in _submasks_with_low(mask):
            if cost[block] == inf:
                continue
            c = cost[block] + solve_mask(mask ^ block, k - 1)[0]
            if c < res[0]:
                res = (c, block)
        memo[key] = res
        return res

    mask, k = (1 << n) - 1, p
    if solve_mask(mask, k)[0] == inf:
        raise InfeasibleProblemError(f"no cover by {p} cycles")
    cycles = []
    while k:
        block = solve_mask(mask, k)[1]
        cycles.append(order[block])
        mask ^= block
        k -= 1
    cover = CycleCover.from_cycles(inst, cycles)
    return HpmpSolution(cover.cycles, cover.weight)


def max_l_exhaustive(n):
    """Maximum of sum(part % 3) over partitions of n into parts >= 3."""
    if not 3 <= n <= 200:
        raise ValueError("need 3 <= n <= 200")
    best = [None] * (n + 1)
    best[0] = 0
    for total in range(3, n + 1):
        for part in range(3, total + 1):
            prev = best[total - part]
            if prev is not None:
                cand = prev + part % 3
                if best[total] is None or cand > best[total]:
                    best[total] = cand
    return best[n]
