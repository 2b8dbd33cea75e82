"""Problem instances: complete weighted graphs, generation and file I/O."""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._jit import jit
from .errors import InstanceParseError, InvalidInstanceError

__all__ = [
    "Instance",
    "euclidean_matrix",
    "generate_euclidean",
    "from_points",
    "from_matrix",
    "check_triangle_inequality",
    "load_instance",
    "save_instance",
    "dumps_instance",
    "loads_instance",
]

FORMAT_MAGIC = "HPMP-INSTANCE 1"


def euclidean_matrix(coords):
    coords = np.asarray(coords, dtype=np.float64)
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


@dataclass(frozen=True, eq=False)
class Instance:
    """Complete graph on ``n`` vertices with a symmetric weight matrix.

    ``coords`` is set for Euclidean instances, in which case ``weights`` is
    derived from it. ``seed`` records the generator seed and is not part of
    equality (the file format does not carry it).
    """

    name: str
    weights: np.ndarray
    coords: np.ndarray = None
    seed: int = field(default=None)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidInstanceError("weights must be a square matrix")
        if w.shape[0] < 3:
            raise InvalidInstanceError(f"n must be >= 3 (got {w.shape[0]})")
        if not np.all(np.isfinite(w)):
            raise InvalidInstanceError("weights must be finite")
        if np.any(w < 0):
            raise InvalidInstanceError("weights must be non-negative")
        if np.any(np.diag(w) != 0):
            raise InvalidInstanceError("diagonal must be zero")
        if not np.array_equal(w, w.T):
            raise InvalidInstanceError("weights must be symmetric")
        if not self.name or any(c.isspace() for c in self.name):
            raise InvalidInstanceError("name must be non-empty and contain no whitespace")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.coords is not None:
            c = np.array(self.coords, dtype=np.float64)
            if c.shape != (w.shape[0], 2) or not np.all(np.isfinite(c)):
                raise InvalidInstanceError("coords must be n finite (x, y) pairs")
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)

    @property
    def n(self):
        return self.weights.shape[0]

    @property
    def m(self):
        return self.n * (self.n - 1) // 2

    def w(self, i, j):
        return float(self.weights[i, j])

    def cycle_weight(self, cycle):
        cyc = np.asarray(cycle)
        return float(self.weights[cyc, np.roll(cyc, -1)].sum())

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        if (self.coords is None) != (other.coords is None):
            return False
        if self.coords is not None and not np.array_equal(self.coords, other.coords):
            return False
        return self.name == other.name and np.array_equal(self.weights, other.weights)

    __hash__ = None


def from_points(points, name="points", seed=None):
    coords = np.asarray(points, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise InvalidInstanceError("points must be an (n, 2) array")
    if coords.shape[0] < 3:
        raise InvalidInstanceError(f"n must be >= 3 (got {coords.shape[0]})")
    return Instance(name, euclidean_matrix(coords), coords, seed)


def from_matrix(matrix, name="matrix"):
    return Instance(name, matrix)


def generate_euclidean(n, seed, box=100.0, name=None):
    """Sample ``n`` points uniformly in ``[0, box]^2``.

    Uses numpy's PCG64 bit generator seeded through ``SeedSequence(seed)``,
    so the output depends only on ``(n, seed, box)``.
    """
    if n < 3:
        raise InvalidInstanceError(f"n must be >= 3 (got {n})")
    if not box > 0 or not math.isfinite(box):
        raise InvalidInstanceError("box must be positive and finite")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    coords = rng.uniform(0.0, box, size=(n, 2))
    if name is None:
        name = f"euclid-n{n}-s{seed}"
    return from_points(coords, name=name, seed=seed)


def _max_triangle_violation_np(w):
    worst = -np.inf
    for j in range(w.shape[0]):
        worst = max(worst, float(np.max(w - w[:, j, None] - w[None, j, :])))
    return worst


@jit(fallback=_max_triangle_violation_np)
def _max_triangle_violation(w):
    n = w.shape[0]
    worst = -np.inf
    for j in range(n):
        for i in range(n):
            wij = w[i, j]
            for k in range(n):
                d = w[i, k] - wij - w[j, k]
                if d > worst:
                    worst = d
    return worst


def max_triangle_violation(inst):
    """Largest ``w[i,k] - w[i,j] - w[j,k]`` over all triples."""
    return float(_max_triangle_violation(inst.weights))


def check_triangle_inequality(inst, eps=1e-9):
    return max_triangle_violation(inst) <= eps


# --- file format -----------------------------------------------------------

def dumps_instance(inst):
    lines = [FORMAT_MAGIC, f"NAME {inst.name}", f"N {inst.n}"]
    if inst.coords is not None:
        lines.append("COORDS")
        lines.extend(f"{x!r} {y!r}" for x, y in inst.coords.tolist())
    else:
        lines.append("MATRIX")
        lines.extend(" ".join(repr(x) for x in row) for row in inst.weights.tolist())
    lines.append("END")
    return "\n".join(lines) + "\n"


def save_instance(inst, path):
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


def _parse_floats(text, lineno, count):
    parts = text.split()
    if len(parts) != count:
        raise InstanceParseError(f"expected {count} numbers, found {len(parts)}", lineno)
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise InstanceParseError(f"bad number in {text!r}", lineno) from None
    if not all(math.isfinite(x) for x in vals):
        raise InstanceParseError("non-finite number", lineno)
    return vals


def _expect_keyword(lines, idx, key):
    if idx >= len(lines):
        raise InstanceParseError(f"unexpected end of file, expected {key}", idx + 1)
    parts = lines[idx].split()
    if len(parts) != 2 or parts[0] != key:
        raise InstanceParseError(f"expected '{key} <value>'", idx + 1)
    return parts[1]


def loads_instance(text):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != FORMAT_MAGIC:
        raise InstanceParseError(f"missing header '{FORMAT_MAGIC}'", 1)
    name = _expect_keyword(lines, 1, "NAME")
    n_text = _expect_keyword(lines, 2, "N")
    try:
        n = int(n_text)
    except ValueError:
        raise InstanceParseError(f"bad vertex count {n_text!r}", 3) from None
    if n < 3:
        raise InstanceParseError(f"n must be >= 3 (got {n})", 3)
    if len(lines) < 4:
        raise InstanceParseError("unexpected end of file, expected COORDS or MATRIX", 4)
    kind = lines[3].strip()
    if kind not in ("COORDS", "MATRIX"):
        raise InstanceParseError("expected COORDS or MATRIX", 4)
    width = 2 if kind == "COORDS" else n

    rows = []
    idx = 4
    while idx < len(lines) and lines[idx].strip() != "END":
        if len(rows) == n:
            raise InstanceParseError(f"more than {n} data lines", idx + 1)
        rows.append(_parse_floats(lines[idx], idx + 1, width))
        idx += 1
    if idx >= len(lines):
        raise InstanceParseError("missing END", idx + 1)
    if len(rows) != n:
        raise InstanceParseError(f"expected {n} data lines, found {len(rows)}", idx + 1)
    if idx != len(lines) - 1:
        raise InstanceParseError("trailing content after END", idx + 2)

    data = np.array(rows, dtype=np.float64)
    if kind == "COORDS":
        return from_points(data, name=name)
    for i in range(n):
        if data[i, i] != 0:
            raise InstanceParseError(f"nonzero diagonal entry at column {i + 1}", 5 + i)
        for j in range(i):
            if data[i, j] != data[j, i]:
                raise InstanceParseError(
                    f"matrix not symmetric: entry ({i + 1},{j + 1}) differs from "
                    f"({j + 1},{i + 1})", 5 + i)
    try:
        return from_matrix(data, name=name)
    except InvalidInstanceError as exc:
        raise InstanceParseError(str(exc)) from None


def load_instance(path):
    return loads_instance(Path(path).read_text(encoding="utf-8"))
