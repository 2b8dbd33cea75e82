"""Hamiltonian p-median approximation: minimum-weight 2-factors via a
matching gadget, a three-branch approximation with ratio guarantees, exact
brute-force oracles and a benchmark CLI."""

from ._jit import NUMBA_ENABLED, backend_name
from .approx import (
    HpmpSolution,
    RunReport,
    WorkingMultigraph,
    eulerian_shortcut,
    feasibility_threshold,
    l_value,
    max_l_partition,
    merge_branch,
    mst_forest,
    solve,
    split_branch,
)
from .errors import (
    AlgorithmInapplicableError,
    HpmpError,
    InfeasibleProblemError,
    InstanceParseError,
    InternalInvariantError,
    InvalidInstanceError,
    NoPerfectMatchingError,
    OracleLimitError,
)
from .instance import (
    Instance,
    check_triangle_inequality,
    from_matrix,
    from_points,
    generate_euclidean,
    load_instance,
    save_instance,
)
from .matching import GeneralGraph, PerfectMatching, min_weight_perfect_matching
from .twofactor import CycleCover, GadgetGraph, build_gadget, min_weight_two_factor

__version__ = "0.1.0"
