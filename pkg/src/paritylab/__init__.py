"""Exact 2-adic tools for the 3x+1 map, its parity sequences and the
conjugacy Q between them."""

from .padic import (
    DyadicRational,
    EventuallyPeriodicBits,
    TruncatedPadic,
    format_rational,
    odd_rational,
    padic_norm,
    periodic_expansion,
    rational_from_periodic,
    residue,
    valuation,
)
from .collatz import detect_orbit_cycle, parity_vector, shift_step, t_step, u_step
from .transform import (
    CongruenceClass,
    invariant_sum,
    inverse_2adic,
    invert_v1,
    invert_v2,
    qinv_exact_rational,
)
from .qmap import (
    check_functional_equations,
    q_exact,
    q_inverse_exact,
    q_iterate,
    q_mod,
    q_mod_array,
    qinv_mod,
)
from .cycles import (
    QTower,
    build_qn,
    cycle_decomposition,
    enumerate_ergodic_sets,
    is_ever_doubling,
    measure_summary,
    permutation_order,
)
from .search import SearchConfig, fixed_point_locality, verify_known_cycles
from .embedding import (
    box_cover,
    box_counting_stats,
    check_self_affine,
    embed_point,
    generate_arrays,
    generate_set,
    interval_family,
    monna,
    monna_exact,
    rational_points,
    symmetry_report,
)

__version__ = "0.1.0"

__all__ = [
    "CongruenceClass",
    "DyadicRational",
    "EventuallyPeriodicBits",
    "QTower",
    "SearchConfig",
    "TruncatedPadic",
    "box_counting_stats",
    "box_cover",
    "build_qn",
    "check_functional_equations",
    "check_self_affine",
    "cycle_decomposition",
    "detect_orbit_cycle",
    "embed_point",
    "enumerate_ergodic_sets",
    "fixed_point_locality",
    "format_rational",
    "generate_arrays",
    "generate_set",
    "interval_family",
    "invariant_sum",
    "inverse_2adic",
    "invert_v1",
    "invert_v2",
    "is_ever_doubling",
    "measure_summary",
    "monna",
    "monna_exact",
    "odd_rational",
    "padic_norm",
    "parity_vector",
    "periodic_expansion",
    "permutation_order",
    "q_exact",
    "q_inverse_exact",
    "q_iterate",
    "q_mod",
    "q_mod_array",
    "qinv_exact_rational",
    "qinv_mod",
    "rational_from_periodic",
    "rational_points",
    "residue",
    "shift_step",
    "symmetry_report",
    "t_step",
    "u_step",
    "valuation",
    "verify_known_cycles",
]
