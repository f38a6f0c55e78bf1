"""Sets of cross numbers of zero-sum free and minimal zero-sum sequences over small finite abelian groups."""

from .groups import (
    FiniteAbelianGroup,
    cyclic,
    direct_sum,
    element_order,
    group_stats,
    normalize_factors,
    parse_group,
    prime_divide,
    subgroups,
    valuation,
)
from .search import (
    ENGINE_VERSION,
    Budget,
    PartialResultError,
    SearchResult,
    enumerate_sets,
    enumerate_subgroup_profiles,
    eta,
    membership,
)
from .sequences import CrossSet, CrossValue, Sequence, format_sequence, parse_sequence

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "CrossSet",
    "CrossValue",
    "ENGINE_VERSION",
    "FiniteAbelianGroup",
    "PartialResultError",
    "SearchResult",
    "Sequence",
    "cyclic",
    "direct_sum",
    "element_order",
    "enumerate_sets",
    "enumerate_subgroup_profiles",
    "eta",
    "format_sequence",
    "group_stats",
    "membership",
    "normalize_factors",
    "parse_group",
    "parse_sequence",
    "prime_divide",
    "subgroups",
    "valuation",
]
