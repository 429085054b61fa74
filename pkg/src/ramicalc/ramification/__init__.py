"""Finite groups with inertia: filtrations, Herbrand functions, towers."""

from .catalog import groups_of_order, order_24_samples, small_groups
from .groups import (
    FiniteGroup,
    Subgroup,
    alternating,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    permutation_group,
    semidirect_cyclic,
    symmetric,
)
from .herbrand import herbrand_degree_check, herbrand_from_values, herbrand_galois, herbrand_of_subgroup, herbrand_relative
from .inertia import (
    InertiaFunction,
    make_filtration_inertia,
    ramification_filtration,
    validate_inertia,
)
from .tower import Tower, canonical_tower, enumerate_towers, verify_tower

__all__ = [
    "FiniteGroup",
    "InertiaFunction",
    "Subgroup",
    "Tower",
    "alternating",
    "canonical_tower",
    "cyclic",
    "dicyclic",
    "dihedral",
    "direct_product",
    "elementary_abelian",
    "enumerate_towers",
    "groups_of_order",
    "herbrand_degree_check",
    "herbrand_from_values",
    "herbrand_galois",
    "herbrand_of_subgroup",
    "herbrand_relative",
    "make_filtration_inertia",
    "order_24_samples",
    "permutation_group",
    "ramification_filtration",
    "semidirect_cyclic",
    "small_groups",
    "symmetric",
    "validate_inertia",
    "verify_tower",
]
