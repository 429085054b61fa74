"""Disc morphisms given by finitely supported series."""

from .factorization import compose_factors, verify_disc_factorization
from .polygon import NewtonPolygon, Profile, monomial_envelope, newton_polygon, profile
from .radiality import (
    RadialityCertificate,
    classify_radiality,
    radial_arithmetic_check,
    recentered_profile_matches,
    verify_witness,
)
from .recenter import (
    derivative_coefficient,
    disc_degree,
    generic_norm_function,
    generic_norms,
    profile_at_point,
    residual_degrees,
    restrict_profile,
    taylor_recenter,
)
from .series import ValuedSeries, compose_series, poly_compose

__all__ = [
    "NewtonPolygon",
    "Profile",
    "RadialityCertificate",
    "ValuedSeries",
    "classify_radiality",
    "compose_factors",
    "compose_series",
    "derivative_coefficient",
    "disc_degree",
    "generic_norm_function",
    "generic_norms",
    "monomial_envelope",
    "newton_polygon",
    "poly_compose",
    "profile",
    "profile_at_point",
    "radial_arithmetic_check",
    "recentered_profile_matches",
    "residual_degrees",
    "restrict_profile",
    "taylor_recenter",
    "verify_disc_factorization",
    "verify_witness",
]
