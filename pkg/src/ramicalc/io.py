"""JSON document parsing for the command-line front-end."""

from __future__ import annotations

import os
from typing import Any

from .disc.series import ValuedSeries
from .errors import SchemaError
from .lambda_calc import LambdaP, PiecewiseMonomial, make_lambda, piecewise_from_json
from .annuli import AnnulusMorphism
from .ramification.groups import (
    FiniteGroup,
    Subgroup,
    alternating,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    symmetric,
)
from .ramification.inertia import InertiaFunction, inertia_from_v, make_filtration_inertia
from .valuation import LogValue, as_prime, as_rational, as_vcoord

ENV_PRIME = "RAMICALC_P"


def default_prime() -> int | None:
    raw = os.environ.get(ENV_PRIME)
    if raw is None or raw.strip() == "":
        return None
    try:
        return as_prime(int(raw))
    except ValueError as exc:
        raise SchemaError(f"{ENV_PRIME}={raw!r} is not a prime") from exc


def require_object(doc: Any, what: str) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError(f"{what} must be a JSON object")
    return doc


def get_prime(doc: dict) -> int:
    p = doc.get("p", default_prime())
    if p is None:
        raise SchemaError(f"no prime given: set 'p' or {ENV_PRIME}")
    if isinstance(p, bool) or not isinstance(p, int):
        raise SchemaError(f"'p' must be an integer, got {p!r}")
    return as_prime(p)


def _list(doc: dict, key: str) -> list:
    val = doc.get(key)
    if not isinstance(val, list):
        raise SchemaError(f"'{key}' must be a list")
    return val


def parse_scalar(x) -> LogValue:
    """``{"v": ...}``, ``{"value_exp": ...}`` or a bare v-coordinate."""
    if isinstance(x, dict):
        return LogValue.from_json(x)
    return LogValue(as_vcoord(x))


def parse_lambda(doc: Any) -> LambdaP:
    doc = require_object(doc, "Lambda_p function")
    p = get_prime(doc)
    alphas = _list(doc, "alphas")
    if any(isinstance(a, bool) or not isinstance(a, int) for a in alphas):
        raise SchemaError("'alphas' must be integers")
    if "breaks" in doc:
        breaks = [parse_scalar(b) for b in _list(doc, "breaks")]
        # value-ascending, matching the breaks_v order
        return make_lambda(p, breaks, alphas)
    return make_lambda(p, [as_rational(b) for b in _list(doc, "breaks_v")], alphas)


def parse_function(doc: Any) -> LambdaP | PiecewiseMonomial:
    doc = require_object(doc, "function")
    if "pieces" in doc:
        if "p" not in doc and default_prime() is not None:
            doc = {**doc, "p": default_prime()}
        return piecewise_from_json(doc)
    return parse_lambda(doc)


def parse_series(doc: Any, laurent: bool = False) -> ValuedSeries:
    doc = require_object(doc, "series")
    p = get_prime(doc)
    return ValuedSeries.from_json({**doc, "p": p}, laurent=laurent)


def parse_annulus(doc: Any) -> AnnulusMorphism:
    """``{"series": ..., "inner_v": "1/4", "outward": false}``; no ``inner_v`` means near the boundary."""
    doc = require_object(doc, "annulus")
    series = parse_series(doc.get("series"), laurent=True)
    outward = doc.get("outward", False)
    if not isinstance(outward, bool):
        raise SchemaError("'outward' must be true or false")
    if "inner_v" not in doc:
        return AnnulusMorphism.near_boundary(series, outward)
    return AnnulusMorphism(series, as_vcoord(doc["inner_v"]), outward)


def _int(doc: dict, key: str, lo: int = 1) -> int:
    val = doc.get(key)
    if isinstance(val, bool) or not isinstance(val, int) or val < lo:
        raise SchemaError(f"'{key}' must be an integer >= {lo}")
    return val


CONSTRUCTORS = {
    "cyclic": lambda d: cyclic(_int(d, "n")),
    "dihedral": lambda d: dihedral(_int(d, "m", 2)),
    "dicyclic": lambda d: dicyclic(_int(d, "n", 2)),
    "symmetric": lambda d: symmetric(_int(d, "n")),
    "alternating": lambda d: alternating(_int(d, "n", 3)),
    "elementary_abelian": lambda d: elementary_abelian(as_prime(_int(d, "p", 2)), _int(d, "k")),
}


def parse_group(doc: Any) -> FiniteGroup:
    doc = require_object(doc, "group")
    if "table" in doc:
        table = doc["table"]
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise SchemaError("'table' must be a list of rows")
        if any(isinstance(x, bool) or not isinstance(x, int) for r in table for x in r):
            raise SchemaError("table entries must be integers")
        return FiniteGroup(tuple(tuple(r) for r in table), doc.get("name", ""))
    kind = doc.get("construct")
    if kind == "direct_product":
        factors = _list(doc, "factors")
        if not factors:
            raise SchemaError("'factors' must not be empty")
        out = parse_group(factors[0])
        for h in factors[1:]:
            out = direct_product(out, parse_group(h))
        return out
    if kind not in CONSTRUCTORS:
        raise SchemaError(f"unknown group constructor {kind!r}")
    return CONSTRUCTORS[kind](doc)


def parse_subgroup(g: FiniteGroup, bits) -> Subgroup:
    if isinstance(bits, bool) or not isinstance(bits, int) or bits <= 0:
        raise SchemaError("subgroups are given as positive bitmasks over element indices")
    return g.from_bits(bits)


def parse_inertia(g: FiniteGroup, doc: Any) -> InertiaFunction:
    doc = require_object(doc, "inertia")
    if "chain" in doc:
        chain = [parse_subgroup(g, b) for b in _list(doc, "chain")]
        values = [parse_scalar(v) for v in _list(doc, "values_v")]
        return make_filtration_inertia(g, chain, values)
    vals = _list(doc, "values_v")
    if len(vals) != g.order:
        raise SchemaError(f"need {g.order} per-element values, got {len(vals)}")
    return inertia_from_v([as_vcoord(v) for v in vals])
