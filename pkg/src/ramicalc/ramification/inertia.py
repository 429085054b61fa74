"""Inertia functions on finite groups and the ramification filtration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import (
    InvalidInertia,
    NonMonotoneValues,
    NotASubgroup,
    PGroupViolation,
)
from ..valuation import INF, LogValue, as_prime, fmt_rational, is_power_of
from .groups import FiniteGroup, Subgroup


@dataclass(frozen=True)
class InertiaFunction:
    """``values[k]`` is ``i(sigma_k)`` for the element with index ``k``."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "values", tuple(x if isinstance(x, LogValue) else LogValue(x) for x in self.values)
        )

    def __getitem__(self, k: int) -> LogValue:
        return self.values[k]

    def restrict(self, h: Subgroup) -> list[LogValue]:
        return [self.values[k] for k in h.members()]

    def to_json(self) -> dict:
        return {"values_v": [fmt_rational(x.v) for x in self.values]}


def validate_inertia(g: FiniteGroup, inertia: InertiaFunction) -> dict:
    """Exhaustive check of the admissibility axioms; never raises on bad data."""
    vals = inertia.values
    violations: list[dict] = []
    one = LogValue.one()

    def bad(axiom, **where):
        violations.append({"axiom": axiom, **where})

    if len(vals) != g.order:
        bad("length", expected=g.order, got=len(vals))
        return {"valid": False, "violations": violations}
    for s, x in enumerate(vals):
        if x > one:
            bad("range", element=s)
        if s == g.identity and not x.is_zero:
            bad("identity", element=s)
        if s != g.identity and x.is_zero:
            bad("positive", element=s)
        if vals[g.inverse[s]] != x:
            bad("inverse", element=s)
    for s in range(g.order):
        for t in range(g.order):
            if vals[g.mul(s, t)] > max(vals[s], vals[t]):
                bad("ultrametric", pair=[s, t])
            if vals[g.conj(t, s)] != vals[s]:
                bad("conjugation", pair=[s, t])
    return {"valid": not violations, "violations": violations}


def require_valid(g: FiniteGroup, inertia: InertiaFunction) -> None:
    rep = validate_inertia(g, inertia)
    if not rep["valid"]:
        first = rep["violations"][0]
        raise InvalidInertia(f"inertia axiom '{first['axiom']}' fails: {first}")


def ramification_filtration(g: FiniteGroup, inertia: InertiaFunction, p) -> list[tuple[LogValue, Subgroup]]:
    """``[(r_0 = 0, G_0), ..., (r_n, G_{r_n})]`` with ``G_r = {s : i(s) <= r}``.

    Groups below value 1 must be p-groups.
    """
    p = as_prime(p)
    require_valid(g, inertia)
    levels = sorted(set(inertia.values))
    out = []
    for r in levels:
        sub = Subgroup(sum(1 << k for k, x in enumerate(inertia.values) if x <= r))
        if r < LogValue.one() and not is_power_of(sub.order, p):
            raise PGroupViolation(
                f"|G_r| = {sub.order} at r with v={fmt_rational(r.v)} is not a power of {p}"
            )
        out.append((r, sub))
    return out


def make_filtration_inertia(
    g: FiniteGroup, chain: Sequence[Subgroup], values: Sequence[LogValue]
) -> InertiaFunction:
    """Inertia that is constant ``values[j-1]`` on ``chain[j] minus chain[j-1]``."""
    chain = list(chain)
    values = [x if isinstance(x, LogValue) else LogValue(x) for x in values]
    if not chain or chain[0].bits != g.trivial.bits or chain[-1].bits != g.whole.bits:
        raise NotASubgroup("chain must run from the trivial group to G")
    for h in chain:
        g.from_bits(h.bits)
        g.require_normal(h)
    if any(not a < b for a, b in zip(chain, chain[1:])):
        raise NotASubgroup("chain must be strictly increasing")
    if len(values) != len(chain) - 1:
        raise NonMonotoneValues("need one value per step of the chain")
    if any(not a < b for a, b in zip(values, values[1:])):
        raise NonMonotoneValues("values must be strictly increasing")
    if values and (values[0].is_zero or values[-1] > LogValue.one()):
        raise NonMonotoneValues("values must lie in (0, 1]")
    out: list[LogValue] = [LogValue.zero()] * g.order
    for lower, upper, val in zip(chain, chain[1:], values):
        for k in Subgroup(upper.bits & ~lower.bits).members():
            out[k] = val
    return InertiaFunction(tuple(out))


def inertia_from_v(vs: Sequence) -> InertiaFunction:
    return InertiaFunction(tuple(LogValue(INF if v == INF else Fraction(v)) for v in vs))
