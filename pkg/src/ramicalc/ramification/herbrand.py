"""Herbrand functions of inertia groups and of subgroups."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from ..errors import NotASubgroup
from ..lambda_calc import LambdaP, PiecewisePower, compose, interior_point, invert
from ..valuation import INF, LogValue, as_prime, fmt_rational
from .groups import FiniteGroup, Subgroup
from .inertia import InertiaFunction, ramification_filtration


def herbrand_from_values(p: int, values: Iterable[LogValue]) -> LambdaP:
    """``r -> prod max(r, x)`` over the multiset ``values``.

    In v-coordinates this is ``v -> sum min(v, v_x)``.
    """
    vs = [x.v for x in values]
    finite = sorted({v for v in vs if v != INF and v > 0})
    ends = [Fraction(0), *finite, INF]
    pieces = []
    for a, b in zip(ends, ends[1:]):
        e = sum(1 for v in vs if v >= b)
        c = sum((v for v in vs if v <= a), Fraction(0))
        pieces.append((e, c))
    return LambdaP.from_pw(PiecewisePower._from_ends(p, ends, pieces))


def herbrand_galois(g: FiniteGroup, inertia: InertiaFunction, p) -> LambdaP:
    p = as_prime(p)
    ramification_filtration(g, inertia, p)
    return herbrand_from_values(p, inertia.values)


def herbrand_of_subgroup(g: FiniteGroup, inertia: InertiaFunction, h: Subgroup, p) -> LambdaP:
    """Herbrand function of ``h`` with the restricted inertia."""
    g.from_bits(h.bits)
    return herbrand_from_values(as_prime(p), inertia.restrict(h))


def herbrand_relative(
    g: FiniteGroup,
    inertia: InertiaFunction,
    h: Subgroup,
    p,
    over: Subgroup | None = None,
) -> LambdaP:
    """``H_over o H_h^-1``; ``over`` defaults to the whole group."""
    p = as_prime(p)
    ramification_filtration(g, inertia, p)
    top = g.whole if over is None else g.from_bits(over.bits)
    g.from_bits(h.bits)
    if not h <= top:
        raise NotASubgroup("h is not contained in the ambient subgroup")
    big = herbrand_of_subgroup(g, inertia, top, p)
    small = herbrand_of_subgroup(g, inertia, h, p)
    return LambdaP.from_pw(compose(big, invert(small)))


def herbrand_degree_check(g: FiniteGroup, inertia: InertiaFunction, p, h: Subgroup | None = None) -> dict:
    """Local degree of each piece equals ``|G_r|`` for ``r`` inside the piece."""
    h = g.whole if h is None else h
    f = herbrand_of_subgroup(g, inertia, h, p)
    vs = [x.v for x in inertia.restrict(h)]
    rows = []
    for a, b, e, _ in f.pw.intervals():
        mid = interior_point(a, b)
        order = sum(1 for v in vs if v >= mid)
        rows.append({"v_from": fmt_rational(a), "v_to": fmt_rational(b), "degree": int(e), "group_order": order})
    return {"pass": all(r["degree"] == r["group_order"] for r in rows), "pieces": rows}
