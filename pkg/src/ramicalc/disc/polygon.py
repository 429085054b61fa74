"""Newton polygons, profiles and envelopes of monomials in log coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import EmptySupport
from ..lambda_calc import PiecewiseMonomial, build_piecewise, lower_envelope
from ..valuation import INF, LogValue, VCoord, fmt_rational
from .series import ValuedSeries


@dataclass(frozen=True)
class Segment:
    v_from: Fraction
    v_to: VCoord
    tag: object
    exponent: Fraction
    coeff_v: Fraction


def monomial_envelope(p: int, lines: Sequence[tuple], vmin: Fraction, vmax: VCoord = INF):
    """Max of monomials ``a_k r^(e_k)`` given as ``(e_k, v(a_k), tag_k)``.

    Returns the piecewise function and the list of segments (ascending v)
    labelled by the tag of the winning monomial.  Among equal lines the first
    one listed wins.
    """
    uniq: dict = {}
    for e, c, tag in lines:
        uniq.setdefault((Fraction(e), Fraction(c)), tag)
    keys = list(uniq)
    ends, winners = lower_envelope(keys, vmin, vmax)
    segs = []
    for (a, b), w in zip(zip(ends, ends[1:]), winners):
        e, c = keys[w]
        if segs and segs[-1].tag == uniq[keys[w]] and (segs[-1].exponent, segs[-1].coeff_v) == (e, c):
            segs[-1] = Segment(segs[-1].v_from, b, segs[-1].tag, e, c)
        else:
            segs.append(Segment(a, b, uniq[keys[w]], e, c))
    pw = build_piecewise(
        p,
        [segs[0].v_from, *[s.v_to for s in segs]],
        [(s.exponent, s.coeff_v) for s in segs],
    )
    return pw, segs


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points ``(i, v(f_i))``.

    ``edges`` holds ``(i0, i1, slope)``; ``-slope`` is the v-coordinate of
    the norm of the ``i1 - i0`` zeros on that edge.
    """

    vertices: tuple
    edges: tuple

    def to_json(self) -> dict:
        return {
            "vertices": [[i, fmt_rational(v)] for i, v in self.vertices],
            "edges": [
                {"from": i0, "to": i1, "slope": fmt_rational(s), "length": i1 - i0}
                for i0, i1, s in self.edges
            ],
        }


def newton_polygon(f: ValuedSeries) -> NewtonPolygon:
    pts = sorted(f.norms_v.items())
    if not pts:
        raise EmptySupport("no points")
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    edges = tuple(
        (i0, i1, (v1 - v0) / (i1 - i0)) for (i0, v0), (i1, v1) in zip(hull, hull[1:])
    )
    return NewtonPolygon(tuple(hull), edges)


@dataclass(frozen=True)
class Profile:
    """``rho -> max |f_i| rho^i`` on ``[0, R]``.

    ``dominating`` lists the dominating indices in increasing radius order and
    ``breaks`` the radii where consecutive ones trade places.
    """

    p: int
    pw: PiecewiseMonomial
    dominating: tuple
    breaks: tuple
    radius_v: Fraction

    @property
    def top_index(self) -> int:
        return self.dominating[-1]

    def dominance_intervals(self) -> list[tuple]:
        """``(index, v_lo, v_hi)`` with ``v_lo < v_hi``, top index first."""
        ends = [self.pw.vmin, *self.pw.cuts, self.pw.vmax]
        return [(i, a, b) for i, a, b in zip(reversed(self.dominating), ends, ends[1:])]

    def normalized(self) -> PiecewiseMonomial:
        """``x -> P(R x) / P(R)`` on ``[0, 1]``."""
        top = self.pw.eval_v(self.radius_v)
        ends = [Fraction(0), *[t - self.radius_v for t in self.pw.cuts], INF]
        pieces = [(e, c + e * self.radius_v - top) for e, c in self.pw.pieces]
        return build_piecewise(self.p, ends, pieces)

    def to_json(self) -> dict:
        return {
            "radius_v": fmt_rational(self.radius_v),
            "dominating": list(self.dominating),
            "breaks_v": [fmt_rational(b.v) for b in self.breaks],
            "function": self.pw.to_json(),
        }


def profile(f: ValuedSeries) -> Profile:
    lines = [(i, v, i) for i, v in f.norms_v.items() if i >= 1]
    if not lines:
        raise EmptySupport("no positive indices")
    pw, segs = monomial_envelope(f.p, lines, f.radius_v)
    dom = tuple(s.tag for s in reversed(segs))
    return Profile(f.p, pw, dom, tuple(pw.breaks), f.radius_v)


def zero_norms(poly: NewtonPolygon) -> list[tuple]:
    """``(v(zero), multiplicity)`` per edge."""
    return [(-s, i1 - i0) for i0, i1, s in poly.edges]


def value_at(f: ValuedSeries, rho: LogValue) -> LogValue:
    """``max |f_i| rho^i``."""
    return max((f.norm(i) * rho**i for i in f.support), default=LogValue.zero())
