"""Annulus morphisms, break flows and harmonicity at the Gauss point.

Radii on an annulus are parametrized by ``t = v(rho)``, so ``t -> 0`` means
``rho -> 1``.  Inward annuli ``{r_1 < |u| < 1}`` have T-radius ``v = t``;
the direction at infinity is the outward annulus ``{1 < |T| < 1/r_1}`` with
T-radius ``v = -t`` and ``rho = 1/|T|``.  A monomial ``a * rho^e`` in ``rho``
is the affine map ``t -> e*t + v(a)``.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .disc.recenter import profile_at_point, recentered_coeffs
from .disc.series import ValuedSeries, poly_compose
from .errors import (
    EmptyData,
    IdentityViolation,
    MultipleSlopesOnAnnulus,
    NoStableWindow,
    NonFiniteAtGaussPoint,
    NotFinite,
    NotInLambdaP,
    NotOnUnitCircle,
    SchemaError,
    SkeletonModeUnsupported,
    UnresolvedDirections,
)
from .lambda_calc import (
    PiecewiseMonomial,
    build_piecewise,
    lower_envelope,
    pw_equals,
)
from .valuation import INF, LogValue, binomial_valuation, fmt_rational, is_power_of, padic_valuation

DEFAULT_WINDOW = Fraction(1)
PLUS, MINUS = "plus", "minus"


@dataclass(frozen=True)
class AnnulusMorphism:
    """A Laurent series on ``{r_1 < |u| < 1}`` (or the outward annulus).

    ``inner_v = v(r_1) > 0``.
    """

    series: ValuedSeries
    inner_v: Fraction
    outward: bool = False

    def __post_init__(self):
        iv = self.inner_v if self.inner_v == INF else Fraction(self.inner_v)
        if not iv > 0:
            raise SchemaError("inner radius must be < 1")
        object.__setattr__(self, "inner_v", iv)

    @property
    def sign(self) -> int:
        return -1 if self.outward else 1

    @property
    def p(self) -> int:
        return self.series.p

    @classmethod
    def near_boundary(cls, series: ValuedSeries, outward: bool = False) -> AnnulusMorphism:
        """The widest annulus below the first crossing of the series or its derivative."""
        s = -1 if outward else 1
        first = min(
            _first_crossing(series.norms_v, s),
            _first_crossing(_derivative_norms(series), s),
        )
        return cls(series, DEFAULT_WINDOW if first == INF else first, outward)


def _derivative_norms(f: ValuedSeries) -> dict:
    return {k - 1: v + padic_valuation(k, f.p) for k, v in f.norms_v.items() if k != 0}


def _first_crossing(norms: dict, sign: int):
    best = INF
    for (i, a), (k, b) in itertools.combinations(norms.items(), 2):
        t = (b - a) / (sign * (i - k))
        if t > 0:
            best = min(best, t)
    return best


def _dominant(norms: dict, sign: int, inner_v) -> int:
    """The single index ``i`` minimizing ``v_i + i*sign*t`` on ``(0, inner_v)``."""
    keys = list(norms)
    lines = [(Fraction(i * sign), Fraction(norms[i])) for i in keys]
    ends, winners = lower_envelope(lines, Fraction(0), inner_v)
    tags = [keys[w] for w in winners]
    if len(set(tags)) != 1:
        cuts = ", ".join(fmt_rational(e) for e in ends[1:-1])
        raise MultipleSlopesOnAnnulus(f"dominant term changes at v = {cuts}; shrink the annulus")
    return tags[0]


def annulus_degree(a: AnnulusMorphism) -> int:
    d = _dominant(a.series.norms_v, a.sign, a.inner_v)
    if d <= 0:
        raise NotFinite("dominant index is not positive; the morphism is not aligned")
    return d


def sigma_epsilon(a: AnnulusMorphism) -> tuple[int, LogValue]:
    """``(sigma, |epsilon|)`` with ``dS/dT = epsilon T^sigma (1 + h)``.

    Outward annuli are read in the coordinates ``1/T`` and ``1/S``.
    """
    der = _derivative_norms(a.series)
    m = _dominant(der, a.sign, a.inner_v)
    if not a.outward:
        return m, LogValue(der[m])
    d = annulus_degree(a)
    e = m + 1
    return 2 * d - e - 1, LogValue(der[m] - 2 * a.series.norm_v(d))


def sigma_composition_check(f: ValuedSeries, g: ValuedSeries) -> dict:
    """``sigma(g o f) = deg(f) sigma(g) + sigma(f)`` on boundary annuli."""
    f.require_exact()
    g.require_exact()
    gf = ValuedSeries.exact(f.p, poly_compose(g.coeffs, f.coeffs))
    af, ag, agf = (AnnulusMorphism.near_boundary(x) for x in (f, g, gf))
    sf, sg, sgf = sigma_epsilon(af)[0], sigma_epsilon(ag)[0], sigma_epsilon(agf)[0]
    d = annulus_degree(af)
    rhs = d * sg + sf
    return {
        "pass": sgf == rhs,
        "sigma_composite": sgf,
        "deg_f": d,
        "sigma_f": sf,
        "sigma_g": sg,
        "rhs": rhs,
    }


# ---------------------------------------------------------------- flows


def _flow_terms(f: ValuedSeries) -> list[tuple]:
    """``(i, k, c)``: the monomial ``c + k*sign*t + i*y`` of the i-th generic norm."""
    norms = f.norms_v
    if min(norms) < 1:
        raise SchemaError("break flows need a series with indices >= 1")
    return [
        (i, k, binomial_valuation(k, i, f.p) + v)
        for i in range(1, f.degree + 1)
        for k, v in norms.items()
        if k >= i
    ]


def _flow_events(terms, sign: int, t_max) -> list[Fraction]:
    ev = set()
    for (i1, k1, c1), (i2, k2, c2) in itertools.combinations(terms, 2):
        if k1 != k2:
            # a kink of N_i, or two lines meeting on the top boundary y = 0
            ev.add((c2 - c1) / (sign * (k1 - k2)))
    for (i1, k1, c1), (i2, k2, c2), (i3, k3, c3) in itertools.combinations(terms, 3):
        if len({i1, i2, i3}) < 3:
            continue
        det = (k1 - k2) * (i1 - i3) - (i1 - i2) * (k1 - k3)
        if not det:
            continue
        st = ((c2 - c1) * (i1 - i3) - (i1 - i2) * (c3 - c1)) / det
        y = ((k1 - k2) * (c3 - c1) - (k1 - k3) * (c2 - c1)) / det
        if y > 0:
            ev.add(st / sign)
    return sorted(e for e in ev if 0 < e < t_max)


def _structure(terms, sign: int, t: Fraction):
    """Dominating indices (top of the profile first) and their active terms at ``t``."""
    best: dict = {}
    for i, k, c in terms:
        val = c + k * sign * t
        if i not in best or val < best[i][1]:
            best[i] = (k, val, c)
    idx = sorted(best)
    lines = [(Fraction(i), best[i][1]) for i in idx]
    ends, winners = lower_envelope(lines, Fraction(0), INF)
    tags = []
    for w in winners:
        if not tags or tags[-1] != idx[w]:
            tags.append(idx[w])
    return tags, {i: best[i] for i in tags}


@dataclass(frozen=True)
class FlowData:
    window_v: Fraction
    flows: tuple  # b_1 < ... < b_n in value, PiecewiseMonomial in t on [0, window]
    degrees: tuple  # local degrees near rho -> 1, increasing
    segments: tuple  # (t_from, t_to, degrees) per piece of constant structure

    def __len__(self) -> int:
        return len(self.flows)

    def __iter__(self):
        return iter(self.flows)

    def __getitem__(self, k):
        return self.flows[k]


def break_flows(a: AnnulusMorphism) -> FlowData:
    """Normalized break-points of the local profile as functions of ``rho``."""
    f, s = a.series, a.sign
    terms = _flow_terms(f)
    cap = a.inner_v if a.inner_v != INF else DEFAULT_WINDOW
    ev = _flow_events(terms, s, cap)
    pts = [Fraction(0), *ev, cap]
    segs = []
    first_char = None
    for lo, hi in zip(pts, pts[1:]):
        tags, active = _structure(terms, s, (lo + hi) / 2)
        if first_char is None:
            first_char = len(tags)
            degs = list(reversed(tags))
            if degs[0] != 1 or any(not is_power_of(d, f.p) for d in degs) or degs != sorted(set(degs)):
                raise NoStableWindow(f"local profile near the boundary has degrees {degs}")
        elif len(tags) != first_char:
            break
        segs.append((lo, hi, tags, active))
    window = segs[-1][1]
    n = first_char - 1
    pieces: list[list] = [[] for _ in range(n)]
    for lo, hi, tags, active in segs:
        # consecutive dominating lines, from the top (y = 0) downwards
        ys = []
        for i, i2 in zip(tags, tags[1:]):
            k, _, c = active[i]
            k2, _, c2 = active[i2]
            ys.append((Fraction(s * (k2 - k), i - i2), (c2 - c) / (i - i2)))
        for j, piece in enumerate(reversed(ys)):
            pieces[j].append(piece)
    ends = [segs[0][0], *[sg[1] for sg in segs]]
    flows = tuple(build_piecewise(f.p, ends, pc) for pc in pieces)
    seg_meta = tuple((lo, hi, tuple(reversed(tags))) for lo, hi, tags, _ in segs)
    return FlowData(window, flows, seg_meta[0][2], seg_meta)


def boundary_slope(h: PiecewiseMonomial) -> Fraction:
    """``lim d log h / d log rho`` as ``rho -> 1``: the exponent of the piece at ``t = 0``."""
    return h.pieces[0][0]


def flow_limit_v(h: PiecewiseMonomial) -> Fraction:
    return h.eval_v(h.vmin)


def different_identity_check(a: AnnulusMorphism, strict: bool = False) -> dict:
    """``|eps| rho^(sigma - d + 1) = prod b_j(rho)^(deg_j - deg_(j-1))`` on the flow window."""
    d = annulus_degree(a)
    sigma, eps = sigma_epsilon(a)
    fd = break_flows(a)
    w = fd.window_v
    lhs = build_piecewise(a.p, [Fraction(0), w], [(Fraction(sigma - d + 1), eps.v)])
    ends = [Fraction(0)]
    pieces = []
    for lo, hi, degs in fd.segments:
        e = c = Fraction(0)
        for j, flow in enumerate(fd.flows):
            weight = degs[j + 1] - degs[j]
            fe, fc = flow.piece_at((lo + hi) / 2)
            e += weight * fe
            c += weight * fc
        ends.append(hi)
        pieces.append((e, c))
    rhs = build_piecewise(a.p, ends, pieces)
    ok = pw_equals(lhs, rhs)
    slope_sum = sum(
        (fd.degrees[j + 1] - fd.degrees[j]) * boundary_slope(h) for j, h in enumerate(fd.flows)
    )
    report = {
        "pass": ok and slope_sum == sigma - d + 1,
        "exact_identity": ok,
        "slope_identity": slope_sum == sigma - d + 1,
        "window_v": fmt_rational(w),
        "d": d,
        "sigma": sigma,
        "eps_v": fmt_rational(eps.v),
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
    }
    if strict and not report["pass"]:
        bad = next(
            (p for p in rhs.pieces if p not in lhs.pieces),
            rhs.pieces[0],
        )
        raise IdentityViolation(
            f"rhs piece exponent {fmt_rational(bad[0])}, coefficient v {fmt_rational(bad[1])} "
            f"differs from lhs {fmt_rational(sigma - d + 1)}, {fmt_rational(eps.v)}"
        )
    return report


# ---------------------------------------------------------------- directions


@dataclass(frozen=True)
class DirectionData:
    label: str
    center: object  # Fraction, INF, or None for the generic direction
    d: int
    sigma: int
    eps_v: Fraction
    window_v: Fraction
    flows: tuple
    degrees: tuple
    slopes: tuple
    limits_v: tuple
    different: dict = field(compare=False, default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.flows)

    def restrict(self, window_v: Fraction) -> tuple:
        return tuple(h.with_domain(Fraction(0), window_v) for h in self.flows)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "d": self.d,
            "sigma": self.sigma,
            "eps_v": fmt_rational(self.eps_v),
            "window_v": fmt_rational(self.window_v),
            "degrees": list(self.degrees),
            "boundary_slopes": [fmt_rational(s) for s in self.slopes],
            "limits_v": [fmt_rational(x) for x in self.limits_v],
            "flows": [h.to_json() for h in self.flows],
            "different_identity": self.different.get("pass"),
        }


def _direction_from_series(g: ValuedSeries, outward: bool, label: str, center) -> DirectionData:
    ann = AnnulusMorphism.near_boundary(g.with_radius(0), outward)
    d = annulus_degree(ann)
    sigma, eps = sigma_epsilon(ann)
    fd = break_flows(ann)
    diff = different_identity_check(ann)
    return DirectionData(
        label=label,
        center=center,
        d=d,
        sigma=sigma,
        eps_v=eps.v,
        window_v=fd.window_v,
        flows=fd.flows,
        degrees=fd.degrees,
        slopes=tuple(boundary_slope(h) for h in fd.flows),
        limits_v=tuple(flow_limit_v(h) for h in fd.flows),
        different=diff,
    )


def _require_gauss_finite(f: ValuedSeries) -> None:
    if min(f.norms_v.values()) != 0:
        raise NonFiniteAtGaussPoint("max |f_i| must be 1 so that the Gauss point maps to the Gauss point")


def direction_data(f: ValuedSeries, center) -> DirectionData:
    """Data of the direction at the Gauss point through ``center`` (or ``INF``).

    Centres with ``|a| < 1`` stand for the direction of 0.
    """
    _require_gauss_finite(f)
    if center == INF or center == "inf":
        return _direction_from_series(f, True, "inf", INF)
    a = Fraction(center)
    if a != 0 and padic_valuation(a, f.p) < 0:
        raise NotOnUnitCircle(f"|{a}| > 1 is not a direction at the Gauss point")
    if a == 0 or padic_valuation(a, f.p) > 0:
        return _direction_from_series(f, False, "0", Fraction(0))
    f.require_exact()
    g = {k: c for k, c in recentered_coeffs(f, a).items() if k >= 1}
    return _direction_from_series(ValuedSeries.exact(f.p, g), False, f"a={a}", a)


def generic_direction(f: ValuedSeries) -> DirectionData:
    """A representative of every non-critical unit direction: ``|g_i| = N_i(1)``."""
    _require_gauss_finite(f)
    norms = {}
    for i in range(1, f.degree + 1):
        vals = [binomial_valuation(k, i, f.p) + v for k, v in f.norms_v.items() if k >= i]
        if vals:
            norms[i] = min(vals)
    g = ValuedSeries.skeleton(f.p, norms)
    return _direction_from_series(g, False, "generic", None)


def _reduce_mod_p(coeffs: dict, p: int) -> list[int]:
    """Reduction of a p-integral polynomial with unit content, as a coefficient list."""
    top = max(coeffs)
    out = [0] * (top + 1)
    for k, c in coeffs.items():
        if padic_valuation(c, p) == 0:
            out[k] = c.numerator * pow(c.denominator, -1, p) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _divide_root(poly: list[int], r: int, p: int) -> list[int]:
    out = [0] * (len(poly) - 1)
    acc = 0
    for k in range(len(poly) - 1, 0, -1):
        acc = (acc * r + poly[k]) % p
        out[k - 1] = acc
    return out


def critical_directions(f: ValuedSeries) -> list[int]:
    """Nonzero residues where some coordinate function drops below its Gauss norm."""
    p = f.p
    crit = set()
    for i in range(1, f.degree + 1):
        if f.is_exact:
            coeffs = {}
            for k, c in f.coeffs.items():
                if k >= i:
                    coeffs[k - i] = Fraction(c) * comb(k, i)
            coeffs = {k: c for k, c in coeffs.items() if c != 0}
            if not coeffs:
                continue
            low = min(padic_valuation(c, p) for c in coeffs.values())
            scaled = {k: c * Fraction(p) ** -low for k, c in coeffs.items()}
            poly = _reduce_mod_p(scaled, p)
            while len(poly) > 1:
                roots = [r for r in range(p) if _eval_mod(poly, r, p) == 0]
                if not roots:
                    break
                for r in roots:
                    if r:
                        crit.add(r)
                poly = _divide_root(poly, roots[0], p)
            if len(poly) > 1:
                raise UnresolvedDirections(
                    f"the reduction of the coordinate function of index {i} has roots outside F_{p}"
                )
        else:
            vals = [binomial_valuation(k, i, p) + v for k, v in f.norms_v.items() if k >= i]
            if vals and vals.count(min(vals)) > 1:
                raise SkeletonModeUnsupported(
                    f"tied terms in coordinate function {i}: critical residues need exact coefficients"
                )
    return sorted(crit)


def _eval_mod(poly: list[int], r: int, p: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = (acc * r + c) % p
    return acc


def _classes(data: DirectionData, gauss_breaks: Sequence[Fraction]) -> list:
    out = []
    for lim in data.limits_v:
        if lim == 0:
            out.append(0)
        elif lim in gauss_breaks:
            out.append(list(gauss_breaks).index(lim) + 1)
        else:
            out.append(None)
    return out


def _contribution(data: DirectionData, classes, layer: int, convention: str) -> Fraction:
    shift = 1 if convention == PLUS else -1
    total = Fraction(0)
    for j, cls in enumerate(classes):
        if cls == layer:
            weight = data.degrees[j + 1] - data.degrees[j]
            total += weight * (data.slopes[j] + shift)
    if layer == 0:
        total += data.d - data.degrees[-1]
    return total


def gauss_directions(f: ValuedSeries) -> list[DirectionData]:
    """Directions 0, the critical residues, infinity, then the generic one."""
    f0 = f.with_radius(0)
    _require_gauss_finite(f0)
    dirs = [direction_data(f0, 0)]
    for r in critical_directions(f0):
        dirs.append(direction_data(f0, r))
    dirs.append(direction_data(f0, INF))
    dirs.append(generic_direction(f0))
    return dirs


def gauss_harmonicity(f: ValuedSeries, convention: str = PLUS, directions=None) -> dict:
    """Riemann-Hurwitz and the layered harmonicity identities at the Gauss point.

    ``directions`` may carry the output of :func:`gauss_directions`.
    """
    if convention not in (PLUS, MINUS):
        raise SchemaError(f"unknown convention {convention!r}")
    _require_gauss_finite(f)
    f0 = f.with_radius(0)
    deg = max(i for i, v in f0.norms_v.items() if v == 0)
    try:
        gp = profile_at_point(f0, LogValue.one())
    except NotInLambdaP as exc:
        raise NoStableWindow("profile at the Gauss point is not in Lambda_p") from exc
    gdeg = gp.local_degrees
    gbreaks = list(gp.breaks_v)

    if directions is None:
        directions = gauss_directions(f0)
    *dirs, gen = directions

    closed_form = {
        "sigma_zero": gen.sigma == 0,
        "degree": gen.d == gdeg[-1],
        "flows": len(gen.flows) == len(gbreaks)
        and all(
            h.pieces == ((Fraction(-1), b),) for h, b in zip(gen.flows, gbreaks)
        ),
    }
    closed_form["pass"] = all(closed_form.values())

    rh_rhs = sum(x.sigma for x in dirs)
    rh = {
        "lhs": 2 * deg - 2,
        "rhs": rh_rhs,
        "generic_sigma": gen.sigma,
        "pass": gen.sigma == 0 and rh_rhs == 2 * deg - 2,
    }

    per_conv = {}
    for conv in (PLUS, MINUS):
        layers = []
        for i in range(len(gdeg)):
            lhs = 2 * (deg - gdeg[-1]) if i == 0 else 2 * (gdeg[i] - gdeg[i - 1])
            terms = {}
            anomalies = []
            for x in dirs:
                cls = _classes(x, gbreaks)
                if None in cls:
                    anomalies.append(x.label)
                terms[x.label] = _contribution(x, cls, i, conv)
            gcls = _classes(gen, gbreaks)
            gterm = _contribution(gen, gcls, i, conv)
            rhs = sum(terms.values(), Fraction(0))
            layers.append(
                {
                    "layer": i,
                    "lhs": fmt_rational(lhs),
                    "rhs": fmt_rational(rhs),
                    "generic": fmt_rational(gterm),
                    "terms": {k: fmt_rational(v) for k, v in terms.items()},
                    "unmatched_limits": anomalies,
                    "pass": gterm == 0 and rhs == lhs and not anomalies and None not in gcls,
                }
            )
        per_conv[conv] = {"pass": all(x["pass"] for x in layers), "layers": layers}

    consistent = [c for c in (PLUS, MINUS) if per_conv[c]["pass"]]
    different_ok = all(x.different.get("pass") for x in [*dirs, gen])
    return {
        "degree": deg,
        "gauss_profile": gp.to_json(),
        "directions": [x.to_json() for x in dirs],
        "generic": gen.to_json(),
        "generic_closed_form": closed_form,
        "riemann_hurwitz": rh,
        "conventions": per_conv,
        "consistent_conventions": consistent,
        "convention": convention,
        "different_identities": different_ok,
        "pass": rh["pass"] and per_conv[convention]["pass"] and different_ok and closed_form["pass"],
    }


def export_flows(data: Sequence[DirectionData], grid: int, window_v=None) -> str:
    """CSV of flow values on a uniform grid of ``v(rho)`` including both endpoints."""
    with_flows = [x for x in data if x.flows]
    if not with_flows:
        raise EmptyData("no break flows to export")
    if isinstance(grid, bool) or not isinstance(grid, int) or grid < 2:
        raise SchemaError("grid must be an integer >= 2")
    w = min(x.window_v for x in with_flows)
    if window_v is not None:
        w = min(w, Fraction(window_v))
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    header = ["rho_v"]
    for x in with_flows:
        header += [f"{x.label}:b_{j + 1}_v" for j in range(x.n)]
    out.writerow(header)
    for k in range(grid):
        t = w * k / (grid - 1)
        row = [fmt_rational(t)]
        for x in with_flows:
            row += [fmt_rational(h.eval_v(t)) for h in x.flows]
        out.writerow(row)
    return buf.getvalue()
