"""Radiality classification through generic coordinate-function norms.

A centre ``a`` with ``|a| = sigma`` sees the profile
``G_sigma(rho) = max_i |f_[i](a)| rho^i``.  For a generic such centre
``|f_[i](a)| = N_i(sigma)``, every other centre gives something smaller, and
``N_i(sigma) >= |f_i|`` with ``N_i`` increasing in ``sigma``.  Hence
``P = G_0 <= G_sigma <= G_R`` and the profiles of all centres agree with
``P`` above ``s* = sup{rho : G_R(rho) > P(rho)}``.  Everything below reduces
to exact comparisons between finitely many monomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..lambda_calc import interior_point
from ..valuation import INF, LogValue, fmt_rational, is_power_of, padic_valuation, binomial_valuation
from .polygon import Profile, monomial_envelope, profile
from .recenter import generic_norm_function, generic_norm_lines, generic_norms_v, taylor_recenter
from .series import ValuedSeries

RADIAL = "radial"
N_RADIAL = "n-radial"
WEAKLY = "weakly-n-radial"
NOT_RADIAL = "not-radial"


@dataclass(frozen=True)
class RadialityCertificate:
    verdict: str
    n: int
    radial_level: int
    weak_level: int
    s_star: LogValue
    dominating: tuple
    borders: dict = field(default_factory=dict)
    witness: dict | None = None
    sample_radii: tuple = ()

    @property
    def is_radial(self) -> bool:
        return self.verdict == RADIAL

    @property
    def characteristic(self) -> int | None:
        return len(self.dominating) if self.is_radial else None

    @property
    def is_simple(self) -> bool:
        return self.is_radial and len(self.dominating) == 2

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "n": self.n,
            "characteristic": self.characteristic,
            "simple": self.is_simple,
            "radial_level": self.radial_level,
            "weak_level": self.weak_level,
            "s_star_v": fmt_rational(self.s_star.v),
            "dominating": list(self.dominating),
            "borders_v": {str(k): fmt_rational(b.v) for k, b in sorted(self.borders.items())},
            "witness": self.witness,
        }


def _generic_lines(f: ValuedSeries, sigma_v) -> list[tuple]:
    return [(i, v, i) for i, v in generic_norms_v(f, sigma_v).items() if v != INF]


def _first_gap(p, upper_lines, lower_lines, vmin) -> Fraction | float:
    """Smallest v where the upper envelope strictly exceeds the lower one."""
    hi, _ = monomial_envelope(p, upper_lines, vmin)
    lo, _ = monomial_envelope(p, lower_lines, vmin)
    cuts = sorted(set(hi.cuts) | set(lo.cuts))
    ends = [vmin, *cuts, INF]
    for a, b in zip(ends, ends[1:]):
        m = interior_point(a, b)
        if hi.eval_v(m) < lo.eval_v(m):
            return a
        if b != INF and hi.eval_v(b) < lo.eval_v(b):
            return a
    return INF


def _dominating_top_down(p, lines, vmin) -> list[int]:
    _, segs = monomial_envelope(p, lines, vmin)
    return [s.tag for s in segs]


def _sigma_events(f: ValuedSeries) -> list[Fraction]:
    """Radii where the combinatorics of ``G_sigma`` may change."""
    terms = [
        (i, j, c) for i in range(1, f.degree + 1) for j, c, _ in generic_norm_lines(f, i)
    ]
    rv = f.radius_v
    events = set()
    for (i1, j1, c1), (i2, j2, c2) in itertools.combinations(terms, 2):
        if j1 != j2:
            # same index: kink of N_i; different index: crossing on rho = R
            shift = 0 if i1 == i2 else (i2 - i1) * rv
            events.add((c2 - c1 + shift) / (j1 - j2))
    for (i1, j1, c1), (i2, j2, c2), (i3, j3, c3) in itertools.combinations(terms, 3):
        det = (j1 - j2) * (i1 - i3) - (i1 - i2) * (j1 - j3)
        if det:
            s = ((c2 - c1) * (i1 - i3) - (i1 - i2) * (c3 - c1)) / det
            events.add(s)
    return sorted(e for e in events if e > rv)


def _generic_samples(f: ValuedSeries) -> list[Fraction]:
    ev = _sigma_events(f)
    pts = [f.radius_v, *ev]
    out = [interior_point(a, b) for a, b in zip(pts, pts[1:])]
    out.append(pts[-1] + 1)
    return out


def classify_radiality(f: ValuedSeries) -> RadialityCertificate:
    p, rv = f.p, f.radius_v
    prof: Profile = profile(f)
    base = [(i, v, i) for i, v in f.norms_v.items()]
    top_lines = _generic_lines(f, rv)
    s_v = _first_gap(p, top_lines, base, rv)

    intervals = prof.dominance_intervals()  # top index first
    m = sum(1 for _, a, _ in intervals if a < s_v)
    borders = {}
    for n, (_, _, hi) in enumerate(intervals[:m], start=1):
        borders[n] = LogValue(min(s_v, hi))

    reference = [i for i, _, _ in intervals]
    samples = _generic_samples(f)
    weak = len(reference)
    for s in samples:
        dom = _dominating_top_down(p, _generic_lines(f, s), rv)
        k = 0
        while k < min(len(dom), len(reference)) and dom[k] == reference[k]:
            k += 1
        weak = min(weak, k)

    if s_v == INF:
        verdict, n = RADIAL, len(reference)
    elif m >= 1:
        verdict, n = N_RADIAL, m
    elif weak >= 1:
        verdict, n = WEAKLY, weak
    else:
        verdict, n = NOT_RADIAL, 0
    witness = None if s_v == INF else _witness(f, top_lines, base, s_v)
    return RadialityCertificate(
        verdict=verdict,
        n=n,
        radial_level=len(reference) if s_v == INF else m,
        weak_level=weak,
        s_star=LogValue(s_v),
        dominating=tuple(prof.dominating),
        borders=borders,
        witness=witness,
        sample_radii=tuple(samples),
    )


def _witness(f: ValuedSeries, top_lines, base, s_v) -> dict:
    """An index, centre radius < R and evaluation radius violating the profile."""
    p, rv = f.p, f.radius_v
    hi, segs = monomial_envelope(p, top_lines, rv)
    lo, _ = monomial_envelope(p, base, rv)
    nxt = [t for t in sorted(set(hi.cuts) | set(lo.cuts)) if t > s_v]
    rho_v = interior_point(s_v, nxt[0] if nxt else INF)
    i = next(s.tag for s in segs if s.v_from <= rho_v <= s.v_to)
    target = lo.eval_v(rho_v)
    nfun = generic_norm_function(f, i)
    delta = Fraction(1)
    while not nfun.eval_v(rv + delta) + i * rho_v < target:
        delta /= 2
    sigma_v = rv + delta
    return {
        "index": i,
        "center_radius_v": fmt_rational(sigma_v),
        "rho_v": fmt_rational(rho_v),
        "generic_norm_v": fmt_rational(nfun.eval_v(sigma_v)),
        "term_v": fmt_rational(nfun.eval_v(sigma_v) + i * rho_v),
        "profile_v": fmt_rational(target),
    }


def verify_witness(f: ValuedSeries, witness: dict) -> bool:
    """Recompute the witness inequality ``N_i(sigma) rho^i > P(rho)``."""
    i = witness["index"]
    sigma_v = Fraction(witness["center_radius_v"])
    rho_v = Fraction(witness["rho_v"])
    if not sigma_v > f.radius_v:
        return False
    term = generic_norms_v(f, sigma_v)[i] + i * rho_v
    prof = min(v + k * rho_v for k, v in f.norms_v.items())
    return term < prof


def radial_arithmetic_check(f: ValuedSeries, cert: RadialityCertificate) -> dict:
    """Arithmetic consequences of (n-)radiality for the dominating indices."""
    p, rv = f.p, f.radius_v
    checks = []
    if cert.verdict == RADIAL:
        idx = list(cert.dominating)
    elif cert.verdict == N_RADIAL:
        idx = list(cert.dominating)[-cert.n :]
    else:
        return {"applicable": False, "pass": True, "checks": [], "verdict": cert.verdict}

    def add(name, ok, **detail):
        checks.append({"name": name, "pass": bool(ok), **detail})

    for l, i in enumerate(idx):
        add("power of p", is_power_of(i, p), index=i)
        if cert.verdict == RADIAL:
            add("p^l divides i_l", i % p**l == 0, index=i, l=l)
    for a, b in zip(idx, idx[1:]):
        add("consecutive indices divide", b % a == 0, lower=a, upper=b)
    norms = f.norms_v
    for i in idx:
        vi = norms.get(i, INF) + i * rv
        for j, vj in norms.items():
            if j <= i or vj + j * rv > vi:
                continue
            add("index divides dominant terms", j % i == 0, i=i, j=j)
            lhs = binomial_valuation(j, i, p) + vj + j * rv
            add("binomial bound", lhs >= vi, i=i, j=j, lhs_v=fmt_rational(lhs), rhs_v=fmt_rational(vi))
        for j, vj in norms.items():
            if j > i and j % i == 0:
                lhs = padic_valuation(j // i, p) + vj + j * rv
                add("multiple bound", lhs >= vi, i=i, m=j // i, lhs_v=fmt_rational(lhs), rhs_v=fmt_rational(vi))
    return {
        "applicable": True,
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
        "verdict": cert.verdict,
    }


def recentered_profile_matches(f: ValuedSeries, centers) -> list[dict]:
    """Exact-mode oracle: the profile of ``f(a + u) - f(a)`` for each centre ``a``."""
    base = profile(f).pw
    out = []
    for a in centers:
        g = taylor_recenter(f, a)
        pw = profile(g).pw
        out.append({"center": str(Fraction(a)), "same": (pw.cuts, pw.pieces) == (base.cuts, base.pieces)})
    return out
