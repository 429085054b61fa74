"""Taylor recentering, generic coordinate-function norms and local profiles."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from ..errors import CenterOutsideDisc, NonIntegralSeparableDegree, RadiusOutOfRange
from ..lambda_calc import LambdaP, PiecewiseMonomial, build_piecewise
from ..valuation import INF, LogValue, binomial_valuation, padic_valuation
from .polygon import monomial_envelope
from .series import ValuedSeries


def _check_radius(f: ValuedSeries, rho: LogValue) -> None:
    # closed-disc convention: rho = R is allowed
    if rho.is_zero or rho.v < f.radius_v:
        raise RadiusOutOfRange("radius must lie in (0, R]")


def recentered_coeffs(f: ValuedSeries, a) -> dict:
    """All coefficients of ``f(a + u)`` in ``u``, constant term included."""
    f.require_exact()
    a = Fraction(a)
    out = {}
    for i in range(0, f.degree + 1):
        c = sum(
            (comb(k, i) * a ** (k - i) * fk for k, fk in f.coeffs.items() if k >= i),
            Fraction(0),
        )
        if c != 0:
            out[i] = c
    return out


def taylor_recenter(f: ValuedSeries, a, check_center: bool = True) -> ValuedSeries:
    """``f(a + u) - f(a)`` as a series in ``u`` on the same radius."""
    f.require_exact()
    a = Fraction(a)
    if check_center and a != 0 and not padic_valuation(a, f.p) > f.radius_v:
        raise CenterOutsideDisc("center must satisfy |a| < R")
    coeffs = {k: c for k, c in recentered_coeffs(f, a).items() if k >= 1}
    return ValuedSeries.exact(f.p, coeffs, f.radius_v)


def derivative_coefficient(f: ValuedSeries, a, i: int) -> Fraction:
    """``(1/i!) d^i f/dT^i (a)`` by repeated differentiation."""
    f.require_exact()
    coeffs = dict(f.coeffs)
    for _ in range(i):
        coeffs = {k - 1: k * c for k, c in coeffs.items() if k != 0}
    val = sum((c * Fraction(a) ** k for k, c in coeffs.items()), Fraction(0))
    fact = 1
    for m in range(2, i + 1):
        fact *= m
    return val / fact


def generic_norm_lines(f: ValuedSeries, i: int) -> list[tuple]:
    """Monomials ``|C(k,i)| |f_k| sigma^(k-i)`` as ``(k - i, v, k)``."""
    return [
        (k - i, binomial_valuation(k, i, f.p) + v, k)
        for k, v in f.norms_v.items()
        if k >= i
    ]


def generic_norm_function(f: ValuedSeries, i: int) -> PiecewiseMonomial | None:
    """``sigma -> N_i(sigma)`` on ``[0, R]``; ``None`` when identically 0."""
    lines = generic_norm_lines(f, i)
    if not lines:
        return None
    return monomial_envelope(f.p, lines, f.radius_v)[0]


def generic_norms_v(f: ValuedSeries, sigma_v) -> dict:
    """``i -> v(N_i(sigma))`` for ``1 <= i <= deg``; ``sigma_v = INF`` gives ``|f_i|``."""
    out = {}
    for i in range(1, f.degree + 1):
        best = INF
        for j, c, _ in generic_norm_lines(f, i):
            val = c if j == 0 else (INF if sigma_v == INF else c + j * sigma_v)
            best = min(best, val)
        out[i] = best
    return out


def generic_norms(f: ValuedSeries, rho: LogValue) -> dict:
    """``N_i(rho) = max_j |C(i+j, j)| rho^j |f_(i+j)|`` as LogValues."""
    _check_radius(f, rho)
    return {i: LogValue(v) for i, v in generic_norms_v(f, rho.v).items()}


def local_lines(f: ValuedSeries, rho_v: Fraction) -> tuple[list, Fraction]:
    """Normalized monomials ``N_i(rho) rho^i x^i / M`` and ``v(M)``."""
    norms = generic_norms_v(f, rho_v)
    raw = [(i, v + i * rho_v) for i, v in norms.items() if v != INF]
    top = min(c for _, c in raw)
    return [(i, c - top, i) for i, c in raw], top


def local_profile(f: ValuedSeries, rho: LogValue) -> tuple[PiecewiseMonomial, list]:
    _check_radius(f, rho)
    lines, _ = local_lines(f, rho.v)
    return monomial_envelope(f.p, lines, Fraction(0))


def profile_at_point(f: ValuedSeries, rho: LogValue) -> LambdaP:
    """Normalized profile at the point of radius ``rho``; raises NotInLambdaP on ties."""
    pw, _ = local_profile(f, rho)
    return LambdaP.from_pw(pw)


def restrict_profile(prof: LambdaP, r: LogValue) -> LambdaP:
    """``x -> P(r x) / P(r)``."""
    if r.is_zero or not r.v > 0:
        raise RadiusOutOfRange("r must lie in (0, 1)")
    f = prof.pw
    top = f.eval_v(r.v)
    inner = [t for t in f.cuts if t > r.v]
    ends = [Fraction(0), *[t - r.v for t in inner], INF]
    pieces = []
    for a, b in zip([r.v, *inner], [*inner, INF]):
        e, c = f.piece_at(a + 1 if b == INF else (a + b) / 2)
        pieces.append((e, c + e * r.v - top))
    return LambdaP.from_pw(build_piecewise(prof.p, ends, pieces))


def disc_degree(f: ValuedSeries, rho: LogValue) -> int:
    """Largest index attaining ``max |f_i| rho^i`` (degree on the closed disc)."""
    vals = {i: v + i * rho.v for i, v in f.norms_v.items()}
    best = min(vals.values())
    return max(i for i, v in vals.items() if v == best)


def residual_degrees(f: ValuedSeries, rho: LogValue) -> tuple[int, int]:
    """``(s, i)`` with ``i`` the degree of the local profile and ``s * i`` the disc degree."""
    prof = profile_at_point(f, rho)
    i = prof.degree
    n = disc_degree(f, rho)
    if n % i:
        raise NonIntegralSeparableDegree(f"disc degree {n} is not divisible by {i}")
    return n // i, i
