"""Verification of user-supplied factorizations of disc morphisms."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import CompositionMismatch, NotInLambdaP
from ..lambda_calc import LambdaP, canonical_factorization, compose, identity, pw_equals
from ..valuation import fmt_rational
from .polygon import value_at
from .recenter import local_profile
from .series import ValuedSeries, poly_compose


def compose_factors(factors: Sequence[ValuedSeries]) -> dict:
    """``factors[-1] o ... o factors[0]`` as an exact coefficient dict."""
    out = dict(factors[0].coeffs)
    for g in factors[1:]:
        g.require_exact()
        out = poly_compose(g.coeffs, out)
    return out


def verify_disc_factorization(f: ValuedSeries, factors: Sequence[ValuedSeries]) -> dict:
    """Check ``f = factors[-1] o ... o factors[0]`` and compare local profiles.

    The profile of each factor is taken at the image radius of the previous
    one, starting from the radius of ``f``; the non-trivial ones must be the
    canonical factors of the profile of ``f`` in order.
    """
    f.require_exact()
    for g in factors:
        g.require_exact()
    got = compose_factors(factors)
    for k in sorted(set(got) | set(f.coeffs)):
        a, b = f.coeffs.get(k, Fraction(0)), got.get(k, Fraction(0))
        if a != b:
            raise CompositionMismatch(
                f"coefficient of T^{k}: expected {fmt_rational(a)}, composition gives {fmt_rational(b)}"
            )
    checks = [{"name": "exact composition", "pass": True}]

    target_pw, _ = local_profile(f, f.radius)
    rho = f.radius
    step_profiles = []
    for g in factors:
        g_here = g.with_radius(rho.v)
        pw, _ = local_profile(g_here, rho)
        step_profiles.append(pw)
        rho = value_at(g_here, rho)

    total = identity(f.p)
    for pw in step_profiles:
        total = compose(pw, total)
    checks.append({"name": "profiles compose", "pass": pw_equals(total, target_pw)})

    simple_flags = []
    nontrivial = []
    for k, pw in enumerate(step_profiles):
        breaks = len(pw.cuts)
        simple_flags.append({"factor": k, "breaks": breaks})
        if breaks:
            nontrivial.append(pw)
    checks.append(
        {
            "name": "factors simple or trivial",
            "pass": all(x["breaks"] <= 1 for x in simple_flags),
            "detail": simple_flags,
        }
    )
    try:
        canon = canonical_factorization(LambdaP.from_pw(target_pw))
        ok = len(canon) == len(nontrivial) and all(pw_equals(a, b) for a, b in zip(canon, nontrivial))
        detail = {"canonical_factors": len(canon), "nontrivial_factors": len(nontrivial)}
    except NotInLambdaP as exc:
        ok, detail = False, {"error": exc.code}
    checks.append({"name": "matches canonical factorization", "pass": ok, "detail": detail})
    return {
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
        "radii_v": [fmt_rational(r) for r in _radii(f, factors)],
    }


def _radii(f: ValuedSeries, factors) -> list:
    rho = f.radius
    out = [rho.v]
    for g in factors:
        rho = value_at(g.with_radius(rho.v), rho)
        out.append(rho.v)
    return out

