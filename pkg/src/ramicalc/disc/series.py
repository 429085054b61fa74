"""Finitely supported series with exact or skeleton (norm-only) coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..errors import EmptySupport, SchemaError, SkeletonModeUnsupported
from ..valuation import (
    INF,
    LogValue,
    as_prime,
    as_rational,
    as_vcoord,
    fmt_rational,
    padic_valuation,
)

EXACT = "exact"
SKELETON = "skeleton"


@dataclass(frozen=True)
class ValuedSeries:
    """``sum f_i T^i`` on the disc (or annulus) of outer radius ``p^-radius_v``.

    In exact mode ``coeffs`` maps indices to rationals; in skeleton mode it
    maps indices to the v-coordinates of the coefficient norms.  Zero
    coefficients are dropped.  Negative indices need ``laurent=True`` and the
    constant term is only allowed for Laurent series.
    """

    p: int
    mode: str
    coeffs: Mapping
    radius_v: Fraction = Fraction(0)
    laurent: bool = False
    _norms: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        p = as_prime(self.p)
        if self.mode not in (EXACT, SKELETON):
            raise SchemaError(f"unknown mode {self.mode!r}")
        clean = {}
        for k, c in dict(self.coeffs).items():
            if isinstance(k, bool) or not isinstance(k, int):
                raise SchemaError(f"index {k!r} is not an integer")
            if self.mode == EXACT:
                c = as_rational(c)
                if c != 0:
                    clean[k] = c
            else:
                c = as_vcoord(c)
                if c != INF:
                    clean[k] = c
        if not clean:
            raise EmptySupport("series has no nonzero coefficient")
        if not self.laurent and min(clean) < 1:
            raise SchemaError("disc series need indices >= 1 (no constant term)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        object.__setattr__(self, "radius_v", as_rational(self.radius_v))
        if self.mode == EXACT:
            norms = {k: Fraction(padic_valuation(c, p)) for k, c in clean.items()}
        else:
            norms = dict(clean)
        object.__setattr__(self, "_norms", norms)

    # constructors
    @classmethod
    def exact(cls, p, coeffs: Mapping, radius_v=0, laurent: bool = False) -> ValuedSeries:
        return cls(p, EXACT, coeffs, Fraction(radius_v), laurent)

    @classmethod
    def skeleton(cls, p, coeffs_v: Mapping, radius_v=0, laurent: bool = False) -> ValuedSeries:
        return cls(p, SKELETON, coeffs_v, Fraction(radius_v), laurent)

    # access
    @property
    def is_exact(self) -> bool:
        return self.mode == EXACT

    @property
    def support(self) -> list[int]:
        return list(self.coeffs)

    @property
    def degree(self) -> int:
        return max(self.coeffs)

    @property
    def norms_v(self) -> dict:
        """Index -> v(f_i) over the support."""
        return dict(self._norms)

    def norm_v(self, i: int):
        return self._norms.get(i, INF)

    def norm(self, i: int) -> LogValue:
        return LogValue(self.norm_v(i))

    @property
    def radius(self) -> LogValue:
        return LogValue(self.radius_v)

    def require_exact(self) -> None:
        if not self.is_exact:
            raise SkeletonModeUnsupported("operation needs exact coefficients")

    def with_radius(self, radius_v) -> ValuedSeries:
        return ValuedSeries(self.p, self.mode, self.coeffs, Fraction(radius_v), self.laurent)

    def derivative(self) -> ValuedSeries:
        """``dS/dT`` as a Laurent series (exact, or skeleton via ``|i|``)."""
        out = {}
        for k, c in self.coeffs.items():
            if k == 0:
                continue
            if self.is_exact:
                out[k - 1] = k * c
            else:
                out[k - 1] = c + padic_valuation(k, self.p)
        return ValuedSeries(self.p, self.mode, out, self.radius_v, laurent=True)

    def to_json(self) -> dict:
        key = "coeffs" if self.is_exact else "coeffs_v"
        return {
            "p": self.p,
            "mode": self.mode,
            "radius_v": fmt_rational(self.radius_v),
            key: {str(k): fmt_rational(c) for k, c in self.coeffs.items()},
        }

    @classmethod
    def from_json(cls, doc, default_p=None, laurent: bool = False) -> ValuedSeries:
        if not isinstance(doc, dict):
            raise SchemaError("series must be a JSON object")
        p = doc.get("p", default_p)
        if p is None:
            raise SchemaError("series has no prime 'p'")
        if "coeffs" in doc and "coeffs_v" in doc:
            raise SchemaError("give either 'coeffs' or 'coeffs_v'")
        mode = doc.get("mode", EXACT if "coeffs" in doc else SKELETON)
        key = "coeffs" if mode == EXACT else "coeffs_v"
        raw = doc.get(key)
        if not isinstance(raw, dict):
            raise SchemaError(f"'{key}' must be an object of index -> rational")
        coeffs = {}
        for k, c in raw.items():
            try:
                idx = int(k)
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"bad index {k!r}") from exc
            if str(idx) != str(k).strip():
                raise SchemaError(f"bad index {k!r}")
            coeffs[idx] = as_rational(c) if mode == EXACT else as_vcoord(c)
        return cls(p, mode, coeffs, as_rational(doc.get("radius_v", "0")), laurent)


# exact polynomial algebra (coefficient dicts, index -> Fraction)


def poly_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v != 0}


def poly_compose(outer: Mapping, inner: Mapping) -> dict:
    """``outer(inner(T))`` for polynomials with nonnegative indices."""
    out: dict = {}
    power: dict = {0: Fraction(1)}
    top = max(outer) if outer else 0
    for k in range(top + 1):
        if k:
            power = poly_mul(power, inner)
        c = outer.get(k, 0)
        if c:
            for i, x in power.items():
                out[i] = out.get(i, 0) + c * x
    return {k: Fraction(v) for k, v in sorted(out.items()) if v != 0}


def compose_series(outer: ValuedSeries, inner: ValuedSeries) -> ValuedSeries:
    outer.require_exact()
    inner.require_exact()
    coeffs = poly_compose(outer.coeffs, inner.coeffs)
    return ValuedSeries.exact(inner.p, coeffs, inner.radius_v)
