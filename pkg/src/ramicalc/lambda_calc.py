"""Piecewise-monomial functions, the class Lambda_p and canonical factorization.

Everything is stored in log coordinates.  A monomial ``r -> a * r**e``
becomes the affine map ``v -> e*v + c`` with ``c = v(a)``, and a function on
the value interval ``[lo, hi]`` lives on the v-interval ``[v(hi), v(lo)]``.
Pieces are therefore listed from the *top* of the value domain downwards.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    AlphaZeroNonzero,
    DomainMismatch,
    InvalidPiecewise,
    NonIncreasingAlphas,
    NonMonotoneBreaks,
    NotInLambdaP,
    OutOfDomain,
    PrimeMismatch,
    SchemaError,
)
from .valuation import (
    INF,
    LogValue,
    VCoord,
    as_prime,
    as_rational,
    as_vcoord,
    fmt_rational,
    ilog,
    is_power_of,
)

Piece = tuple  # (exponent, coefficient-v)


def affine_at(e: Fraction, c: Fraction, v: VCoord) -> VCoord:
    """Evaluate ``e*v + c`` allowing ``v = inf``."""
    if v == INF:
        if e > 0:
            return INF
        if e == 0:
            return c
        raise OutOfDomain("a decreasing piece is unbounded at the value 0")
    return e * v + c


def interior_point(a: Fraction, b: VCoord) -> Fraction:
    return a + 1 if b == INF else (a + b) / 2


def _check_prime(f, g) -> None:
    if f.p != g.p:
        raise PrimeMismatch(f"prime {f.p} mixed with prime {g.p}")


@dataclass(frozen=True)
class PiecewiseMonomial:
    """Continuous piecewise-monomial function on a closed value interval.

    ``vmin``/``vmax`` bound the v-domain (``vmax`` may be ``INF``, meaning the
    value domain reaches 0).  ``cuts`` are the interior break coordinates in
    increasing v and ``pieces[k] = (e, c)`` governs ``[cuts[k-1], cuts[k]]``.
    Adjacent identical pieces are merged, so equal functions compare equal.
    """

    p: int
    vmin: Fraction
    vmax: VCoord
    cuts: tuple
    pieces: tuple

    def __post_init__(self):
        vmin = Fraction(self.vmin)
        vmax = self.vmax if self.vmax == INF else Fraction(self.vmax)
        if not vmin < vmax:
            raise InvalidPiecewise("empty or degenerate domain")
        cuts = [Fraction(t) for t in self.cuts]
        pieces = [(Fraction(e), Fraction(c)) for e, c in self.pieces]
        if len(pieces) != len(cuts) + 1:
            raise InvalidPiecewise("need exactly one more piece than cuts")
        ends = [vmin, *cuts, vmax]
        if any(not a < b for a, b in zip(ends, ends[1:])):
            raise InvalidPiecewise("break-points must be strictly increasing and interior")
        for t, (e1, c1), (e2, c2) in zip(cuts, pieces, pieces[1:]):
            if e1 * t + c1 != e2 * t + c2:
                raise InvalidPiecewise(f"discontinuous at v={fmt_rational(t)}")
        if vmax == INF and pieces[-1][0] < 0:
            raise InvalidPiecewise("last piece would be infinite at the value 0")
        merged_cuts, merged = [], [pieces[0]]
        for t, pc in zip(cuts, pieces[1:]):
            if pc == merged[-1]:
                continue
            merged_cuts.append(t)
            merged.append(pc)
        object.__setattr__(self, "p", as_prime(self.p))
        object.__setattr__(self, "vmin", vmin)
        object.__setattr__(self, "vmax", vmax)
        object.__setattr__(self, "cuts", tuple(merged_cuts))
        object.__setattr__(self, "pieces", tuple(merged))

    # access
    def intervals(self):
        """Yield ``(a, b, e, c)`` for every piece, ``a < b`` in v."""
        ends = [self.vmin, *self.cuts, self.vmax]
        for (a, b), (e, c) in zip(zip(ends, ends[1:]), self.pieces):
            yield a, b, e, c

    def piece_at(self, v: VCoord) -> Piece:
        """Piece governing ``v``; at a cut the lower-v piece is returned."""
        return self.pieces[bisect.bisect_left(self.cuts, v)]

    def eval_v(self, v: VCoord) -> VCoord:
        if v < self.vmin or v > self.vmax:
            raise OutOfDomain(f"v={fmt_rational(v)} outside [{fmt_rational(self.vmin)}, {fmt_rational(self.vmax)}]")
        e, c = self.piece_at(v)
        return affine_at(e, c, v)

    def eval(self, r: LogValue) -> LogValue:
        return LogValue(self.eval_v(r.v))

    __call__ = eval

    @property
    def breaks(self) -> list[LogValue]:
        """Interior break-points in increasing value order."""
        return [LogValue(t) for t in reversed(self.cuts)]

    @property
    def exponents(self) -> list[Fraction]:
        """Exponents in increasing value order."""
        return [e for e, _ in reversed(self.pieces)]

    @property
    def top_piece(self) -> Piece:
        """The piece at the upper end of the value domain."""
        return self.pieces[0]

    def with_domain(self, vmin: Fraction, vmax: VCoord) -> PiecewiseMonomial:
        """Restriction to a sub-interval of the v-domain."""
        if vmin < self.vmin or vmax > self.vmax:
            raise DomainMismatch("restriction must shrink the domain")
        inner = [t for t in self.cuts if vmin < t < vmax]
        ends = [vmin, *inner, vmax]
        pieces = [self.piece_at(interior_point(a, b)) for a, b in zip(ends, ends[1:])]
        return build_piecewise(self.p, ends, pieces)

    @classmethod
    def _from_ends(cls, p: int, ends: Sequence, pieces: Sequence):
        return cls(p, ends[0], ends[-1], tuple(ends[1:-1]), tuple(pieces))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "domain_v": [fmt_rational(self.vmin), fmt_rational(self.vmax)],
            "pieces": [
                {
                    "v_from": fmt_rational(a),
                    "v_to": fmt_rational(b),
                    "exponent": fmt_rational(e),
                    "coeff_v": fmt_rational(c),
                }
                for a, b, e, c in self.intervals()
            ],
        }


@dataclass(frozen=True)
class PiecewisePower(PiecewiseMonomial):
    """A strictly increasing piecewise-monomial function (all exponents > 0)."""

    def __post_init__(self):
        super().__post_init__()
        if any(e <= 0 for e, _ in self.pieces):
            raise InvalidPiecewise("exponents of a PiecewisePower must be positive")


def build_piecewise(p: int, ends: Sequence, pieces: Sequence) -> PiecewiseMonomial:
    """Build the most specific class the pieces allow."""
    cls = PiecewisePower if all(Fraction(e) > 0 for e, _ in pieces) else PiecewiseMonomial
    return cls._from_ends(p, list(ends), list(pieces))


def monomial(p, e, c, vmin=Fraction(0), vmax: VCoord = INF) -> PiecewiseMonomial:
    """``r -> a * r**e`` with ``v(a) = c`` on the given v-domain."""
    return build_piecewise(as_prime(p), [Fraction(vmin), vmax], [(Fraction(e), Fraction(c))])


def identity(p, vmin=Fraction(0), vmax: VCoord = INF) -> PiecewisePower:
    return monomial(p, 1, 0, vmin, vmax)


def _as_pw(f) -> PiecewiseMonomial:
    return f.pw if isinstance(f, LambdaP) else f


def pw_equals(f, g) -> bool:
    """Pointwise equality (structural after merging)."""
    f, g = _as_pw(f), _as_pw(g)
    return (f.p, f.vmin, f.vmax, f.cuts, f.pieces) == (g.p, g.vmin, g.vmax, g.cuts, g.pieces)


def compose(f, g) -> PiecewiseMonomial:
    """``f o g`` (apply ``g`` first); ``g`` must be increasing."""
    f, g = _as_pw(f), _as_pw(g)
    _check_prime(f, g)
    if not isinstance(g, PiecewisePower):
        raise DomainMismatch("the inner function must be increasing")
    lo, hi = g.eval_v(g.vmin), g.eval_v(g.vmax)
    if lo < f.vmin or hi > f.vmax:
        raise DomainMismatch("range of the inner function is not inside the outer domain")
    cuts = set(g.cuts)
    for t in f.cuts:
        if lo < t < hi:
            for a, b, e, c in g.intervals():
                if affine_at(e, c, a) <= t <= affine_at(e, c, b):
                    cuts.add((t - c) / e)
                    break
    ends = [g.vmin, *sorted(cuts), g.vmax]
    pieces = []
    for a, b in zip(ends, ends[1:]):
        m = interior_point(a, b)
        ge, gc = g.piece_at(m)
        fe, fc = f.piece_at(ge * m + gc)
        pieces.append((fe * ge, fe * gc + fc))
    return build_piecewise(f.p, ends, pieces)


def invert(f) -> PiecewisePower:
    f = _as_pw(f)
    if not isinstance(f, PiecewisePower):
        raise DomainMismatch("only increasing functions can be inverted")
    ends = [f.eval_v(t) for t in (f.vmin, *f.cuts, f.vmax)]
    pieces = [(1 / e, -c / e) for e, c in f.pieces]
    return PiecewisePower._from_ends(f.p, ends, pieces)


def _refined_ends(fs: Sequence[PiecewiseMonomial]) -> list:
    f0 = fs[0]
    for f in fs[1:]:
        _check_prime(f0, f)
        if (f.vmin, f.vmax) != (f0.vmin, f0.vmax):
            raise DomainMismatch("functions live on different domains")
    cuts = sorted(set(itertools.chain.from_iterable(f.cuts for f in fs)))
    return [f0.vmin, *cuts, f0.vmax]


def lower_envelope(lines: Sequence[Piece], vmin: Fraction, vmax: VCoord):
    """Split ``[vmin, vmax]`` where the minimum of affine ``lines`` changes.

    Returns ``(ends, winners)`` with ``winners[k]`` the index of the line that
    is minimal on the k-th sub-interval (the smallest index on exact ties).
    """
    xs = {vmin, vmax}
    uniq = sorted(set(lines))
    for (e1, c1), (e2, c2) in itertools.combinations(uniq, 2):
        if e1 != e2:
            x = (c2 - c1) / (e1 - e2)
            if vmin < x < vmax:
                xs.add(x)
    ends = sorted(xs)
    winners = []
    for a, b in zip(ends, ends[1:]):
        m = interior_point(a, b)
        winners.append(min(range(len(lines)), key=lambda k: (lines[k][0] * m + lines[k][1], k)))
    return ends, winners


def pw_max(fs: Iterable) -> PiecewiseMonomial:
    """Pointwise maximum of values (minimum in v) over a common domain."""
    fs = [_as_pw(f) for f in fs]
    ends0 = _refined_ends(fs)
    ends, pieces = [ends0[0]], []
    for a, b in zip(ends0, ends0[1:]):
        m = interior_point(a, b)
        lines = [f.piece_at(m) for f in fs]
        sub_ends, winners = lower_envelope(lines, a, b)
        for (_, hi), w in zip(zip(sub_ends, sub_ends[1:]), winners):
            ends.append(hi)
            pieces.append(lines[w])
    return build_piecewise(fs[0].p, ends, pieces)


def pw_mul(f, g) -> PiecewiseMonomial:
    """Pointwise product of values (sum in v)."""
    f, g = _as_pw(f), _as_pw(g)
    ends = _refined_ends([f, g])
    pieces = []
    for a, b in zip(ends, ends[1:]):
        m = interior_point(a, b)
        (e1, c1), (e2, c2) = f.piece_at(m), g.piece_at(m)
        pieces.append((e1 + e2, c1 + c2))
    return build_piecewise(f.p, ends, pieces)


def pw_pow(f, q) -> PiecewiseMonomial:
    """Pointwise power ``f**q`` for a rational ``q``."""
    f = _as_pw(f)
    q = Fraction(q)
    if q == 0:
        return monomial(f.p, 0, 0, f.vmin, f.vmax)
    ends = [f.vmin, *f.cuts, f.vmax]
    return build_piecewise(f.p, ends, [(q * e, q * c) for e, c in f.pieces])


def pw_scale(f, c_v: Fraction) -> PiecewiseMonomial:
    """Multiply by the constant of log-coordinate ``c_v``."""
    f = _as_pw(f)
    ends = [f.vmin, *f.cuts, f.vmax]
    return build_piecewise(f.p, ends, [(e, c + c_v) for e, c in f.pieces])


# ---------------------------------------------------------------- Lambda_p


@dataclass(frozen=True)
class LambdaP:
    """An element of Lambda_p given by its breaks and exponent ladder.

    ``breaks_v`` lists ``v(b_1) > ... > v(b_n) > 0`` (values increasing) and
    ``alphas = (0, alpha_1, ..., alpha_n)``; the exponent on
    ``(b_{i-1}, b_i)`` is ``p**alphas[i-1]``.
    """

    p: int
    breaks_v: tuple
    alphas: tuple
    pw: PiecewisePower = field(init=False, compare=False, repr=False)
    coeffs_v: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        p = as_prime(self.p)
        breaks = tuple(Fraction(b) for b in self.breaks_v)
        alphas = tuple(self.alphas)
        if len(alphas) != len(breaks) + 1:
            raise SchemaError("need exactly one more alpha than breaks")
        if any(isinstance(a, bool) or not isinstance(a, int) or a < 0 for a in alphas):
            raise NonIncreasingAlphas("alphas must be non-negative integers")
        if alphas[0] != 0:
            raise AlphaZeroNonzero("alpha_0 must be 0")
        if any(not a < b for a, b in zip(alphas, alphas[1:])):
            raise NonIncreasingAlphas("alphas must be strictly increasing")
        if any(not 0 < b < INF for b in breaks):
            raise NonMonotoneBreaks("breaks must lie strictly between 0 and 1")
        if any(not a > b for a, b in zip(breaks, breaks[1:])):
            raise NonMonotoneBreaks("breaks must be strictly increasing")
        degs = [p**a for a in alphas]
        n = len(breaks)
        # a_i = prod_{j >= i} b_j^(p^alpha_j - p^alpha_{j-1}), a_{n+1} = 1
        coeffs = [Fraction(0)] * (n + 1)
        for i in range(n - 1, -1, -1):
            coeffs[i] = coeffs[i + 1] + breaks[i] * (degs[i + 1] - degs[i])
        ends = [Fraction(0), *reversed(breaks), INF]
        pieces = [(degs[i], coeffs[i]) for i in range(n, -1, -1)]
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "breaks_v", breaks)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "coeffs_v", tuple(coeffs))
        object.__setattr__(self, "pw", PiecewisePower._from_ends(p, ends, pieces))

    @classmethod
    def identity(cls, p) -> LambdaP:
        return cls(p, (), (0,))

    @classmethod
    def from_pw(cls, f) -> LambdaP:
        """Validate a piecewise function as a member of Lambda_p."""
        f = _as_pw(f)
        if f.vmin != 0 or f.vmax != INF:
            raise NotInLambdaP("domain is not [0, 1]")
        if f.pieces[0][1] != 0:
            raise NotInLambdaP("f(1) != 1")
        degs = f.exponents  # increasing value order
        alphas = []
        for d in degs:
            if d.denominator != 1 or not is_power_of(int(d), f.p):
                raise NotInLambdaP(f"exponent {fmt_rational(d)} is not a power of {f.p}")
            alphas.append(ilog(int(d), f.p))
        if alphas[0] != 0 or any(not a < b for a, b in zip(alphas, alphas[1:])):
            raise NotInLambdaP("exponents must increase from 1")
        lam = cls(f.p, tuple(reversed(f.cuts)), tuple(alphas))
        if not pw_equals(lam.pw, f):
            raise NotInLambdaP("coefficients do not match the break data")
        return lam

    @property
    def n(self) -> int:
        return len(self.breaks_v)

    @property
    def degree(self) -> int:
        return self.p ** self.alphas[-1]

    @property
    def local_degrees(self) -> list[int]:
        return [self.p**a for a in self.alphas]

    @property
    def breaks(self) -> list[LogValue]:
        return [LogValue(b) for b in self.breaks_v]

    @property
    def coefficients(self) -> list[LogValue]:
        return [LogValue(c) for c in self.coeffs_v]

    def eval(self, r: LogValue) -> LogValue:
        return self.pw.eval(r)

    __call__ = eval

    def max_form(self, r: LogValue) -> LogValue:
        """``max_i a_i r^(p^alpha_{i-1})``, computed without the piece table."""
        return max(a * r ** d for a, d in zip(self.coefficients, self.local_degrees))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "breaks_v": [fmt_rational(b) for b in self.breaks_v],
            "alphas": list(self.alphas),
        }


def make_lambda(p, breaks: Sequence, alphas: Sequence[int]) -> LambdaP:
    """Build a LambdaP from breaks in increasing value order.

    ``breaks`` may hold LogValues or raw v-coordinates.
    """
    vs = tuple(b.v if isinstance(b, LogValue) else Fraction(b) for b in breaks)
    return LambdaP(p, vs, tuple(alphas))


def is_simple(f: LambdaP) -> bool:
    return f.n == 1


def canonical_factorization(f: LambdaP) -> list[LambdaP]:
    """The unique simple factors ``[f_1, ..., f_n]`` with ``f = f_n o ... o f_1``.

    Factor ``f_i`` breaks at ``b_i^(p^alpha_{i-1})`` with degree
    ``p^(alpha_i - alpha_{i-1})``.  The identity has no factors.
    """
    p, a = f.p, f.alphas
    return [
        LambdaP(p, (f.breaks_v[i] * p ** a[i],), (0, a[i + 1] - a[i]))
        for i in range(f.n)
    ]


def compose_chain(factors: Sequence[LambdaP], p) -> PiecewiseMonomial:
    """``factors[-1] o ... o factors[0]`` (identity when empty)."""
    out: PiecewiseMonomial = identity(p)
    for g in factors:
        out = compose(g, out)
    return out


def chain_condition(factors: Sequence[LambdaP]) -> bool:
    """``f_i(b_{f_i}) < b_{f_{i+1}}`` for consecutive simple factors."""
    for f, g in zip(factors, factors[1:]):
        b = f.breaks[0]
        if not f(b) < g.breaks[0]:
            return False
    return True


def enumerate_simple_chains(f: LambdaP, require_chain_condition: bool = True) -> list[list[LambdaP]]:
    """Brute-force every chain of ``n`` simple factors recomposing to ``f``.

    Candidate breaks are ``b_i^(p^k)`` for all breaks ``b_i`` of ``f`` and
    ``0 <= k <= alpha_n``; degrees run over every ordered splitting of
    ``alpha_n`` into ``n`` positive parts.  Used as a uniqueness oracle.
    """
    n, p = f.n, f.p
    if n == 0:
        return [[]]
    top = f.alphas[-1]
    cands = sorted({b * p**k for b in f.breaks_v for k in range(top + 1)}, reverse=True)
    lowest = f.coeffs_v[0]
    pool = set(cands)
    found = []
    for split in _compositions(top, n):
        degs = [p**s for s in split]
        for head in itertools.product(cands, repeat=n - 1):
            # the lowest coefficient pins the last break
            last = (lowest - sum(b * (d - 1) for b, d in zip(head, degs))) / (degs[-1] - 1)
            if last not in pool:
                continue
            bs = (*head, last)
            if require_chain_condition and any(
                not bs[i] * degs[i] > bs[i + 1] for i in range(n - 1)
            ):
                continue
            chain = [LambdaP(p, (b,), (0, s)) for b, s in zip(bs, split)]
            if pw_equals(compose_chain(chain, p), f.pw):
                found.append(chain)
    return found


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def piecewise_from_json(doc) -> PiecewiseMonomial:
    try:
        p = doc["p"]
        pieces = doc["pieces"]
        ends = [as_rational(pieces[0]["v_from"])] + [as_vcoord(pc["v_to"]) for pc in pieces]
        data = [(as_rational(pc["exponent"]), as_rational(pc["coeff_v"])) for pc in pieces]
    except (KeyError, IndexError, TypeError) as exc:
        raise SchemaError(f"bad piecewise document: {exc}") from exc
    return build_piecewise(as_prime(p), ends, data)

