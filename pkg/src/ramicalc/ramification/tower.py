"""Canonical towers of subgroups and their verification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..lambda_calc import (
    LambdaP,
    canonical_factorization,
    compose,
    compose_chain,
    invert,
    is_simple,
    pw_equals,
)
from ..valuation import LogValue, as_prime, fmt_rational
from .groups import FiniteGroup, Subgroup
from .herbrand import herbrand_from_values, herbrand_relative
from .inertia import InertiaFunction, ramification_filtration


@dataclass(frozen=True)
class Tower:
    """``H = H_1 < ... < H_{n+1} <= G`` with one Herbrand function per step.

    ``steps[k]`` is the relative Herbrand function of ``H_{k+2}`` over
    ``H_{k+1}``; ``final`` is that of ``G`` over ``H_{n+1}``.
    """

    p: int
    chain: tuple
    s_indices: tuple
    steps: tuple
    final: LambdaP

    @property
    def final_trivial(self) -> bool:
        return self.final.n == 0

    def to_json(self) -> dict:
        return {
            "chain": [h.bits for h in self.chain],
            "orders": [h.order for h in self.chain],
            "s_indices": list(self.s_indices),
            "steps": [s.to_json() for s in self.steps],
            "final": self.final.to_json(),
            "final_trivial": self.final_trivial,
        }


class _HerbrandCache:
    def __init__(self, g: FiniteGroup, inertia: InertiaFunction, p: int):
        self.g, self.inertia, self.p = g, inertia, p
        self._abs = lru_cache(maxsize=None)(self._absolute)
        self._rel = lru_cache(maxsize=None)(self._relative)

    def _absolute(self, bits: int) -> LambdaP:
        return herbrand_from_values(self.p, self.inertia.restrict(Subgroup(bits)))

    def _relative(self, big: int, small: int) -> LambdaP:
        return LambdaP.from_pw(compose(self._abs(big), invert(self._abs(small))))

    def relative(self, big: Subgroup, small: Subgroup) -> LambdaP:
        return self._rel(big.bits, small.bits)


def canonical_tower(g: FiniteGroup, inertia: InertiaFunction, h: Subgroup, p) -> Tower:
    p = as_prime(p)
    filt = ramification_filtration(g, inertia, p)
    h = g.from_bits(h.bits)
    one = LogValue.one()
    candidates = [(j, g.product(h, gr)) for j, (r, gr) in enumerate(filt) if r < one]
    chain: list[Subgroup] = []
    s_idx: list[int] = []
    for j, sub in candidates:
        if not chain or sub.bits != chain[-1].bits:
            chain.append(sub)
            s_idx.append(j)
    cache = _HerbrandCache(g, inertia, p)
    steps = tuple(cache.relative(b, a) for a, b in zip(chain, chain[1:]))
    final = cache.relative(g.whole, chain[-1])
    return Tower(p, tuple(chain), tuple(s_idx), steps, final)


def _check(name: str, ok: bool, detail=None) -> dict:
    out = {"name": name, "pass": bool(ok)}
    if detail is not None:
        out["detail"] = detail
    return out


def verify_tower(t: Tower, f_total: LambdaP) -> dict:
    """Check the three defining clauses of a canonical tower."""
    checks = []
    for k, (step, lo, hi) in enumerate(zip(t.steps, t.chain, t.chain[1:])):
        index = hi.order // lo.order
        ok = is_simple(step) and step.degree == index and hi.order % lo.order == 0
        checks.append(
            _check(
                f"step {k + 1} simply ramified",
                ok,
                {"breaks_v": [fmt_rational(b) for b in step.breaks_v], "degree": step.degree, "index": index},
            )
        )
    checks.append(_check("final step trivial", t.final_trivial, {"breaks": t.final.n}))
    factors = canonical_factorization(f_total)
    same = len(factors) == len(t.steps) and all(pw_equals(a, b) for a, b in zip(factors, t.steps))
    checks.append(
        _check(
            "steps form the canonical decomposition",
            same,
            {"factors": len(factors), "steps": len(t.steps)},
        )
    )
    recomposed = compose(t.final, compose_chain(list(t.steps), t.p))
    checks.append(_check("steps recompose to the total Herbrand function", pw_equals(recomposed, f_total)))
    return {"pass": all(c["pass"] for c in checks), "checks": checks}


def enumerate_towers(g: FiniteGroup, inertia: InertiaFunction, h: Subgroup, p) -> list[tuple]:
    """Brute force: every increasing chain from ``h`` meeting the tower clauses.

    A chain qualifies when each step is simple of degree equal to its index,
    the remaining step to ``G``
    is trivial and the steps are the canonical factors of ``H_G o H_h^-1``.
    Returns the qualifying chains as tuples of bitmasks.
    """
    p = as_prime(p)
    ramification_filtration(g, inertia, p)
    h = g.from_bits(h.bits)
    cache = _HerbrandCache(g, inertia, p)
    target = canonical_factorization(herbrand_relative(g, inertia, h, p))
    above = [s for s in g.all_subgroups() if h < s]
    out = []

    def walk(chain: list[Subgroup], depth: int):
        top = chain[-1]
        if depth == len(target):
            if cache.relative(g.whole, top).n == 0:
                out.append(tuple(s.bits for s in chain))
            return
        for s in above:
            if top < s:
                step = cache.relative(s, top)
                index = s.order // top.order
                if is_simple(step) and step.degree == index and pw_equals(step, target[depth]):
                    walk(chain + [s], depth + 1)

    walk([h], 0)
    return out
