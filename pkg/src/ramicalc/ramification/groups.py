"""Finite groups given by multiplication tables, with bitset subgroups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from ..errors import InvalidGroup, NonNormalSubgroup, NotASubgroup

MAX_ORDER = 512


@dataclass(frozen=True)
class Subgroup:
    """Membership bitset over the elements of a parent group."""

    bits: int

    @property
    def order(self) -> int:
        return self.bits.bit_count()

    def members(self) -> list[int]:
        return [k for k in range(self.bits.bit_length()) if self.bits >> k & 1]

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __le__(self, other: Subgroup) -> bool:
        return self.bits & other.bits == self.bits

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.bits != other.bits


def _bits(elems: Iterable[int]) -> int:
    out = 0
    for x in elems:
        out |= 1 << x
    return out


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group as an ``n x n`` table of element indices."""

    table: tuple
    name: str = ""
    labels: tuple = ()
    identity: int = field(init=False)
    inverse: tuple = field(init=False)

    def __post_init__(self):
        rows = [list(r) for r in self.table]
        n = len(rows)
        if n == 0 or n > MAX_ORDER:
            raise InvalidGroup(f"order {n} outside 1..{MAX_ORDER}")
        if any(len(r) != n for r in rows):
            raise InvalidGroup("table is not square")
        if any(isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n for r in rows for x in r):
            raise InvalidGroup("table entries must be element indices")
        t = np.array(rows, dtype=np.int64)
        ids = [e for e in range(n) if (t[e] == np.arange(n)).all() and (t[:, e] == np.arange(n)).all()]
        if not ids:
            raise InvalidGroup("no identity element")
        e = ids[0]
        inv = []
        for x in range(n):
            hits = np.nonzero(t[x] == e)[0]
            if len(hits) != 1 or t[hits[0], x] != e:
                raise InvalidGroup(f"element {x} has no two-sided inverse")
            inv.append(int(hits[0]))
        for a in range(n):
            # (a*b)*c == a*(b*c) for every b, c
            if not (t[t[a]] == t[a][t]).all():
                raise InvalidGroup("table is not associative")
        object.__setattr__(self, "table", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inv))
        if self.labels and len(self.labels) != n:
            raise InvalidGroup("one label per element required")

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], mul: Callable, name: str = "") -> FiniteGroup:
        index = {x: k for k, x in enumerate(elements)}
        if len(index) != len(elements):
            raise InvalidGroup("duplicate elements")
        try:
            table = [[index[mul(a, b)] for b in elements] for a in elements]
        except KeyError as exc:
            raise InvalidGroup(f"product {exc} is not in the element list") from exc
        return cls(tuple(map(tuple, table)), name, tuple(str(x) for x in elements))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    # subgroups
    @property
    def trivial(self) -> Subgroup:
        return Subgroup(1 << self.identity)

    @property
    def whole(self) -> Subgroup:
        return Subgroup((1 << self.order) - 1)

    def generate(self, gens: Iterable[int]) -> Subgroup:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(_bits(seen))

    def subgroup(self, elems: Iterable[int]) -> Subgroup:
        """Validate an explicit element set as a subgroup."""
        elems = set(elems)
        if any(not 0 <= x < self.order for x in elems):
            raise NotASubgroup("element index out of range")
        if self.identity not in elems:
            raise NotASubgroup("missing identity")
        for a in elems:
            if self.inverse[a] not in elems:
                raise NotASubgroup(f"not closed under inverse at {a}")
            for b in elems:
                if self.table[a][b] not in elems:
                    raise NotASubgroup(f"not closed under multiplication at ({a}, {b})")
        return Subgroup(_bits(elems))

    def from_bits(self, bits: int) -> Subgroup:
        if bits < 0 or bits >> self.order:
            raise NotASubgroup("bitmask has bits beyond the group order")
        return self.subgroup(Subgroup(bits).members())

    def is_normal(self, h: Subgroup) -> bool:
        mem = h.members()
        return all(self.conj(g, x) in h for g in range(self.order) for x in mem)

    def require_normal(self, h: Subgroup) -> None:
        if not self.is_normal(h):
            raise NonNormalSubgroup(f"subgroup {h.bits:#x} is not normal")

    def product(self, h: Subgroup, k: Subgroup) -> Subgroup:
        """The subgroup generated by ``h`` and ``k`` (equal to ``HK`` if one is normal)."""
        return self.generate(h.members() + k.members())

    def conjugate(self, h: Subgroup, g: int) -> Subgroup:
        return Subgroup(_bits(self.conj(g, x) for x in h.members()))

    def all_subgroups(self) -> list[Subgroup]:
        """Every subgroup, by closing cyclic subgroups under joins."""
        cyclic = {self.generate([x]).bits for x in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for a in frontier:
                for c in cyclic:
                    if a | c != a:
                        j = self.generate(Subgroup(a | c).members()).bits
                        if j not in found:
                            new.add(j)
            found |= new
            frontier = new
        return sorted((Subgroup(b) for b in found), key=lambda s: (s.order, s.bits))

    def normal_subgroups(self) -> list[Subgroup]:
        return [h for h in self.all_subgroups() if self.is_normal(h)]

    def chief_series(self) -> list[list[Subgroup]]:
        """All maximal chains ``{e} = N_0 < ... < N_k = G`` of normal subgroups."""
        normals = self.normal_subgroups()
        covers = {
            a.bits: [b for b in normals if a < b and not any(a < c < b for c in normals)]
            for a in normals
        }
        out: list[list[Subgroup]] = []

        def walk(chain):
            top = chain[-1]
            if top.bits == self.whole.bits:
                out.append(list(chain))
                return
            for b in covers[top.bits]:
                walk(chain + [b])

        walk([self.trivial])
        return out

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


# constructors


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup.from_elements(list(range(n)), lambda a, b: (a + b) % n, f"C{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str = "") -> FiniteGroup:
    elems = list(itertools.product(range(g.order), range(h.order)))
    return FiniteGroup.from_elements(
        elems,
        lambda a, b: (g.mul(a[0], b[0]), h.mul(a[1], b[1])),
        name or f"{g.name}x{h.name}",
    )


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    out = cyclic(p)
    for _ in range(k - 1):
        out = direct_product(out, cyclic(p))
    return FiniteGroup(out.table, f"C{p}^{k}")


def semidirect_cyclic(m: int, k: int, n: int, name: str = "") -> FiniteGroup:
    """``C_m x| C_n`` with the generator of ``C_n`` acting by ``x -> x^k``."""
    if pow(k, n, m) != 1 % m:
        raise InvalidGroup(f"x -> x^{k} does not have order dividing {n} on C{m}")
    elems = [(a, b) for b in range(n) for a in range(m)]

    def mul(x, y):
        return ((x[0] + pow(k, x[1], m) * y[0]) % m, (x[1] + y[1]) % n)

    return FiniteGroup.from_elements(elems, mul, name or f"C{m}:{k}C{n}")


def dihedral(m: int) -> FiniteGroup:
    """The dihedral group of order ``2m``."""
    return semidirect_cyclic(m, -1 % m if m > 2 else 1, 2, f"D{m}")


def dicyclic(n: int) -> FiniteGroup:
    """``<a, x | a^(2n), x^2 = a^n, x a x^-1 = a^-1>`` of order ``4n``."""
    m = 2 * n
    elems = [(k, j) for j in range(2) for k in range(m)]

    def mul(x, y):
        (k1, j1), (k2, j2) = x, y
        if j1 == 0:
            return ((k1 + k2) % m, j2)
        if j2 == 0:
            return ((k1 - k2) % m, 1)
        return ((k1 - k2 + n) % m, 0)

    return FiniteGroup.from_elements(elems, mul, "Q8" if n == 2 else f"Dic{n}")


def permutation_group(gens: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Closure of permutations given in one-line notation."""
    gens = [tuple(g) for g in gens]
    deg = len(gens[0])
    ident = tuple(range(deg))
    seen, frontier = {ident}, [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(deg))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = sorted(seen)
    return FiniteGroup.from_elements(elems, lambda a, b: tuple(a[b[i]] for i in range(deg)), name)


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return cyclic(1)
    cyc = tuple(list(range(1, n)) + [0])
    swap = (1, 0, *range(2, n))
    return permutation_group([cyc, swap], f"S{n}")


def alternating(n: int) -> FiniteGroup:
    gens = [(1, 2, 0, *range(3, n))] if n >= 3 else [tuple(range(n))]
    if n >= 4:
        gens.append(tuple(list(range(1, n)) + [0]) if n % 2 else (0, 2, 3, 1, *range(4, n)))
    return permutation_group(gens, f"A{n}")
