"""Named constructions of every group of order at most 16 (up to isomorphism)."""

from __future__ import annotations

import itertools

from .groups import (
    FiniteGroup,
    alternating,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    semidirect_cyclic,
    symmetric,
)


def _named(g: FiniteGroup, name: str) -> FiniteGroup:
    return FiniteGroup(g.table, name, g.labels)


def _smallgroup_16_3() -> FiniteGroup:
    # (C4 x C2) x| C2 with the involution a -> ab, b -> b
    elems = list(itertools.product(range(4), range(2), range(2)))

    def act(i, j, c):
        return (i, (j + i * c) % 2)

    def mul(x, y):
        i2, j2 = act(y[0], y[1], x[2])
        return ((x[0] + i2) % 4, (x[1] + j2) % 2, (x[2] + y[2]) % 2)

    return FiniteGroup.from_elements(elems, mul, "(C4xC2):C2")


def _pauli() -> FiniteGroup:
    # i^k X^a Z^b with Z X = -X Z
    elems = list(itertools.product(range(4), range(2), range(2)))

    def mul(x, y):
        return ((x[0] + y[0] + 2 * x[2] * y[1]) % 4, x[1] ^ y[1], x[2] ^ y[2])

    return FiniteGroup.from_elements(elems, mul, "Pauli")


def groups_of_order(n: int) -> list[FiniteGroup]:
    """One representative per isomorphism class, for ``1 <= n <= 16``."""
    c = cyclic
    table = {
        1: lambda: [c(1)],
        2: lambda: [c(2)],
        3: lambda: [c(3)],
        4: lambda: [c(4), _named(elementary_abelian(2, 2), "C2^2")],
        5: lambda: [c(5)],
        6: lambda: [c(6), _named(symmetric(3), "S3")],
        7: lambda: [c(7)],
        8: lambda: [
            c(8),
            direct_product(c(4), c(2)),
            _named(elementary_abelian(2, 3), "C2^3"),
            dihedral(4),
            dicyclic(2),
        ],
        9: lambda: [c(9), _named(elementary_abelian(3, 2), "C3^2")],
        10: lambda: [c(10), dihedral(5)],
        11: lambda: [c(11)],
        12: lambda: [
            c(12),
            direct_product(c(6), c(2)),
            alternating(4),
            dihedral(6),
            _named(semidirect_cyclic(3, 2, 4), "Dic3"),
        ],
        13: lambda: [c(13)],
        14: lambda: [c(14), dihedral(7)],
        15: lambda: [c(15)],
        16: lambda: [
            c(16),
            direct_product(c(4), c(4)),
            direct_product(c(8), c(2)),
            _named(direct_product(direct_product(c(4), c(2)), c(2)), "C4xC2^2"),
            _named(elementary_abelian(2, 4), "C2^4"),
            dihedral(8),
            _named(dicyclic(4), "Q16"),
            _named(semidirect_cyclic(8, 3, 2), "SD16"),
            _named(semidirect_cyclic(8, 5, 2), "M16"),
            _named(semidirect_cyclic(4, 3, 4), "C4:C4"),
            _smallgroup_16_3(),
            _named(direct_product(dihedral(4), c(2)), "D4xC2"),
            _named(direct_product(dicyclic(2), c(2)), "Q8xC2"),
            _pauli(),
        ],
    }
    if n not in table:
        raise ValueError(f"no catalog for order {n}")
    return table[n]()


def small_groups(max_order: int = 16) -> list[FiniteGroup]:
    return [g for n in range(1, max_order + 1) for g in groups_of_order(n)]


def order_24_samples() -> list[FiniteGroup]:
    """A handful of order-24 groups for the tower-uniqueness search."""
    return [
        symmetric(4),
        _named(direct_product(alternating(4), cyclic(2)), "A4xC2"),
        _named(direct_product(dicyclic(2), cyclic(3)), "Q8xC3"),
        dihedral(12),
        cyclic(24),
    ]
