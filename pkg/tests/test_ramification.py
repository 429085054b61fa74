import random
from fractions import Fraction

import pytest

from conftest import chain_prime, random_values
from ramicalc.errors import (
    InvalidGroup,
    InvalidInertia,
    NonMonotoneValues,
    NonNormalSubgroup,
    NotASubgroup,
    PGroupViolation,
)
from ramicalc.lambda_calc import LambdaP, compose, compose_chain, identity, make_lambda, pw_equals
from ramicalc.ramification import (
    FiniteGroup,
    canonical_tower,
    cyclic,
    dihedral,
    elementary_abelian,
    enumerate_towers,
    groups_of_order,
    herbrand_degree_check,
    herbrand_galois,
    herbrand_relative,
    make_filtration_inertia,
    ramification_filtration,
    small_groups,
    symmetric,
    validate_inertia,
    verify_tower,
)
from ramicalc.ramification.inertia import inertia_from_v, require_valid
from ramicalc.ramification.tower import Tower
from ramicalc.valuation import INF, LogValue

F = Fraction


def s3_inertia(g):
    """3-cycles at 3^-1, transpositions at 1."""
    vals = []
    for k in range(g.order):
        o = g.element_order(k)
        vals.append(INF if o == 1 else (F(1) if o == 3 else F(0)))
    return inertia_from_v(vals)


def order_two(g):
    return next(g.generate([k]) for k in range(g.order) if g.element_order(k) == 2)


@pytest.fixture
def s3():
    g = symmetric(3)
    return g, s3_inertia(g)


@pytest.fixture
def klein():
    g = elementary_abelian(2, 2)
    n1 = g.generate([1])
    return g, make_filtration_inertia(g, [g.trivial, n1, g.whole], [LogValue(2), LogValue(1)])


def test_group_tables_validated():
    with pytest.raises(InvalidGroup):
        FiniteGroup(((0, 1), (1, 1)))
    with pytest.raises(InvalidGroup):
        FiniteGroup(((0, 1, 2), (1, 2, 0), (2, 1, 0)))
    assert symmetric(3).order == 6 and dihedral(4).order == 8


def test_catalog_counts():
    expected = {1: 1, 2: 1, 4: 2, 6: 2, 8: 5, 9: 2, 12: 5, 16: 14}
    for n, k in expected.items():
        assert len(groups_of_order(n)) == k


def test_subgroup_checks(s3):
    g, _ = s3
    assert len(g.all_subgroups()) == 6
    assert len(g.normal_subgroups()) == 3
    with pytest.raises(NotASubgroup):
        t = next(k for k in range(6) if g.element_order(k) == 2)
        c = next(k for k in range(6) if g.element_order(k) == 3)
        g.subgroup([g.identity, t, c])


def test_validate_inertia_examples(s3):
    assert validate_inertia(cyclic(1), inertia_from_v([INF]))["valid"]
    assert validate_inertia(cyclic(2), inertia_from_v([INF, 1]))["valid"]
    g, i = s3
    assert validate_inertia(g, i)["valid"]


def test_validate_inertia_reports_violations(s3):
    g, _ = s3
    vals = [INF if g.element_order(k) == 1 else F(1) for k in range(g.order)]
    t = next(k for k in range(g.order) if g.element_order(k) == 2)
    vals[t] = F(3)
    rep = validate_inertia(g, inertia_from_v(vals))
    axioms = {v["axiom"] for v in rep["violations"]}
    assert not rep["valid"] and axioms == {"conjugation"}
    # two transpositions below their product
    swapped = [INF if g.element_order(k) == 1 else (F(2) if g.element_order(k) == 2 else F(1)) for k in range(g.order)]
    rep = validate_inertia(g, inertia_from_v(swapped))
    assert {v["axiom"] for v in rep["violations"]} == {"ultrametric"}
    with pytest.raises(InvalidInertia):
        require_valid(g, inertia_from_v(vals))
    bad = inertia_from_v([0] + [1] * 5)
    assert "identity" in {v["axiom"] for v in validate_inertia(g, bad)["violations"]}


def test_filtration_examples(s3):
    z2 = cyclic(2)
    filt = ramification_filtration(z2, inertia_from_v([INF, 1]), 2)
    assert [(r.v, h.order) for r, h in filt] == [(INF, 1), (1, 2)]
    g, i = s3
    assert [(r.v, h.order) for r, h in ramification_filtration(g, i, 3)] == [(INF, 1), (1, 3), (0, 6)]
    with pytest.raises(PGroupViolation):
        ramification_filtration(g, i, 2)


def test_herbrand_examples(s3):
    assert pw_equals(herbrand_galois(cyclic(1), inertia_from_v([INF]), 5), identity(5))
    h = herbrand_galois(cyclic(2), inertia_from_v([INF, 1]), 2)
    assert h == make_lambda(2, [1], [0, 1])
    assert h.pw.pieces == ((2, 0), (1, 1))
    g, i = s3
    f = herbrand_galois(g, i, 3)
    assert f.breaks_v == (1,) and f.local_degrees == [1, 3]
    assert herbrand_degree_check(g, i, 3)["pass"]


def test_herbrand_relative_examples(s3):
    g, i = s3
    full = herbrand_galois(g, i, 3)
    assert pw_equals(herbrand_relative(g, i, g.whole, 3), identity(3))
    assert pw_equals(herbrand_relative(g, i, g.trivial, 3), full)
    assert pw_equals(herbrand_relative(g, i, order_two(g), 3), full)


def test_transitivity_consistency(klein):
    g, i = klein
    n1 = g.generate([1])
    direct = herbrand_relative(g, i, g.trivial, 2)
    upper = herbrand_relative(g, i, n1, 2)
    lower = herbrand_relative(g, i, g.trivial, 2, over=n1)
    assert pw_equals(compose(upper, lower), direct)


def test_make_filtration_inertia():
    z4 = cyclic(4)
    chain = [z4.trivial, z4.generate([2]), z4.whole]
    i = make_filtration_inertia(z4, chain, [LogValue(2), LogValue(1)])
    assert validate_inertia(z4, i)["valid"]
    assert len(ramification_filtration(z4, i, 2)) == 3
    const = make_filtration_inertia(z4, [z4.trivial, z4.whole], [LogValue.one()])
    assert {x.v for x in const.values} == {INF, 0}
    s = symmetric(3)
    with pytest.raises(NonNormalSubgroup):
        make_filtration_inertia(s, [s.trivial, order_two(s), s.whole], [LogValue(2), LogValue(1)])
    with pytest.raises(NonMonotoneValues):
        make_filtration_inertia(z4, chain, [LogValue(1), LogValue(2)])


def test_s3_tower(s3):
    g, i = s3
    h = order_two(g)
    t = canonical_tower(g, i, h, 3)
    assert len(t.steps) == 1
    step = t.steps[0]
    assert step.breaks_v == (1,) and step.degree == 3
    assert t.final_trivial
    rep = verify_tower(t, herbrand_relative(g, i, h, 3))
    assert rep["pass"] and len(rep["checks"]) == 4
    assert enumerate_towers(g, i, h, 3) == [tuple(x.bits for x in t.chain)]


def test_klein_tower(klein):
    g, i = klein
    t = canonical_tower(g, i, g.trivial, 2)
    assert [s.breaks_v for s in t.steps] == [(2,), (2,)]
    total = herbrand_galois(g, i, 2)
    assert verify_tower(t, total)["pass"]
    assert pw_equals(compose_chain(list(t.steps), 2), total)


def test_tower_for_whole_group(s3):
    g, i = s3
    t = canonical_tower(g, i, g.whole, 3)
    assert t.steps == () and t.final_trivial
    assert verify_tower(t, LambdaP.identity(3))["pass"]


def test_perturbed_tower_fails(klein):
    g, i = klein
    t = canonical_tower(g, i, g.trivial, 2)
    bent = make_lambda(2, [3], [0, 1])
    broken = Tower(t.p, t.chain, t.s_indices, (bent, t.steps[1]), t.final)
    rep = verify_tower(broken, herbrand_galois(g, i, 2))
    names = {c["name"]: c["pass"] for c in rep["checks"]}
    assert not rep["pass"]
    assert not names["steps form the canonical decomposition"]
    assert not names["steps recompose to the total Herbrand function"]


def test_conjugate_subgroups_same_tower_data(s3):
    g, i = s3
    twos = [h for h in g.all_subgroups() if h.order == 2]
    towers = [canonical_tower(g, i, h, 3) for h in twos]
    assert len(twos) == 3
    assert len({tuple(t.steps) for t in towers}) == 1


def test_chains_without_admissible_prime_raise():
    rng = random.Random(11)
    seen = 0
    for g in groups_of_order(12):
        for chain in g.chief_series():
            if chain_prime(chain) is not None:
                continue
            seen += 1
            for p in (2, 3):
                vals = [LogValue(v) for v in random_values(rng, chain, p)]
                i = make_filtration_inertia(g, chain, vals)
                with pytest.raises(PGroupViolation):
                    herbrand_galois(g, i, p)
    assert seen == 14


def test_towers_unique_small_groups():
    rng = random.Random(5)
    for g in small_groups(8):
        for chain in g.chief_series()[:2]:
            p = chain_prime(chain)
            vals = [LogValue(v) for v in random_values(rng, chain, p)]
            i = make_filtration_inertia(g, chain, vals)
            for h in g.all_subgroups():
                t = canonical_tower(g, i, h, p)
                assert verify_tower(t, herbrand_relative(g, i, h, p))["pass"]
                assert enumerate_towers(g, i, h, p) == [tuple(x.bits for x in t.chain)]
