import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_lambda
from ramicalc.errors import (
    AlphaZeroNonzero,
    DomainMismatch,
    InvalidPiecewise,
    NonIncreasingAlphas,
    NonMonotoneBreaks,
    NotInLambdaP,
    OutOfDomain,
)
from ramicalc.lambda_calc import (
    LambdaP,
    PiecewiseMonomial,
    PiecewisePower,
    build_piecewise,
    canonical_factorization,
    chain_condition,
    compose,
    compose_chain,
    enumerate_simple_chains,
    identity,
    invert,
    is_simple,
    make_lambda,
    monomial,
    piecewise_from_json,
    pw_equals,
)
from ramicalc.valuation import INF, LogValue

F = Fraction


@pytest.fixture
def two_break():
    return make_lambda(2, [3, 1], [0, 1, 2])


def test_coefficients_of_two_break(two_break):
    assert two_break.coeffs_v == (5, 2, 0)
    assert [c.v for c in two_break.coefficients] == [5, 2, 0]
    assert two_break.local_degrees == [1, 2, 4]
    assert two_break.degree == 4


def test_eval_examples(two_break):
    assert two_break.eval(LogValue(4)) == LogValue(9)
    assert two_break.eval(LogValue(1)) == LogValue(4)
    assert two_break.pw.piece_at(F(1, 2)) == (4, 0)
    assert identity(3).eval(LogValue(F(7, 3))) == LogValue(F(7, 3))
    with pytest.raises(OutOfDomain):
        two_break.eval(LogValue(-1))


def test_identity_and_single_break():
    ident = make_lambda(3, [], [0])
    assert ident.n == 0 and pw_equals(ident, identity(3))
    f = make_lambda(2, [1], [0, 1])
    assert f.pw.pieces == ((2, 0), (1, 1))


@pytest.mark.parametrize(
    "breaks, alphas, err",
    [
        ([1, 3], [0, 1, 2], NonMonotoneBreaks),
        ([3, 1], [0, 2, 1], NonIncreasingAlphas),
        ([3, 1], [1, 2, 3], AlphaZeroNonzero),
        ([0], [0, 1], NonMonotoneBreaks),
    ],
)
def test_make_lambda_validation(breaks, alphas, err):
    with pytest.raises(err):
        make_lambda(2, breaks, alphas)


def test_continuity_enforced():
    with pytest.raises(InvalidPiecewise):
        build_piecewise(2, [F(0), F(1), INF], [(F(2), F(0)), (F(1), F(5))])


def test_canonical_factorization_example(two_break):
    f1, f2 = canonical_factorization(two_break)
    assert (f1.breaks_v, f1.degree) == ((3,), 2)
    assert (f2.breaks_v, f2.degree) == ((2,), 2)
    assert chain_condition([f1, f2])
    assert f1.eval(LogValue(3)).v == 6
    assert f1.eval(LogValue(4)) == LogValue(7)
    assert f2.eval(LogValue(7)) == LogValue(9)
    assert pw_equals(compose(f2, f1), two_break)


def test_factorization_edge_cases():
    f = make_lambda(3, [2], [0, 1])
    assert canonical_factorization(f) == [f]
    assert canonical_factorization(LambdaP.identity(5)) == []
    assert not is_simple(LambdaP.identity(2))
    assert is_simple(f)
    assert not is_simple(make_lambda(2, [3, 1], [0, 1, 2]))


def test_compose_monomials_leaves_lambda_p():
    g = compose(monomial(2, 2, 0), monomial(2, 1, 1))
    assert g.pieces == ((2, 2),)
    with pytest.raises(NotInLambdaP):
        LambdaP.from_pw(g)


def test_compose_domain_mismatch():
    narrow = monomial(2, 1, 0, vmin=F(1))
    with pytest.raises(DomainMismatch):
        compose(narrow, identity(2))


def test_invert_examples():
    assert pw_equals(invert(identity(2)), identity(2))
    sq = monomial(2, 2, 0)
    assert invert(sq).pieces == ((F(1, 2), 0),)
    f = make_lambda(2, [1], [0, 1])
    g = invert(f)
    assert g.cuts == (2,)
    assert g.pieces[-1] == (1, -1)
    for k in range(10):
        r = LogValue(F(k, 3))
        assert g.eval(f.eval(r)) == r


def test_piecewise_monomial_allows_any_exponent():
    h = build_piecewise(2, [F(0), F(1)], [(F(-1), F(1, 2))])
    assert type(h) is PiecewiseMonomial
    assert type(identity(2)) is PiecewisePower
    assert pw_equals(piecewise_from_json(h.to_json()), h)


def test_random_suite_properties():
    rng = random.Random(7)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        f = random_lambda(rng, p, rng.randint(0, 4))
        g = random_lambda(rng, p, rng.randint(0, 4))
        assert pw_equals(compose(identity(p), f), f)
        assert pw_equals(invert(invert(f)), f)
        assert pw_equals(compose(f, invert(f)), identity(p))
        LambdaP.from_pw(compose(f, g))
        for k in range(20):
            r = LogValue(F(k, 4))
            assert f.eval(r) == f.max_form(r)


def test_chain_condition_is_what_makes_it_unique(two_break):
    assert len(enumerate_simple_chains(two_break)) == 1
    loose = enumerate_simple_chains(two_break, require_chain_condition=False)
    assert len(loose) == 2
    assert any(not chain_condition(c) for c in loose)


lambdas = st.builds(
    lambda seed, p, n: random_lambda(random.Random(seed), p, n),
    st.integers(0, 10**6),
    st.sampled_from([2, 3, 5]),
    st.integers(0, 4),
)


@settings(max_examples=60, deadline=None)
@given(lambdas)
def test_factors_recompose(f):
    factors = canonical_factorization(f)
    assert all(is_simple(g) for g in factors)
    assert chain_condition(factors)
    assert pw_equals(compose_chain(factors, f.p), f)
    assert LambdaP.from_pw(f.pw) == f


@settings(max_examples=60, deadline=None)
@given(lambdas)
def test_json_round_trip(f):
    assert make_lambda(f.p, f.to_json()["breaks_v"], f.alphas) == f
