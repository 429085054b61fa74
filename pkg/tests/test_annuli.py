import random
from fractions import Fraction

import pytest

from conftest import exact, skeleton
from ramicalc import annuli
from ramicalc.annuli import (
    MINUS,
    PLUS,
    AnnulusMorphism,
    annulus_degree,
    boundary_slope,
    break_flows,
    critical_directions,
    different_identity_check,
    direction_data,
    export_flows,
    gauss_directions,
    gauss_harmonicity,
    generic_direction,
    sigma_composition_check,
    sigma_epsilon,
)
from ramicalc.errors import (
    EmptyData,
    IdentityViolation,
    MultipleSlopesOnAnnulus,
    NonFiniteAtGaussPoint,
    NotFinite,
    NotOnUnitCircle,
    SchemaError,
    UnresolvedDirections,
)
from ramicalc.lambda_calc import build_piecewise
from ramicalc.disc.series import ValuedSeries
from ramicalc.valuation import INF, LogValue, padic_valuation

F = Fraction
C2 = {2: 1, 1: 2}  # T^2 + 2T: exact stand-in with a single break


def near(f, outward=False):
    return AnnulusMorphism.near_boundary(f, outward)


def suite():
    out = []
    for p in (2, 3):
        out += [(p, {d: 1}) for d in range(1, 7)]
        out.append((p, {p: 1, 1: p * p}))
        out.append((p, {p * p: 1, p: p**2, 1: p**4}))
    out.append((2, {4: 1, 2: 4, 1: 16}))
    return out


SUITE = suite()
IDS = [f"p{p}-" + "+".join(f"{c}T{k}" for k, c in sorted(cs.items(), reverse=True)) for p, cs in SUITE]


def test_annulus_degree_examples():
    assert annulus_degree(near(exact(2, {5: 1}))) == 5
    c = skeleton(2, {2: 0, 1: F(1, 2)})
    assert annulus_degree(near(c)) == 2
    with pytest.raises(MultipleSlopesOnAnnulus, match="1/2"):
        annulus_degree(AnnulusMorphism(c, F(3, 4)))
    with pytest.raises(NotFinite):
        annulus_degree(near(ValuedSeries.exact(2, {-1: 1}, laurent=True)))
    with pytest.raises(SchemaError):
        AnnulusMorphism(c, F(-1))


def test_sigma_epsilon_examples():
    assert sigma_epsilon(near(exact(2, {3: 1}))) == (2, LogValue(0))
    assert sigma_epsilon(near(exact(2, {2: 1}))) == (1, LogValue(1))
    assert sigma_epsilon(near(skeleton(2, {2: 0, 1: F(1, 2)}))) == (0, LogValue(F(1, 2)))


def test_sigma_infinity_reads_inverted_coordinates():
    # U = 1/T gives U^d: sigma = d - 1 and |eps| = |d|
    for p, d in [(2, 2), (2, 3), (3, 3), (5, 4)]:
        s, eps = sigma_epsilon(near(exact(p, {d: 1}), outward=True))
        assert s == d - 1 and eps == LogValue(padic_valuation(d, p))


@pytest.mark.parametrize("f, g, p", [({2: 1}, {3: 1}, 5), ({2: 1, 1: 2}, {2: 1}, 2), ({4: 1, 1: 3}, {1: 1}, 3)])
def test_sigma_composition_examples(f, g, p):
    rep = sigma_composition_check(exact(p, f), exact(p, g))
    assert rep["pass"]
    if g == {1: 1}:
        assert rep["sigma_composite"] == rep["sigma_f"]


def test_sigma_composition_random():
    rng = random.Random(30)
    done = 0
    while done < 30:
        p = rng.choice([2, 3, 5])
        f = {k: F(rng.choice([1, p, p * p, 2 * p, 3])) for k in rng.sample(range(1, 5), rng.randint(1, 3))}
        g = {k: F(rng.choice([1, p, p * p, 2 * p, 3])) for k in rng.sample(range(1, 4), rng.randint(1, 2))}
        f[max(f)] = F(1)
        g[max(g)] = F(1)
        try:
            rep = sigma_composition_check(exact(p, f), exact(p, g))
        except MultipleSlopesOnAnnulus:
            continue
        assert rep["pass"], (p, f, g, rep)
        done += 1


def test_break_flow_examples():
    fl = break_flows(near(exact(2, {2: 1})))
    assert len(fl) == 1 and fl[0].pieces == ((0, 1),) and fl.degrees == (1, 2)
    fl = break_flows(near(skeleton(2, {2: 0, 1: F(1, 2)})))
    assert fl[0].pieces == ((-1, F(1, 2)),)
    assert boundary_slope(fl[0]) == -1
    assert len(break_flows(near(exact(3, {5: 1})))) == 0


def test_boundary_slope_examples():
    assert boundary_slope(build_piecewise(2, [F(0), F(1)], [(F(0), F(1))])) == 0
    assert boundary_slope(build_piecewise(2, [F(0), F(1)], [(F(1), F(1, 2))])) == 1
    two = build_piecewise(2, [F(0), F(1, 3), F(1)], [(F(-1), F(1)), (F(2), F(0))])
    assert boundary_slope(two) == -1


@pytest.mark.parametrize("p, coeffs", SUITE, ids=IDS)
def test_different_identity_suite(p, coeffs):
    for outward in (False, True):
        rep = different_identity_check(near(exact(p, coeffs), outward))
        assert rep["exact_identity"] and rep["slope_identity"], rep


def test_different_identity_examples():
    rep = different_identity_check(near(exact(2, {2: 1})))
    assert rep["pass"] and rep["lhs"] == rep["rhs"] and (rep["sigma"], rep["eps_v"]) == (1, "1")
    rep = different_identity_check(near(exact(3, {4: 1})))
    assert rep["pass"] and rep["lhs"]["pieces"][0]["exponent"] == "0"
    rep = different_identity_check(near(skeleton(2, {2: 0, 1: F(1, 2)})))
    assert rep["pass"] and rep["sigma"] - rep["d"] + 1 == -1


def test_different_identity_negative_control(monkeypatch):
    a = AnnulusMorphism(skeleton(2, {2: 0, 1: F(1, 2)}), F(1, 4))
    assert different_identity_check(a, strict=True)["pass"]
    real = annuli.sigma_epsilon
    monkeypatch.setattr(annuli, "sigma_epsilon", lambda x: (real(x)[0] + 1, real(x)[1]))
    rep = different_identity_check(a)
    assert not rep["exact_identity"] and not rep["slope_identity"]
    with pytest.raises(IdentityViolation, match="lhs 0, 1/2"):
        different_identity_check(a, strict=True)


def test_direction_data_examples():
    c = exact(2, C2)
    # recentred at 1 this is u^2 + 4u: |4| < |2| keeps sigma at 1 and the flow constant
    x = direction_data(c, 1)
    assert (x.d, x.sigma, x.eps_v) == (2, 1, 1) and x.flows[0].pieces == ((0, 1),)
    assert x.different["pass"]
    x = direction_data(exact(2, {2: 1}), INF)
    assert (x.d, x.sigma) == (2, 1)
    for a in (1, 2, INF):
        x = direction_data(exact(3, {1: 1}), a)
        assert (x.d, x.sigma, x.n) == (1, 0, 0)
    assert direction_data(c, 2) == direction_data(c, 0)
    with pytest.raises(NotOnUnitCircle):
        direction_data(c, F(5, 2))
    with pytest.raises(NonFiniteAtGaussPoint):
        direction_data(exact(2, {2: 2}), 1)


def test_direction_recentering_merges_conjugates():
    # T^2 + 2T at a = 1: the conjugate root -2 - 1 lies in the same class
    x = direction_data(exact(2, C2), 1)
    assert x.d == 2


def test_generic_direction_law():
    for p, coeffs in SUITE:
        f = exact(p, coeffs)
        gen = generic_direction(f)
        assert gen.sigma == 0
        assert all(s == -1 for s in gen.slopes)


def test_critical_directions():
    assert critical_directions(exact(2, C2)) == [1]
    assert critical_directions(exact(3, {4: 1, 1: 1})) == [2]
    assert critical_directions(exact(3, {3: 1, 2: 1, 1: 1})) == [1]
    # f_[1] / 3 reduces to T^2 + 1, irreducible over F_3
    with pytest.raises(UnresolvedDirections):
        critical_directions(exact(3, {3: 1, 1: 3}))
    with pytest.raises(UnresolvedDirections):
        gauss_harmonicity(exact(3, {5: 2, 1: 1}))


def test_harmonicity_examples():
    rep = gauss_harmonicity(exact(2, {1: 1}))
    assert rep["pass"] and rep["riemann_hurwitz"]["lhs"] == 0
    rep = gauss_harmonicity(exact(2, {2: 1}))
    assert rep["riemann_hurwitz"] == {"lhs": 2, "rhs": 2, "generic_sigma": 0, "pass": True}
    sig = {d["label"]: d["sigma"] for d in rep["directions"]}
    assert sig == {"0": 1, "inf": 1}


def test_harmonicity_t2_plus_ct():
    rep = gauss_harmonicity(skeleton(2, {2: 0, 1: F(1, 2)}))
    assert rep["consistent_conventions"] == [PLUS] and rep["pass"]
    layer1 = rep["conventions"][PLUS]["layers"][1]
    assert layer1["lhs"] == "2" and layer1["terms"] == {"0": "0", "inf": "2"} and layer1["generic"] == "0"
    minus1 = rep["conventions"][MINUS]["layers"][1]
    assert minus1["generic"] == "-2" and not minus1["pass"]
    layer0 = rep["conventions"][PLUS]["layers"][0]
    assert layer0["lhs"] == "0" and set(layer0["terms"].values()) == {"0"}
    slopes = {d["label"]: d["boundary_slopes"] for d in rep["directions"]}
    assert slopes == {"0": ["-1"], "inf": ["1"]}
    assert not gauss_harmonicity(skeleton(2, {2: 0, 1: F(1, 2)}), MINUS)["pass"]


@pytest.mark.parametrize("p, coeffs", SUITE, ids=IDS)
def test_harmonicity_suite(p, coeffs):
    rep = gauss_harmonicity(exact(p, coeffs))
    assert rep["riemann_hurwitz"]["pass"]
    assert rep["generic_closed_form"]["pass"]
    assert rep["different_identities"]
    assert PLUS in rep["consistent_conventions"]
    has_flows = any(d["flows"] for d in rep["directions"])
    assert rep["consistent_conventions"] == ([PLUS] if has_flows else [PLUS, MINUS])


def test_harmonicity_random_resolved():
    rng = random.Random(77)
    checked = 0
    for _ in range(120):
        p = rng.choice([2, 3])
        deg = rng.randint(2, 6)
        coeffs = {k: F(rng.choice([1, 2, 3, 4, 6, 8, 9, 27])) for k in rng.sample(range(1, deg), rng.randint(0, deg - 1))}
        coeffs[deg] = F(1)
        try:
            rep = gauss_harmonicity(exact(p, coeffs))
        except UnresolvedDirections:
            continue
        assert rep["pass"], (p, coeffs)
        checked += 1
    assert checked >= 40


def test_export_flows():
    dirs = gauss_directions(exact(2, C2))
    text = export_flows(dirs, 3)
    rows = [r.split(",") for r in text.splitlines()]
    assert rows[0] == ["rho_v", "0:b_1_v", "a=1:b_1_v", "inf:b_1_v", "generic:b_1_v"]
    assert [r[0] for r in rows[1:]] == ["0", "1/2", "1"]
    assert rows[2][1] == "1/2"
    gen = [generic_direction(skeleton(2, {2: 0, 1: F(1, 2)}))]
    rows = export_flows(gen, 5, window_v=F(1, 4)).splitlines()[1:]
    assert rows == [f"{t},{F(1, 2) - t}" for t in (0, F(1, 16), F(1, 8), F(3, 16), F(1, 4))]
    with pytest.raises(EmptyData):
        export_flows(gauss_directions(exact(3, {1: 1})), 3)
    with pytest.raises(SchemaError):
        export_flows(dirs, 1)
