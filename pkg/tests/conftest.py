import random
from fractions import Fraction

import pytest

from ramicalc.disc.series import ValuedSeries
from ramicalc.lambda_calc import LambdaP

ACCEPTANCE_LINES: list[str] = []


def exact(p, coeffs, radius_v=0):
    return ValuedSeries.exact(p, {k: Fraction(c) for k, c in coeffs.items()}, radius_v)


def skeleton(p, coeffs_v, radius_v=0):
    return ValuedSeries.skeleton(p, {k: Fraction(c) for k, c in coeffs_v.items()}, radius_v)


def random_lambda(rng: random.Random, p: int, n: int) -> LambdaP:
    """Breaks drawn from small positive rationals, alphas with random gaps."""
    vs = set()
    while len(vs) < n:
        vs.add(Fraction(rng.randint(1, 40), rng.randint(1, 6)))
    alphas = [0]
    for _ in range(n):
        alphas.append(alphas[-1] + rng.randint(1, 2))
    return LambdaP(p, tuple(sorted(vs, reverse=True)), tuple(alphas))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def primes_dividing(n):
    return [q for q in (2, 3, 5, 7, 11, 13) if n % q == 0]


def chain_prime(chain):
    """The prime for which every member below the top is a p-group, if any."""
    from ramicalc.valuation import is_power_of

    orders = [h.order for h in chain[1:-1]] or [1]
    top = chain[-1].order
    for q in primes_dividing(top) or [2]:
        if all(is_power_of(o, q) for o in orders):
            return q
    return None


def random_values(rng: random.Random, chain, p):
    """Strictly increasing values (decreasing v); value 1 on top unless the top is a p-group."""
    from ramicalc.valuation import is_power_of

    steps = len(chain) - 1
    top_is_p = is_power_of(chain[-1].order, p)
    vs = sorted({Fraction(rng.randint(1, 60), rng.randint(1, 4)) for _ in range(4 * steps)}, reverse=True)
    while len(vs) < steps:
        vs.append(vs[-1] / 2)
    picked = sorted(rng.sample(vs, steps), reverse=True)
    if not top_is_p:
        picked[-1] = Fraction(0)
        if steps > 1 and picked[-2] == 0:
            picked[-2] = Fraction(1, 7)
    return picked


def harmonic_suite(primes=(2, 3)):
    """``(label, series)``: T^d (d <= 6), T^p, T^p + cT and T^(p^2) + c1 T^p + c2 T.

    The T^p + cT family appears twice: exactly (c = p^2) and in skeleton form
    with |p| < |c| < 1.  The two-break member uses v(c1) = 2, v(c2) = 4.
    """
    out = []
    for p in primes:
        out += [(f"p={p} T^{d}", exact(p, {d: 1})) for d in range(1, 7) if d != p]
        out.append((f"p={p} T^p", exact(p, {p: 1})))
        out.append((f"p={p} T^p+{p * p}T", exact(p, {p: 1, 1: p * p})))
        out.append((f"p={p} T^p+cT, v(c)=1/2", skeleton(p, {p: 0, 1: Fraction(1, 2)})))
        out.append((f"p={p} T^p2+c1T^p+c2T", exact(p, {p * p: 1, p: p**2, 1: p**4})))
    return out
