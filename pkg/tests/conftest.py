import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import settings

from apclab.exactpoly import BiPoly

settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")

XS, YS = sp.symbols("x y")


def to_sympy(f: BiPoly) -> sp.Expr:
    return sp.Add(*(sp.Rational(c.numerator, c.denominator) * XS**i * YS**j
                    for (i, j), c in f.items()))


def from_sympy(expr) -> BiPoly:
    poly = sp.Poly(sp.expand(expr), XS, YS)
    return BiPoly({(i, j): Fraction(int(c.p), int(c.q)) for (i, j), c in poly.terms()})


def sympy_f(p: int, q1: int, q2: int) -> BiPoly:
    """f rebuilt from the trigonometric quotients for beta and Im(y3).

    Works in cos r, cos t, sin r, sin t symbols, multiplies 1 - beta - Im(y3)^2
    through by the squared denominator and only then substitutes cos^2 = x,
    sin^2 = 1 - x.  Shares no code with the package.
    """
    cr, ct, sr, st = sp.symbols("cr ct sr st")
    Q = p * (p - 2 * q1 - q2) * cr**2 * ct**2 + q1 * (p - q2)
    P = p * (p - 3 * q1) * ct**2 * cr**2 + q1 * (p + q1)
    num = (((q1 - q2) * cr**2 + p - 3 * q1) * p * cr**2 * ct**4
           + ((-p * q2 + q1 * (q1 + 3 * q2)) * cr**2 + p * q1 * sr**2) * ct**2
           - q1**2 * st**2 - q1 * q2)
    # 1 - P/Q - Im(y3)^2 times (2 sr st ct Q)^2, written without dividing by Q
    expr = sp.expand((Q - P) * Q * 4 * sr**2 * st**2 * ct**2 - num**2)
    expr = expr.subs({sr**2: 1 - cr**2, st**2: 1 - ct**2})
    expr = sp.expand(expr).subs({cr**2: XS, ct**2: YS})
    return from_sympy(sp.expand(expr))


def seeded_rng(seed: int) -> random.Random:
    print(f"seed={seed}")
    return random.Random(seed)


@pytest.fixture
def rng(request):
    seed = getattr(request, "param", 20240601)
    return seeded_rng(seed)


# acceptance lines, collected by tests/test_acceptance.py and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":abc"))):
            terminalreporter.write_line(line)
