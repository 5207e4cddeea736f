"""Acceptance suite.  Each test records one PASS/FAIL line; the lines are
echoed in an ``acceptance`` section at the end of the pytest run."""

import math
import random
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from apclab.eschenburg import (
    audit_discrepancies,
    build_f,
    build_g,
    cross_validate,
    default_workers,
    enumerate_admissible,
    is_admissible,
    k_regime_check,
    sample_triples,
)
from apclab.exactpoly import BiPoly, edge_restrict
from apclab.geomcheck import EXCLUDED, quasipositive_A0_check, verify_grid, w0_plane_110
from apclab.topology import PrimeMod4Certificate, ell, inhomogeneity_certificate
from apclab.torus import CANONICAL, enumerate_free, normalize_action

from conftest import ACCEPTANCE_LINES, XS, YS, from_sympy

SEED = 20240601
X, Y = BiPoly.x(), BiPoly.y()
FOUR_SQUARES = from_sympy(-4 * XS**2 * YS**2 * (XS * YS - 1) ** 2)


@contextmanager
def criterion(label, title):
    try:
        yield
    except BaseException as exc:
        line = f"criterion {label}: FAIL  {title}  ({type(exc).__name__}: {exc})"
        ACCEPTANCE_LINES.append(line.splitlines()[0])
        print(line)
        raise
    line = f"criterion {label}: PASS  {title}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def seeded_triples(count, avoid_k_zero):
    print(f"seed={SEED}")
    rng = random.Random(SEED)
    out = []
    while len(out) < count:
        t = tuple(rng.randint(-15, 15) for _ in range(3))
        if is_admissible(t) and not (avoid_k_zero and t[0] == t[1] + 2 * t[2]):
            out.append(t)
    return out


def test_criterion_1_classification_equivalence():
    with criterion("1", "theorem and polynomial verdicts agree for every triple up to bound 8"):
        report = cross_validate(8, workers=default_workers())
        assert report.rows and not report.exhausted
        assert not report.mismatches, report.mismatches[:5]


def test_criterion_2a_anchored_values():
    with criterion("2a", "anchored factorizations and the (3/10, 1/10) value"):
        assert build_f((1, -1, 1)) == FOUR_SQUARES
        assert build_f((2, 0, 1)) == FOUR_SQUARES
        value = build_f((2, -1, 1))(Fraction(3, 10), Fraction(1, 10))
        print("f(2,-1,1)(3/10, 1/10) =", value)
        assert value == Fraction(2714, 390625)
        assert value > 0 and abs(float(value) - 0.0069) < 5e-4


@pytest.mark.xfail(strict=True, reason="f(x, 0) = -q1^2 (q1 + q2)^2 vanishes identically when "
                   "(q1, q2) = (-1, 1), so f(1/2, 0) = 0 rather than 4p(2 - p)")
def test_criterion_2b_bottom_edge_value():
    with criterion("2b", "f_{p,-1,1}(1/2, 0) = 4p(2-p) for p in -2..4"):
        for p in range(-2, 5):
            got = build_f((p, -1, 1))(Fraction(1, 2), 0)
            assert got == 4 * p * (2 - p), f"p={p}: f(1/2, 0) = {got}, expected {4 * p * (2 - p)}"


def test_criterion_3_identities():
    with criterion("3", "Euler-type identities for f and g, critical-slope factorization"):
        for tri in seeded_triples(50, avoid_k_zero=True):
            p, q1, q2 = tri
            k = p - q1 - 2 * q2
            f, g = build_f(tri), build_g(tri)
            assert X * f.partial("x") - Y * f.partial("y") == -2 * k * Y * g, tri
            assert X * g.partial("x") - Y * g.partial("y") == Y * (p * X * Y + q1) ** 2 * k, tri
        critical = [tuple(t) for t in enumerate_admissible(8) if t.p == t.q1 + 2 * t.q2]
        assert critical
        for p, q1, q2 in critical:
            u = XS * YS - 1
            want = from_sympy(-u**2 * (u * q1**2 + q2 * u * q1 - 2 * XS * q2**2 * YS) ** 2)
            assert build_f((p, q1, q2)) == want, (p, q1, q2)


def test_criterion_4_boundary_formulas():
    with criterion("4", "edge restrictions of f and corner values of g"):
        for p, q1, q2 in seeded_triples(50, avoid_k_zero=False):
            f = build_f((p, q1, q2))
            s = X
            want = {
                "X0": -q1**2 * ((1 - s) * q1 + (p - 2 * q2) * s + q2) ** 2,
                "X1": -(p * (p - 2 * q1 - q2) * s**2 + (-p * q2 + 2 * q1**2 + 3 * q1 * q2) * s
                        - q1 * (q1 + q2)) ** 2,
                "Y0": BiPoly.constant(-q1**2 * (q1 + q2) ** 2),
                "Y1": -(p * (q1 - q2) * s**2 + (q1**2 + (-4 * p + 3 * q2) * q1 + p * (p - q2)) * s
                        + q1 * (p - q2)) ** 2,
            }
            for edge, poly in want.items():
                assert edge_restrict(f, edge).coeffs == poly.restrict_y(0).coeffs, edge
        for p, q1, q2 in seeded_triples(50, avoid_k_zero=True):
            g = build_g((p, q1, q2))
            corners = [g(0, 0), g(0, 1), g(1, 0), g(1, 1)]
            assert corners == [-q1**2 * (q1 + q2), -q1**2 * (p - q2), -q1**2 * (q1 + q2),
                               -(p - q1) ** 3], (p, q1, q2)


def test_criterion_5_table_audit():
    with criterion("5", "coefficient table differs only at (0,0), (2,3), (2,4)"):
        flagged = {(a.i, a.j) for a in audit_discrepancies()}
        assert flagged == {(0, 0), (2, 3), (2, 4)}


def test_criterion_6_hessian():
    with criterion("6", "Hessian eigenvalues at (0, 1) for (p, 1, p)"):
        for p in (1, 2, 3):
            f = build_f((p, 1, p))
            a = f.partial("x").partial("x")(0, 1)
            b = f.partial("x").partial("y")(0, 1)
            c = f.partial("y").partial("y")(0, 1)
            got = sorted(float(v) for v in sp.Matrix([[a, b], [b, c]]).eigenvals())
            root = math.sqrt(9 * p**4 + 24 * p**3 + 26 * p**2 + 8 * p + 1)
            want = [-2 * p**2 - 2 - 2 * root, -2 * p**2 - 2 + 2 * root]
            assert got == pytest.approx(want, abs=1e-10), p


def test_criterion_7_k_regime():
    with criterion("7", "k <= 0 certified for (2, 1-6k, 3), k = 1..10"):
        for k in range(1, 11):
            cert = k_regime_check((2, 1 - 6 * k, 3))
            assert cert.is_nonpositive and not cert.budget_exhausted, k


def test_criterion_8_torus():
    with criterion("8", "bound-5 torus enumeration and normalization"):
        e = enumerate_free(5)
        assert {c.as_tuple() for c in e.classes} == set(CANONICAL)
        assert set(CANONICAL) == {(2, 0, 1, 1, 0), (2, 0, 1, -1, 1)}
        assert normalize_action((2, 1, 0, 0, 1)).as_tuple() in CANONICAL
        assert normalize_action((-2, 0, -1, -1, 1)).as_tuple() in CANONICAL


def test_criterion_9_topology():
    with criterion("9", "ell family, parity law, prime certificate 83"):
        for n in range(2, 11):
            for p in range(0, 11):
                assert ell(n, (p, 1, 1)) == p * n - (n + 1)
        pairs = [(a, b) for a in range(-50, 51) for b in range(-50, 51) if math.gcd(a, b) == 1]
        for n in (6, 8, 10):
            assert all(ell(n, (0, a, b)) % 2 == 1 for a, b in pairs), n
        cert = inhomogeneity_certificate(7, (13, 1, 1))
        assert isinstance(cert, PrimeMod4Certificate) and cert.prime == 83


def test_criterion_10_geometry():
    with criterion("10", "zero-plane residuals, grid construction, metric switch, A0"):
        print(f"seed={SEED}")
        rng = np.random.default_rng(SEED)
        for t, r in rng.uniform(0.05, math.pi / 2 - 0.05, size=(100, 2)):
            assert w0_plane_110(t, r).max_residual <= 1e-9, (t, r)
        for tri in sample_triples(SEED, 10, bound=8, exclude=EXCLUDED):
            for g in verify_grid(tri, grid=12):
                if g.f_sign >= 0:
                    assert g.constructed, (tuple(tri), g.to_json())
                    assert g.max_residual <= 1e-8 and g.wilking_after_switch <= 1e-8
                else:
                    assert not g.constructed
        rep = quasipositive_A0_check()
        assert rep.im_y3_roots_mirrored == pytest.approx([math.sqrt(2), 3 * math.sqrt(2) / 2],
                                                         abs=1e-10)
        assert sorted(rep.re_y3_squared) == pytest.approx([-8.5, -4], abs=1e-10)
