"""Cohomogeneity-two generalized Eschenburg spaces E(p, q1, q2).

Admissibility and normalization of the integer parameters, the curvature
polynomial ``f`` in the coordinates ``x = cos^2 r``, ``y = cos^2 t``, the
auxiliary polynomial ``g``, and the two independent classifications of
almost positive curvature (closed-form criterion vs. certified sign of f).
"""

from __future__ import annotations

import enum
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Iterable

from .boxsign import DEFAULT_BUDGET, SignCertificate, decide_nonpositive
from .exactpoly import BiPoly, Box, rational_str

DEFAULT_SCAN_BOUND = 8

EXCEPTIONAL = ((0, 0, 1), (0, 1, 0), (1, 1, 0))
TABULATED = {
    (0, 0, 1): False,
    (0, 1, 0): False,
    (1, 1, 0): False,
    (0, -1, 1): True,
}


@dataclass(frozen=True, order=True)
class Triple:
    p: int
    q1: int
    q2: int

    def __iter__(self):
        return iter((self.p, self.q1, self.q2))

    def __str__(self) -> str:
        return f"({self.p},{self.q1},{self.q2})"


class Verdict(enum.Enum):
    ALMOST_POSITIVE = "AlmostPositive"
    NOT_ALMOST_POSITIVE = "NotAlmostPositive"


class Provenance(enum.Enum):
    THEOREM = "TheoremMain2"
    POLYNOMIAL = "PolynomialCriterion"
    TABULATED = "TabulatedSpecialCase"


@dataclass
class Classification:
    verdict: Verdict
    provenance: Provenance
    detail: str = ""
    certificate: SignCertificate | None = None

    @property
    def almost_positive(self) -> bool:
        return self.verdict is Verdict.ALMOST_POSITIVE


class BudgetExhausted(RuntimeError):
    """The sign decision could not complete; no verdict is claimed."""

    def __init__(self, triple: Triple, certificate: SignCertificate):
        super().__init__(f"sign decision for {triple} exhausted its budget")
        self.triple = triple
        self.certificate = certificate


def _triple(t) -> Triple:
    return t if isinstance(t, Triple) else Triple(*t)


def is_admissible(t) -> bool:
    p, q1, q2 = _triple(t)
    if gcd(q1, q2) != 1 or gcd(p - q1, q2) != 1 or gcd(q1, p - q2) != 1:
        return False
    return q2 > 0 or (q2 == 0 and q1 > 0)


def normalize(p: int, q1: int, q2: int) -> Triple:
    """Apply the global negation when needed to reach the sign convention."""
    if q2 == 0 and q1 == 0:
        raise ValueError("sign convention unreachable when q1 = q2 = 0")
    if q2 > 0 or (q2 == 0 and q1 > 0):
        return Triple(p, q1, q2)
    return Triple(-p, -q1, -q2)


def _require_admissible(t: Triple) -> None:
    # The tabulated special cases are named outright by the classification,
    # even (1, 1, 0), whose gcd(p - q1, q2) = gcd(0, 0) fails the strict test.
    if not is_admissible(t) and tuple(t) not in TABULATED:
        raise ValueError(f"{t} is not admissible")


# -- polynomials --------------------------------------------------------------

_X, _Y = BiPoly.x(), BiPoly.y()


def derive_f_oracle(t) -> BiPoly:
    """Numerator of 1 - beta - Im(y3)^2 over the squared common denominator.

    With Q the denominator of beta, P its numerator and N the numerator of
    Im(y3) (all rewritten in x = cos^2 r, y = cos^2 t), this is
    4 (1-x)(1-y) y Q (Q-P) - N^2.
    """
    p, q1, q2 = _triple(t)
    x, y = _X, _Y
    Q = p * (p - 2 * q1 - q2) * x * y + q1 * (p - q2)
    P = p * (p - 3 * q1) * x * y + q1 * (p + q1)
    N = (((q1 - q2) * x + (p - 3 * q1)) * p * x * y * y
         + ((-p * q2 + q1 * (q1 + 3 * q2)) * x + p * q1 * (1 - x)) * y
         - q1 * q1 * (1 - y) - q1 * q2)
    return 4 * (1 - x) * (1 - y) * y * Q * (Q - P) - N * N


def build_f(t) -> BiPoly:
    return derive_f_oracle(t)


def build_g(t) -> BiPoly:
    """(x f_x - y f_y) / (-2 (p - q1 - 2 q2) y), as an exact quotient."""
    t = _triple(t)
    p, q1, q2 = t
    k = p - q1 - 2 * q2
    if k == 0:
        raise ValueError("g is undefined when p = q1 + 2 q2")
    f = build_f(t)
    num = _X * f.partial("x") - _Y * f.partial("y")
    return num.exact_div(-2 * k * _Y)


def type123_loci(t) -> tuple[BiPoly, BiPoly, BiPoly]:
    p, q1, q2 = _triple(t)
    x, y = _X, _Y
    return p * x * y - q1, p * y * (1 - x) - q2, p * y - q1 - q2


def k_polynomial(t) -> BiPoly:
    """k in the coordinates (s, c) = (sin^2 r, cos^2 t), stored as (x, y)."""
    p, q1, q2 = _triple(t)
    s, c = _X, _Y
    return 4 * p * ((p - q1 - q2) * s - q2) * c + 4 * q2 * (q1 + q2)


def in_k_regime(t) -> bool:
    p, q1, q2 = _triple(t)
    return q1 + q2 < 0 and q1 + q2 <= p <= q2


def k_regime_check(t, budget: int = DEFAULT_BUDGET) -> SignCertificate:
    t = _triple(t)
    if not in_k_regime(t):
        raise ValueError(f"{t} is outside the regime q1 + q2 < 0, q1 + q2 <= p <= q2")
    return decide_nonpositive(k_polynomial(t), Box.unit(), budget)


# -- the printed coefficient table, kept as a cross-check -----------------------


@dataclass(frozen=True)
class TableEntry:
    """One printed coefficient.  ``stray`` names tokens that are not part of
    any well-formed expression; ``value`` is the reading with them removed."""

    i: int
    j: int
    value: Callable[[int, int, int], int]
    stray: tuple = ()


def _k(p, q1, q2):
    return p - q1 - 2 * q2


PRINTED_TABLE = (
    TableEntry(4, 4, lambda p, q1, q2: -p**2 * (q1 - q2) ** 2),
    TableEntry(3, 4, lambda p, q1, q2: -2 * p**2 * _k(p, q1, q2) * (q2 - q1)),
    TableEntry(3, 3, lambda p, q1, q2: -2 * p * (q1 - q2)
               * (2 * p**2 - 5 * p * q1 - 3 * p * q2 + q1**2 + 3 * q1 * q2)),
    TableEntry(2, 4, lambda p, q1, q2: -p**2 * _k(p, q1, q2) ** 2, stray=("ce",)),
    TableEntry(2, 3, lambda p, q1, q2: 2 * p * _k(p, q1, q2)
               * (3 * p * q1 - p * q2 - 6 * q1**2 - 2 * q1 * q2), stray=("p_1",)),
    TableEntry(2, 2, lambda p, q1, q2: (-p**2 * q1**2 + 6 * p**2 * q1 * q2 - p**2 * q2**2
                                        - 4 * p * q1**3 - 4 * p * q1 * q2**2 - q1**4
                                        - 6 * q1**3 * q2 - 9 * q1**2 * q2**2)),
    TableEntry(1, 3, lambda p, q1, q2: -2 * p * q1 * _k(p, q1, q2) ** 2),
    TableEntry(1, 2, lambda p, q1, q2: 2 * q1 * (2 * p + q1) * (q1 - q2) * _k(p, q1, q2)),
    TableEntry(1, 1, lambda p, q1, q2: 2 * q1 * (q1 + q2) * (p * q1 - p * q2 + q1**2 + q1 * q2)),
    TableEntry(0, 2, lambda p, q1, q2: -q1**2 * _k(p, q1, q2) ** 2),
    TableEntry(0, 1, lambda p, q1, q2: -2 * q1**2 * (q1 + q2) * _k(p, q1, q2)),
    TableEntry(0, 0, lambda p, q1, q2: -q1**2 * (q1 + q2)),
)


def printed_table_poly(t) -> BiPoly:
    """The printed table read with stray tokens dropped; absent entries are 0."""
    p, q1, q2 = _triple(t)
    return BiPoly({(e.i, e.j): e.value(p, q1, q2) for e in PRINTED_TABLE})


@dataclass(frozen=True)
class AuditLine:
    i: int
    j: int
    status: str  # "match", "typographic" or "value"
    note: str = ""

    @property
    def name(self) -> str:
        return f"c{self.i},{self.j}"


# Each entry is a polynomial of degree <= 4 in each of p, q1, q2, so agreement
# on a 5x5x5 integer grid is agreement as polynomials.
_AUDIT_GRID = tuple(product(range(-2, 3), repeat=3))


def coefficient_table_audit() -> list[AuditLine]:
    """Compare every printed coefficient with the derived one, as polynomials."""
    derived = {tri: build_f(tri) for tri in _AUDIT_GRID}
    by_key = {(e.i, e.j): e for e in PRINTED_TABLE}
    lines = []
    for i, j in product(range(5), repeat=2):
        entry = by_key.get((i, j))
        diff_at = next((tri for tri in _AUDIT_GRID
                        if derived[tri].coeff(i, j)
                        != (entry.value(*tri) if entry else 0)), None)
        if diff_at is not None:
            got = derived[diff_at].coeff(i, j)
            printed = entry.value(*diff_at) if entry else 0
            lines.append(AuditLine(i, j, "value",
                                   f"at {diff_at}: printed {printed}, derived {got}"))
        elif entry is not None and entry.stray:
            lines.append(AuditLine(i, j, "typographic",
                                   "stray token " + ", ".join(repr(s) for s in entry.stray)
                                   + "; matches once removed"))
        else:
            lines.append(AuditLine(i, j, "match"))
    return lines


def audit_discrepancies() -> list[AuditLine]:
    return [line for line in coefficient_table_audit() if line.status != "match"]


# -- classification ----------------------------------------------------------


def _branch(t: Triple) -> str | None:
    p, q1, q2 = t
    lo, hi = min(q1 + q2, q2), max(q1 + q2, q2)
    if lo <= 0 <= hi and lo <= p <= hi:
        return "0, p in [min(q1+q2, q2), max(q1+q2, q2)]"
    if p >= q1 + q2 > 0 and q1 >= 0:
        return "p >= q1+q2 > 0 and q1 >= 0"
    return None


def classify_theorem(t) -> Classification:
    t = _triple(t)
    _require_admissible(t)
    if tuple(t) in EXCEPTIONAL:
        return Classification(Verdict.NOT_ALMOST_POSITIVE, Provenance.THEOREM, "exceptional triple")
    branch = _branch(t)
    if branch is None:
        return Classification(Verdict.NOT_ALMOST_POSITIVE, Provenance.THEOREM, "no branch holds")
    return Classification(Verdict.ALMOST_POSITIVE, Provenance.THEOREM, branch)


def classify_polynomial(t, budget: int = DEFAULT_BUDGET) -> Classification:
    t = _triple(t)
    _require_admissible(t)
    if tuple(t) in TABULATED:
        v = Verdict.ALMOST_POSITIVE if TABULATED[tuple(t)] else Verdict.NOT_ALMOST_POSITIVE
        return Classification(v, Provenance.TABULATED, "outside the polynomial criterion")
    cert = decide_nonpositive(build_f(t), Box.unit(), budget)
    if cert.is_positive:
        wx, wy = cert.witness
        return Classification(Verdict.NOT_ALMOST_POSITIVE, Provenance.POLYNOMIAL,
                              f"f > 0 at ({wx}, {wy})", cert)
    if cert.budget_exhausted:
        raise BudgetExhausted(t, cert)
    return Classification(Verdict.ALMOST_POSITIVE, Provenance.POLYNOMIAL,
                          "f <= 0 on the unit square", cert)


def enumerate_admissible(bound: int) -> list[Triple]:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    r = range(-bound, bound + 1)
    return [Triple(p, q1, q2) for p, q1, q2 in product(r, r, r) if is_admissible((p, q1, q2))]


@dataclass
class ScanRow:
    triple: Triple
    theorem: Verdict
    poly: Verdict | None
    witness: tuple | None = None
    error: str | None = None

    @property
    def agree(self) -> bool:
        return self.poly is not None and self.theorem is self.poly

    def to_json(self) -> dict:
        row = {
            "p": self.triple.p, "q1": self.triple.q1, "q2": self.triple.q2,
            "theorem": self.theorem.value,
            "poly": self.poly.value if self.poly is not None else "Unknown",
            "agree": self.agree,
        }
        if self.witness is not None:
            row["witness"] = {"x": rational_str(self.witness[0]), "y": rational_str(self.witness[1])}
        if self.error is not None:
            row["error"] = self.error
        return row


@dataclass
class ScanReport:
    bound: int
    rows: list = field(default_factory=list)
    skipped: int = 0

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if not r.agree and r.poly is not None]

    @property
    def exhausted(self) -> list:
        return [r for r in self.rows if r.poly is None]


def scan_row(t, budget: int = DEFAULT_BUDGET) -> ScanRow:
    t = _triple(t)
    theorem = classify_theorem(t).verdict
    try:
        c = classify_polynomial(t, budget)
    except BudgetExhausted as exc:
        return ScanRow(t, theorem, None, error=str(exc))
    witness = c.certificate.witness if c.certificate is not None else None
    return ScanRow(t, theorem, c.verdict, witness)


def _scan_chunk(args) -> list:
    triples, budget = args
    return [scan_row(t, budget) for t in triples]


def cross_validate(bound: int = DEFAULT_SCAN_BOUND, budget: int = DEFAULT_BUDGET,
                   workers: int | None = None) -> ScanReport:
    """Run both classifiers on every admissible triple up to ``bound``."""
    triples = enumerate_admissible(bound)
    total = (2 * bound + 1) ** 3
    workers = workers or 1
    if workers <= 1:
        rows = [scan_row(t, budget) for t in triples]
    else:
        chunks = [(triples[i::workers], budget) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for part in pool.map(_scan_chunk, chunks) for r in part]
    rows.sort(key=lambda r: r.triple)
    return ScanReport(bound, rows, skipped=total - len(triples))


def default_workers() -> int:
    env = os.environ.get("APCLAB_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("APCLAB_THREADS must be a positive integer")
        return n
    return os.cpu_count() or 1


def witness_line(t) -> Fraction | None:
    """The y-coordinate on x = 0 where f vanishes to first order, when defined."""
    p, q1, q2 = _triple(t)
    s = q1 + q2
    if (s < 0 and p > q2) or (s > 0 and p < q2):
        return Fraction(-s, p - q1 - 2 * q2)
    return None


def sample_triples(seed: int, count: int, bound: int = 12,
                   exclude: Iterable = ()) -> list[Triple]:
    """Deterministic pseudo-random admissible triples (for checks and demos)."""
    rng = random.Random(seed)
    excluded = set(map(tuple, exclude))
    out: list[Triple] = []
    while len(out) < count:
        t = Triple(*(rng.randint(-bound, bound) for _ in range(3)))
        if is_admissible(t) and tuple(t) not in excluded and t not in out:
            out.append(t)
    return out
