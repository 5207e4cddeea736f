"""Certified sign decision for bivariate polynomials on rational boxes.

The decision runs in three tiers:

1. exact Sturm analysis of the four edge restrictions;
2. Bernstein subdivision of the box, certifying leaves whose coefficients
   are all nonpositive and harvesting exact corner values as witnesses;
3. if subdivision stalls (typically near boundary points where ``f`` touches
   zero), exact analysis of the interior critical points that fall inside
   the stalled boxes.

Soundness of tier 3 rests on a plain fact: the maximum of ``f`` over the box
is attained on the boundary (tier 1) or at an interior critical point.  If
that point lies in a certified leaf it is already covered; otherwise it is
one of the critical points examined here.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .exactpoly import (
    AllNonpositive,
    BiPoly,
    Box,
    PositiveWitness,
    RootInterval,
    bernstein_coeffs,
    bipoly_gcd,
    edge_restrict,
    isolate_real_roots,
    rational_str,
    recognize_rational_root,
    refine_root,
    resultant_x,
    resultant_y,
    sturm_decide,
)

DEFAULT_BUDGET = 24
CELL_REFINEMENTS = 40


class Verdict(enum.Enum):
    NONPOSITIVE = "nonpositive"
    POSITIVE = "positive"


@dataclass
class SignCertificate:
    verdict: Verdict
    witness: tuple | None = None
    leaves: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    critical_points: list = field(default_factory=list)
    stalled: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    budget_exhausted: bool = False

    @property
    def is_nonpositive(self) -> bool:
        """True only for a complete, sound nonpositivity proof."""
        return self.verdict is Verdict.NONPOSITIVE and not self.budget_exhausted

    @property
    def is_positive(self) -> bool:
        return self.verdict is Verdict.POSITIVE

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": (
                {"x": rational_str(self.witness[0]), "y": rational_str(self.witness[1])}
                if self.witness is not None else None
            ),
            "leaves": [b.to_json() for b in sorted(self.leaves, key=_box_key)],
            "edges": self.edges,
            "critical_points": self.critical_points,
            "stalled": [b.to_json() for b in sorted(self.stalled, key=_box_key)],
            "notes": list(self.notes),
            "budget_exhausted": self.budget_exhausted,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> "SignCertificate":
        w = obj.get("witness")
        return cls(
            verdict=Verdict(obj["verdict"]),
            witness=(Fraction(w["x"]), Fraction(w["y"])) if w else None,
            leaves=[Box.from_json(b) for b in obj.get("leaves", [])],
            edges=list(obj.get("edges", [])),
            critical_points=list(obj.get("critical_points", [])),
            stalled=[Box.from_json(b) for b in obj.get("stalled", [])],
            notes=list(obj.get("notes", [])),
            budget_exhausted=bool(obj["budget_exhausted"]),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignCertificate):
            return NotImplemented
        return self.to_json() == other.to_json()


def _box_key(b: Box) -> tuple:
    return (b.x_lo, b.y_lo, b.x_hi, b.y_hi)


def _positive(x, y) -> SignCertificate:
    return SignCertificate(Verdict.POSITIVE, witness=(x, y))


# -- tier 1 -----------------------------------------------------------------


def _edge_point(edge: str, box: Box, t: Fraction) -> tuple:
    return {
        "X0": (box.x_lo, t), "X1": (box.x_hi, t),
        "Y0": (t, box.y_lo), "Y1": (t, box.y_hi),
    }[edge]


def _edge_checks(f: BiPoly, box: Box):
    records = []
    for edge in ("X0", "X1", "Y0", "Y1"):
        g = edge_restrict(f, edge, box)
        lo, hi = (box.y_lo, box.y_hi) if edge[0] == "X" else (box.x_lo, box.x_hi)
        res = sturm_decide(g, lo, hi)
        if isinstance(res, PositiveWitness):
            return None, _edge_point(edge, box, res.point)
        records.append({"edge": edge, **res.to_json()})
    return records, None


# -- tier 2 -----------------------------------------------------------------


def _integer_grid(coeffs: list) -> list:
    den = 1
    for row in coeffs:
        for c in row:
            den = den * c.denominator // gcd(den, c.denominator)
    return [[int(c * den) for c in row] for row in coeffs]


def _split_x(grid: list) -> tuple[list, list]:
    # de Casteljau at 1/2 with sums instead of averages; both halves carry the
    # same positive factor 2**m so only signs are meaningful.
    m = len(grid) - 1
    left, right = [None] * (m + 1), [None] * (m + 1)
    work = grid
    for r in range(m + 1):
        s = 1 << (m - r)
        left[r] = [v * s for v in work[0]]
        right[m - r] = [v * s for v in work[m - r]]
        work = [[a + b for a, b in zip(work[i], work[i + 1])] for i in range(len(work) - 1)]
    return left, right


def _transpose(grid: list) -> list:
    return [list(c) for c in zip(*grid)]


@dataclass
class _Node:
    grid: list
    ix: int
    iy: int
    lx: int
    ly: int

    def box(self, root: Box) -> Box:
        wx = root.width / (1 << self.lx)
        wy = root.height / (1 << self.ly)
        return Box(root.x_lo + self.ix * wx, root.x_lo + (self.ix + 1) * wx,
                   root.y_lo + self.iy * wy, root.y_lo + (self.iy + 1) * wy)


def _subdivide(f: BiPoly, box: Box, budget: int):
    """Returns (leaves, stalled, witness)."""
    grid = _integer_grid(bernstein_coeffs(f, box))
    stack = [_Node(grid, 0, 0, 0, 0)]
    leaves, stalled = [], []
    while stack:
        node = stack.pop()
        g = node.grid
        if max(max(row) for row in g) <= 0:
            leaves.append(node.box(box))
            continue
        # corner Bernstein coefficients are exact (scaled) values of f
        for ci, cj in ((0, 0), (-1, 0), (0, -1), (-1, -1)):
            if g[ci][cj] > 0:
                b = node.box(box)
                return leaves, stalled, (b.x_lo if ci == 0 else b.x_hi,
                                         b.y_lo if cj == 0 else b.y_hi)
        if node.lx + node.ly >= budget:
            stalled.append(node.box(box))
            continue
        if node.lx <= node.ly:
            lo, hi = _split_x(g)
            stack.append(_Node(hi, 2 * node.ix + 1, node.iy, node.lx + 1, node.ly))
            stack.append(_Node(lo, 2 * node.ix, node.iy, node.lx + 1, node.ly))
        else:
            lo, hi = _split_x(_transpose(g))
            stack.append(_Node(_transpose(hi), node.ix, 2 * node.iy + 1, node.lx, node.ly + 1))
            stack.append(_Node(_transpose(lo), node.ix, 2 * node.iy, node.lx, node.ly + 1))
    return leaves, stalled, None


# -- tier 3 -----------------------------------------------------------------


def _sign_definite(f: BiPoly, cell: Box) -> bool:
    coeffs = bernstein_coeffs(f, cell)
    flat = [c for row in coeffs for c in row]
    return min(flat) > 0 or max(flat) < 0


def _nonpositive_on(f: BiPoly, cell: Box) -> bool:
    return max(c for row in bernstein_coeffs(f, cell) for c in row) <= 0


def _cell(rx: RootInterval, ry: RootInterval) -> Box:
    def span(r):
        if r.exact is not None and r.lo == r.hi:
            return r.exact - Fraction(1, 2**64), r.exact + Fraction(1, 2**64)
        return r.lo, r.hi
    return Box(*span(rx), *span(ry))


def _touches(cell: Box, boxes: list) -> bool:
    return any(cell.x_lo <= b.x_hi and b.x_lo <= cell.x_hi
               and cell.y_lo <= b.y_hi and b.y_lo <= cell.y_hi for b in boxes)


def _examine_cell(f, fx, fy, R, S, rx, ry):
    """Resolve one candidate critical cell.

    Returns ("empty"|"nonpositive"|"exact"|"unresolved", detail) or
    ("positive", point).
    """
    for _ in range(CELL_REFINEMENTS):
        rx, ry = recognize_rational_root(R, rx), recognize_rational_root(S, ry)
        if rx.exact is not None and ry.exact is not None:
            if fx(rx.exact, ry.exact) != 0 or fy(rx.exact, ry.exact) != 0:
                return "empty", None
            v = f(rx.exact, ry.exact)
            if v > 0:
                return "positive", (rx.exact, ry.exact)
            return "exact", v
        cell = _cell(rx, ry)
        if _sign_definite(fx, cell) or _sign_definite(fy, cell):
            return "empty", None
        if _nonpositive_on(f, cell):
            return "nonpositive", cell
        cx, cy = cell.center()
        if f(cx, cy) > 0:
            return "positive", (cx, cy)
        rx = refine_root(R, rx, rx.width / 4) if rx.exact is None else rx
        ry = refine_root(S, ry, ry.width / 4) if ry.exact is None else ry
    return "unresolved", _cell(rx, ry)


def _critical_analysis(f: BiPoly, box: Box, stalled: list, cert: SignCertificate):
    """Tier 3.  Returns a witness point, or None after filling the ledger."""
    fx, fy = f.partial("x"), f.partial("y")
    if fx.is_zero() and fy.is_zero():
        cert.notes.append("constant polynomial")
        return None
    common = bipoly_gcd(fx, fy) if not (fx.is_zero() or fy.is_zero()) else (fx if fy.is_zero() else fy)
    if common.deg_x + common.deg_y > 0:
        # a curve of critical points; f is constant along each component
        try:
            f.exact_div(common)
            cert.critical_points.append({"kind": "curve", "resolution": "f vanishes on curve",
                                         "curve": common.to_json()})
        except ArithmeticError:
            cert.critical_points.append({"kind": "curve", "resolution": "unresolved",
                                         "curve": common.to_json()})
            cert.notes.append("non-isolated critical set where f does not vanish identically")
            cert.budget_exhausted = True
        a, b = fx.exact_div(common), fy.exact_div(common)
    else:
        a, b = fx, fy
    if a.deg_x + a.deg_y == 0 or b.deg_x + b.deg_y == 0:
        return None  # one factor is a nonzero constant: no isolated critical points
    R = resultant_y(a, b)
    S = resultant_x(a, b)
    if R.is_zero() or S.is_zero():
        cert.notes.append("resultant vanished identically")
        cert.budget_exhausted = True
        return None
    xs = isolate_real_roots(R, box.x_lo, box.x_hi, closed=False) if R.degree > 0 else []
    ys = isolate_real_roots(S, box.y_lo, box.y_hi, closed=False) if S.degree > 0 else []
    for rx in xs:
        for ry in ys:
            if not _touches(_cell(rx, ry), stalled):
                continue
            status, detail = _examine_cell(f, a, b, R, S, rx, ry)
            if status == "positive":
                return detail
            if status == "empty":
                continue
            entry = {"x": [rational_str(rx.lo), rational_str(rx.hi)],
                     "y": [rational_str(ry.lo), rational_str(ry.hi)],
                     "resolution": status}
            if status == "exact":
                entry["value"] = rational_str(detail)
            if status == "unresolved":
                cert.notes.append("critical value could not be separated from zero")
                cert.budget_exhausted = True
            cert.critical_points.append(entry)
    return None


def decide_nonpositive(f: BiPoly, box: Box | None = None, budget: int = DEFAULT_BUDGET,
                       tier3: bool = True) -> SignCertificate:
    """Decide whether ``f <= 0`` holds on every point of ``box``.

    A ``positive`` verdict always carries a rational witness with ``f > 0``.
    A ``nonpositive`` verdict is a proof unless ``budget_exhausted`` is set,
    in which case the caller must treat the answer as unknown.

    Parameters
    ----------
    f : BiPoly
    box : Box, optional
        Defaults to the unit square.
    budget : int
        Maximum subdivision depth (sum of the halving levels in x and y).
    tier3 : bool
        Enable the critical-point analysis of stalled boxes.
    """
    box = box or Box.unit()
    if f.is_zero():
        return SignCertificate(Verdict.NONPOSITIVE, leaves=[box])
    edges, witness = _edge_checks(f, box)
    if witness is not None:
        return _positive(*witness)
    leaves, stalled, witness = _subdivide(f, box, budget)
    if witness is not None:
        return _positive(*witness)
    cert = SignCertificate(Verdict.NONPOSITIVE, leaves=leaves, edges=edges, stalled=stalled)
    if not stalled:
        return cert
    if not tier3:
        cert.budget_exhausted = True
        cert.notes.append("subdivision budget exhausted")
        return cert
    witness = _critical_analysis(f, box, stalled, cert)
    if witness is not None:
        return _positive(*witness)
    return cert


def check_certificate(f: BiPoly, cert: SignCertificate) -> bool:
    """Cheap independent re-check of the parts of a certificate that are local.

    Positive: the witness value is re-evaluated.  Nonpositive: every leaf's
    Bernstein coefficients are recomputed from scratch.
    """
    if cert.verdict is Verdict.POSITIVE:
        return cert.witness is not None and f(*cert.witness) > 0
    return all(_nonpositive_on(f, leaf) for leaf in cert.leaves)


def float_max_estimate(f: BiPoly, box: Box | None = None, grid: int = 16) -> float:
    """Largest exact value of f on a grid x grid lattice (a lower bound for the max)."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    box = box or Box.unit()
    xs = [box.x_lo + box.width * Fraction(k, grid - 1) for k in range(grid)]
    ys = [box.y_lo + box.height * Fraction(k, grid - 1) for k in range(grid)]
    return float(max(f(x, y) for x in xs for y in ys))
