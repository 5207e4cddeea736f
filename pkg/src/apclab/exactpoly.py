"""Exact rational polynomial algebra in one and two variables.

Coefficients are :class:`fractions.Fraction` throughout; nothing in this
module touches floating point.  The univariate root machinery works on
primitive integer polynomials internally (content stripped after every
pseudo-remainder) and only converts back to ``Fraction`` at the surface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]

DEFAULT_ROOT_WIDTH = Fraction(1, 2**32)


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


def as_rational(value: Number | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


def _trim(coeffs: Iterable[Number]) -> tuple:
    out = [as_rational(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, ``coeffs[k]`` is the coefficient of t**k."""

    coeffs: tuple = ()

    def __init__(self, coeffs: Iterable[Number] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def constant(cls, c: Number) -> "UniPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "UniPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t: Number) -> Fraction:
        t = as_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(
            (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)
        )

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: Union["UniPoly", Number]) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = as_rational(other)
            return UniPoly(c * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quot), UniPoly(rem[: other.degree])

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactDivisionError("nonzero remainder in exact univariate division")
        return q

    def monic(self) -> "UniPoly":
        return self * (1 / self.lc) if self.coeffs else self

    def compose_affine(self, a: Number, b: Number) -> "UniPoly":
        """Return p(a + b*t)."""
        lin = UniPoly([a, b])
        out = UniPoly()
        for c in reversed(self.coeffs):
            out = out * lin + UniPoly([c])
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"({c})*t^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(parts)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q (zero if both are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    x, y = _to_primitive_int(a.coeffs), _to_primitive_int(b.coeffs)
    while y:
        x, y = y, _primitive(_prem(x, y))
    return UniPoly(x).monic()


def squarefree_part(a: UniPoly) -> UniPoly:
    if a.degree <= 0:
        return a.monic()
    return a.exact_div(poly_gcd(a, a.derivative())).monic()


def squarefree_decomposition(a: UniPoly) -> list[UniPoly]:
    """Yun's algorithm: returns [s1, s2, ...] with a = lc * prod(s_i ** i)."""
    if a.degree <= 0:
        return []
    out = []
    da = a.derivative()
    g = poly_gcd(a, da)
    w = a.exact_div(g)
    y = da.exact_div(g)
    z = y - w.derivative()
    while w.degree > 0:
        s = poly_gcd(w, z)
        out.append(s)
        w = w.exact_div(s)
        y = z.exact_div(s)
        z = y - w.derivative()
    while out and out[-1].degree == 0:
        out.pop()
    return out


# integer-polynomial kernels: lists of ints, low degree first, no trailing 0


def _to_primitive_int(coeffs: Sequence[Fraction]) -> list:
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    return _primitive(ints)


def _primitive(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    if not p:
        return p
    g = 0
    for c in p:
        g = gcd(g, c)
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def _strip_content(p: list) -> list:
    """Divide by the positive content, keeping every sign."""
    g = 0
    for c in p:
        g = gcd(g, c)
    return [c // g for c in p] if g > 1 else p


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of a by b scaled by |lc(b)|**k, so signs survive."""
    rem = list(a)
    db = len(b) - 1
    lc = b[-1]
    alc = abs(lc)
    sgn = 1 if lc > 0 else -1
    while len(rem) - 1 >= db and rem:
        shift = len(rem) - 1 - db
        c = rem[-1]
        # rem <- |lc| * rem - sign(lc) * c * x^shift * b
        rem = [alc * r for r in rem]
        for j, bj in enumerate(b):
            rem[shift + j] -= sgn * c * bj
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return rem


def _int_sign_at(p: list, q: Fraction) -> int:
    """Sign of p(q) using homogenised integer evaluation."""
    if not p:
        return 0
    n, d = q.numerator, q.denominator
    deg = len(p) - 1
    # Horner on sum c_k n^k d^(deg-k)
    acc = p[-1]
    for k in range(deg - 1, -1, -1):
        acc = acc * n + p[k] * d ** (deg - k)
    return (acc > 0) - (acc < 0)


class SturmSequence:
    """Sturm chain of the squarefree part of a polynomial (integer form)."""

    def __init__(self, poly: UniPoly):
        if poly.is_zero():
            raise ValueError("Sturm sequence of the zero polynomial")
        sqf = squarefree_part(poly)
        p0 = _to_primitive_int(sqf.coeffs)
        chain = [p0]
        if len(p0) > 1:
            p1 = _strip_content([k * c for k, c in enumerate(p0)][1:])
            chain.append(p1)
            while len(chain[-1]) > 1:
                r = _prem(chain[-2], chain[-1])
                if not r:
                    break
                chain.append(_strip_content([-c for c in r]))
        self.chain = chain
        self.base = p0

    def variations(self, q: Fraction) -> int:
        last = 0
        count = 0
        for p in self.chain:
            s = _int_sign_at(p, q)
            if s:
                if last and s != last:
                    count += 1
                last = s
        return count

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct roots in the half-open interval (lo, hi]."""
        return self.variations(lo) - self.variations(hi)

    def is_root(self, q: Fraction) -> bool:
        return _int_sign_at(self.base, q) == 0


@dataclass(frozen=True)
class RootInterval:
    """Open interval (lo, hi) holding exactly one root; ``exact`` if rational and known."""

    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    def contains(self, value: float) -> bool:
        if self.exact is not None:
            return float(self.exact) == value
        return float(self.lo) <= value <= float(self.hi)


def _separate_exact(seq: SturmSequence, r: Fraction, lo: Fraction, hi: Fraction) -> RootInterval:
    # widen around an exact rational root while staying root-free elsewhere
    delta = (hi - lo) / 2
    while True:
        a, b = max(lo, r - delta), min(hi, r + delta)
        if not seq.is_root(a) and not seq.is_root(b):
            if seq.count(a, b) == 1 and a < r < b:
                return RootInterval(a, b, r)
        delta /= 2


def isolate_real_roots(
    poly: UniPoly,
    lo: Number,
    hi: Number,
    width: Number = DEFAULT_ROOT_WIDTH,
    closed: bool = True,
) -> list[RootInterval]:
    """Isolate the distinct real roots of ``poly`` in [lo, hi] (or (lo, hi)).

    Every returned interval has non-root rational endpoints (unless an
    endpoint coincides with lo/hi), contains exactly one root, and the
    intervals are pairwise disjoint and sorted.  Intervals for irrational
    roots are refined to at most ``width``.
    """
    lo, hi, width = as_rational(lo), as_rational(hi), as_rational(width)
    if not lo < hi:
        raise ValueError("isolate_real_roots needs lo < hi")
    if poly.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if poly.degree == 0:
        return []
    seq = SturmSequence(poly)
    out: list[RootInterval] = []
    endpoint_roots = []
    if closed and seq.is_root(lo):
        endpoint_roots.append(lo)
    # roots in (lo, hi]
    stack = [(lo, hi, seq.count(lo, hi))]
    found: list[tuple] = []
    while stack:
        a, b, c = stack.pop()
        if c == 0:
            continue
        if seq.is_root(b):
            if b == hi:
                if closed:
                    endpoint_roots.append(hi)
                c -= 1
                b_new = b
                # shrink the right end off the root at hi
                step = (b - a) / 2
                while True:
                    cand = b - step
                    if not seq.is_root(cand) and seq.count(a, cand) == c:
                        b_new = cand
                        break
                    step /= 2
                if c:
                    stack.append((a, b_new, c))
                continue
            found.append(("exact", b))
            c -= 1
            if c == 0:
                continue
            # root at b already recorded; drop it by moving b left
            step = (b - a) / 2
            while True:
                cand = b - step
                if not seq.is_root(cand) and seq.count(a, cand) == c:
                    stack.append((a, cand, c))
                    break
                step /= 2
            continue
        if c == 1 and (b - a) <= width:
            found.append(("open", a, b))
            continue
        m = (a + b) / 2
        left = seq.count(a, m)
        stack.append((m, b, c - left))
        stack.append((a, m, left))
    for item in found:
        if item[0] == "exact":
            out.append(_separate_exact(seq, item[1], lo, hi))
        else:
            a, b = item[1], item[2]
            if seq.is_root(a):
                # left end sits on a neighbouring or endpoint root: pull it right
                step = (b - a) / 2
                while seq.is_root(a + step) or seq.count(a + step, b) != 1:
                    step /= 2
                a = a + step
            out.append(RootInterval(a, b))
    out.sort(key=lambda r: r.lo)
    # keep neighbouring neighbourhoods disjoint
    fixed: list[RootInterval] = []
    for r in out:
        if fixed and r.lo < fixed[-1].hi:
            prev = fixed[-1]
            if prev.exact is not None:
                new_hi = (prev.exact + (r.exact if r.exact is not None else r.lo)) / 2
                if r.exact is None:
                    new_hi = min(new_hi, r.lo) if r.lo > prev.exact else new_hi
                while seq.is_root(new_hi) or seq.count(prev.lo, new_hi) != 1:
                    new_hi = (prev.exact + new_hi) / 2
                fixed[-1] = RootInterval(prev.lo, new_hi, prev.exact)
            if r.exact is not None and r.lo < fixed[-1].hi:
                new_lo = (fixed[-1].hi + r.exact) / 2
                while seq.is_root(new_lo) or seq.count(new_lo, r.hi) != 1:
                    new_lo = (new_lo + r.exact) / 2
                r = RootInterval(max(new_lo, fixed[-1].hi), r.hi, r.exact)
        fixed.append(r)
    for e in endpoint_roots:
        fixed.append(RootInterval(e, e, e))
    fixed.sort(key=lambda r: (r.lo, r.hi))
    return fixed


def simplest_rational(lo: Number, hi: Number) -> Fraction:
    """The rational with the smallest denominator in [lo, hi] (continued fractions)."""
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi:
        raise ValueError("simplest_rational needs lo <= hi")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational(-hi, -lo)
    c = -((-lo.numerator) // lo.denominator)
    if c <= hi:
        return Fraction(c)
    fl = c - 1
    return fl + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl))


def recognize_rational_root(poly: UniPoly, root: RootInterval) -> RootInterval:
    """Mark ``root`` exact when the simplest rational it contains is a root.

    The interval isolates one root, so a hit identifies it.
    """
    if root.exact is not None:
        return root
    q = simplest_rational(root.lo, root.hi)
    return RootInterval(root.lo, root.hi, q) if poly(q) == 0 else root


def refine_root(poly: UniPoly, root: RootInterval, width: Number) -> RootInterval:
    """Bisect an isolating interval until it is at most ``width`` wide."""
    if root.exact is not None:
        return root
    width = as_rational(width)
    seq = SturmSequence(poly)
    a, b = root.lo, root.hi
    while b - a > width:
        m = (a + b) / 2
        if seq.is_root(m):
            return RootInterval(a, b, m)
        if seq.count(a, m) == 1:
            b = m
        else:
            a = m
    return RootInterval(a, b)


@dataclass(frozen=True)
class AllNonpositive:
    """Certified: the polynomial is <= 0 on the whole closed interval."""

    roots: tuple = ()

    def to_json(self) -> dict:
        return {
            "verdict": "nonpositive",
            "roots": [
                {"lo": rational_str(r.lo), "hi": rational_str(r.hi),
                 "exact": rational_str(r.exact) if r.exact is not None else None}
                for r in self.roots
            ],
        }


@dataclass(frozen=True)
class PositiveWitness:
    """A rational point at which the polynomial is strictly positive."""

    point: Fraction

    def to_json(self) -> dict:
        return {"verdict": "positive", "point": rational_str(self.point)}


def _gap_points(roots: Sequence[RootInterval], lo: Fraction, hi: Fraction) -> list:
    """One sample in every root-free component of [lo, hi] (plus lo, hi)."""
    pts = {lo, hi}
    for r in roots:
        if r.lo != r.hi:
            pts.add(r.lo)
            pts.add(r.hi)
    ordered = sorted(pts)
    mids = [(a + b) / 2 for a, b in zip(ordered, ordered[1:])]
    return sorted(pts.union(mids))


def sturm_decide(g: UniPoly, lo: Number, hi: Number) -> AllNonpositive | PositiveWitness:
    """Decide g <= 0 on [lo, hi] exactly, or return a point with g > 0."""
    lo, hi = as_rational(lo), as_rational(hi)
    if not lo < hi:
        raise ValueError("sturm_decide needs lo < hi")
    if g.is_zero():
        return AllNonpositive()
    if g.degree == 0:
        return PositiveWitness(lo) if g.lc > 0 else AllNonpositive()
    roots = isolate_real_roots(g, lo, hi, width=hi - lo)
    # every component between consecutive roots carries a sample point
    for t in _gap_points(roots, lo, hi):
        if g(t) > 0:
            return PositiveWitness(t)
    return AllNonpositive(tuple(roots))


def univariate_resultant(a: Sequence[Fraction], b: Sequence[Fraction], m: int, n: int) -> Fraction:
    """Sylvester resultant with formal degrees m, n (leading zeros allowed)."""
    size = m + n
    if size == 0:
        return Fraction(1)
    a = list(a) + [Fraction(0)] * (m + 1 - len(a))
    b = list(b) + [Fraction(0)] * (n + 1 - len(b))
    rows = []
    for k in range(n):
        row = [Fraction(0)] * size
        for j in range(m + 1):
            row[k + j] = a[m - j]
        rows.append(row)
    for k in range(m):
        row = [Fraction(0)] * size
        for j in range(n + 1):
            row[k + j] = b[n - j]
        rows.append(row)
    return _det(rows)


def _det(rows: list) -> Fraction:
    mat = [list(r) for r in rows]
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        pv = mat[col][col]
        det *= pv
        for r in range(col + 1, n):
            f = mat[r][col]
            if f:
                f /= pv
                row_c = mat[col]
                row_r = mat[r]
                for k in range(col, n):
                    row_r[k] -= f * row_c[k]
    return det


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UniPoly:
    """Newton interpolation through the points (xs[k], ys[k])."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = UniPoly([coef[-1]])
    for k in range(n - 2, -1, -1):
        out = out * UniPoly([-xs[k], 1]) + UniPoly([coef[k]])
    return out


# ---------------------------------------------------------------------------
# bivariate
# ---------------------------------------------------------------------------

X, Y = "x", "y"
EDGES = ("X0", "X1", "Y0", "Y1")


class BiPoly:
    """Sparse bivariate polynomial: {(i, j): c} for c * x**i * y**j.

    Instances are treated as immutable; the coefficient map is copied on
    construction and zero coefficients are never stored.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[tuple, Number] | None = None):
        c = {}
        if coeffs:
            for key, v in coeffs.items():
                v = as_rational(v)
                if v:
                    i, j = key
                    if i < 0 or j < 0:
                        raise ValueError("negative exponent")
                    c[(int(i), int(j))] = v
        self._c = c
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c: Number) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple]) -> "BiPoly":
        acc: dict = {}
        for i, j, c in terms:
            acc[(i, j)] = acc.get((i, j), 0) + as_rational(c)
        return cls(acc)

    # views
    def items(self) -> Iterator[tuple]:
        return iter(sorted(self._c.items()))

    def coeff(self, i: int, j: int) -> Fraction:
        return self._c.get((i, j), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self._c), default=0)

    @property
    def deg_y(self) -> int:
        return max((j for _, j in self._c), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self == BiPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"BiPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (i, j), c in sorted(self._c.items(), reverse=True):
            mon = "*".join(
                s for s in ((f"x^{i}" if i > 1 else "x" if i else ""),
                            (f"y^{j}" if j > 1 else "y" if j else "")) if s
            )
            parts.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts)

    # arithmetic
    def __add__(self, other: Union["BiPoly", Number]) -> "BiPoly":
        if not isinstance(other, BiPoly):
            other = BiPoly.constant(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other: Union["BiPoly", Number]) -> "BiPoly":
        if not isinstance(other, BiPoly):
            other = BiPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> "BiPoly":
        return BiPoly.constant(other) - self

    def __mul__(self, other: Union["BiPoly", Number]) -> "BiPoly":
        if not isinstance(other, BiPoly):
            c = as_rational(other)
            return BiPoly({k: v * c for k, v in self._c.items()})
        out: dict = {}
        for (i1, j1), a in self._c.items():
            for (i2, j2), b in other._c.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + a * b
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BiPoly":
        out = BiPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def exact_div(self, other: "BiPoly") -> "BiPoly":
        """Exact division; a nonzero remainder is a hard error."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = max(other._c)
        lc = other._c[lead]
        rem = dict(self._c)
        quot: dict = {}
        while rem:
            top = max(rem)
            di, dj = top[0] - lead[0], top[1] - lead[1]
            if di < 0 or dj < 0:
                raise ExactDivisionError(f"remainder term x^{top[0]} y^{top[1]} not divisible")
            c = rem[top] / lc
            quot[(di, dj)] = c
            for (i, j), v in other._c.items():
                key = (i + di, j + dj)
                nv = rem.get(key, 0) - c * v
                if nv:
                    rem[key] = nv
                else:
                    rem.pop(key, None)
        return BiPoly(quot)

    # calculus and evaluation
    def __call__(self, x: Number, y: Number) -> Fraction:
        return bipoly_eval(self, x, y)

    def partial(self, axis: str) -> "BiPoly":
        return partial(self, axis)

    def restrict_x(self, value: Number) -> UniPoly:
        """Univariate polynomial in y obtained by fixing x = value."""
        v = as_rational(value)
        out = [Fraction(0)] * (self.deg_y + 1)
        for (i, j), c in self._c.items():
            out[j] += c * v**i
        return UniPoly(out)

    def restrict_y(self, value: Number) -> UniPoly:
        """Univariate polynomial in x obtained by fixing y = value."""
        v = as_rational(value)
        out = [Fraction(0)] * (self.deg_x + 1)
        for (i, j), c in self._c.items():
            out[i] += c * v**j
        return UniPoly(out)

    def swap(self) -> "BiPoly":
        return BiPoly({(j, i): c for (i, j), c in self._c.items()})

    def as_poly_in_y(self) -> list:
        """Coefficients in y as univariate polynomials in x: [P_0(x), P_1(x), ...]."""
        cols: list = [[Fraction(0)] * (self.deg_x + 1) for _ in range(self.deg_y + 1)]
        for (i, j), c in self._c.items():
            cols[j][i] += c
        return [UniPoly(c) for c in cols]

    def affine_substitute(self, x0: Number, sx: Number, y0: Number, sy: Number) -> "BiPoly":
        """Return f(x0 + sx*u, y0 + sy*v) as a polynomial in (u, v)."""
        x0, sx, y0, sy = map(as_rational, (x0, sx, y0, sy))
        m, n = self.deg_x, self.deg_y
        # binomial expansion per monomial
        xpow = [UniPoly([1])]
        for _ in range(m):
            xpow.append(xpow[-1] * UniPoly([x0, sx]))
        ypow = [UniPoly([1])]
        for _ in range(n):
            ypow.append(ypow[-1] * UniPoly([y0, sy]))
        out: dict = {}
        for (i, j), c in self._c.items():
            for a, ca in enumerate(xpow[i].coeffs):
                if ca:
                    for b, cb in enumerate(ypow[j].coeffs):
                        if cb:
                            out[(a, b)] = out.get((a, b), 0) + c * ca * cb
        return BiPoly(out)

    # serialization
    def to_json(self) -> dict:
        return {
            "terms": [
                {"i": i, "j": j, "num": str(c.numerator), "den": str(c.denominator)}
                for (i, j), c in sorted(self._c.items())
            ]
        }

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "BiPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_terms(
            (int(t["i"]), int(t["j"]), Fraction(int(t["num"]), int(t["den"])))
            for t in obj["terms"]
        )


def bipoly_eval(f: BiPoly, x: Number, y: Number) -> Fraction:
    x, y = as_rational(x), as_rational(y)
    # Horner in x over y-polynomials
    by_i: dict = {}
    for (i, j), c in f._c.items():
        by_i.setdefault(i, []).append((j, c))
    acc = Fraction(0)
    for i in range(f.deg_x, -1, -1):
        row = by_i.get(i)
        v = Fraction(0)
        if row:
            for j, c in row:
                v += c * y**j
        acc = acc * x + v
    return acc


def partial(f: BiPoly, axis: str) -> BiPoly:
    if axis in ("x", "X"):
        return BiPoly({(i - 1, j): i * c for (i, j), c in f._c.items() if i > 0})
    if axis in ("y", "Y"):
        return BiPoly({(i, j - 1): j * c for (i, j), c in f._c.items() if j > 0})
    raise ValueError(f"unknown axis {axis!r}")


def edge_restrict(f: BiPoly, edge: str, box: "Box | None" = None) -> UniPoly:
    """Restriction of f to a side of the box (default unit square).

    X0/X1 fix x at the low/high end and return a polynomial in y; Y0/Y1 fix
    y and return a polynomial in x.
    """
    box = box or Box.unit()
    if edge == "X0":
        return f.restrict_x(box.x_lo)
    if edge == "X1":
        return f.restrict_x(box.x_hi)
    if edge == "Y0":
        return f.restrict_y(box.y_lo)
    if edge == "Y1":
        return f.restrict_y(box.y_hi)
    raise ValueError(f"unknown edge {edge!r}")


@dataclass(frozen=True)
class Box:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError(f"degenerate box {self}")

    @classmethod
    def unit(cls) -> "Box":
        return cls(Fraction(0), Fraction(1), Fraction(0), Fraction(1))

    @property
    def width(self) -> Fraction:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> Fraction:
        return self.y_hi - self.y_lo

    def center(self) -> tuple:
        return ((self.x_lo + self.x_hi) / 2, (self.y_lo + self.y_hi) / 2)

    def corners(self) -> tuple:
        return (
            (self.x_lo, self.y_lo), (self.x_hi, self.y_lo),
            (self.x_lo, self.y_hi), (self.x_hi, self.y_hi),
        )

    def contains(self, x: Number, y: Number) -> bool:
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi

    def split(self) -> tuple["Box", "Box", str]:
        """Halve the wider side (x on ties)."""
        if self.width >= self.height:
            m = (self.x_lo + self.x_hi) / 2
            return Box(self.x_lo, m, self.y_lo, self.y_hi), Box(m, self.x_hi, self.y_lo, self.y_hi), "x"
        m = (self.y_lo + self.y_hi) / 2
        return Box(self.x_lo, self.x_hi, self.y_lo, m), Box(self.x_lo, self.x_hi, m, self.y_hi), "y"

    def to_json(self) -> list:
        return [rational_str(v) for v in (self.x_lo, self.x_hi, self.y_lo, self.y_hi)]

    @classmethod
    def from_json(cls, obj: Sequence[str]) -> "Box":
        return cls(*(Fraction(v) for v in obj))


def _bernstein_1d_weights(n: int) -> list:
    # W[i][k] = C(i,k)/C(n,k): power coefficient k -> Bernstein coefficient i
    return [[Fraction(comb(i, k), comb(n, k)) if k <= i else Fraction(0)
             for k in range(n + 1)] for i in range(n + 1)]


def bernstein_coeffs(f: BiPoly, box: Box | None = None,
                     degrees: tuple | None = None) -> list:
    """Tensor-product Bernstein coefficients of f on ``box``.

    Returned as a (m+1) x (n+1) nested list indexed [i][j] with m, n the
    x- and y-degrees (or the requested ``degrees``, which may exceed them).
    """
    box = box or Box.unit()
    m, n = degrees if degrees is not None else (f.deg_x, f.deg_y)
    if m < f.deg_x or n < f.deg_y:
        raise ValueError("requested Bernstein degree below the polynomial degree")
    g = f.affine_substitute(box.x_lo, box.width, box.y_lo, box.height)
    a = [[g.coeff(k, l) for l in range(n + 1)] for k in range(m + 1)]
    wx, wy = _bernstein_1d_weights(m), _bernstein_1d_weights(n)
    tmp = [[sum((wx[i][k] * a[k][l] for k in range(i + 1)), Fraction(0))
            for l in range(n + 1)] for i in range(m + 1)]
    return [[sum((wy[j][l] * tmp[i][l] for l in range(j + 1)), Fraction(0))
             for j in range(n + 1)] for i in range(m + 1)]


def de_casteljau_split(coeffs: list, axis: str, t: Number = Fraction(1, 2)) -> tuple[list, list]:
    """Split a Bernstein coefficient grid at parameter t along one axis."""
    t = as_rational(t)
    if axis == "y":
        left, right = de_casteljau_split(_transpose(coeffs), "x", t)
        return _transpose(left), _transpose(right)
    m = len(coeffs) - 1
    cols = len(coeffs[0])
    left = [[None] * cols for _ in range(m + 1)]
    right = [[None] * cols for _ in range(m + 1)]
    for j in range(cols):
        work = [coeffs[i][j] for i in range(m + 1)]
        for r in range(m + 1):
            left[r][j] = work[0]
            right[m - r][j] = work[m - r]
            work = [(1 - t) * work[i] + t * work[i + 1] for i in range(len(work) - 1)]
    return left, right


def _transpose(mat: list) -> list:
    return [list(col) for col in zip(*mat)]


def resultant_y(a: BiPoly, b: BiPoly) -> UniPoly:
    """Resultant of a and b with respect to y, as a polynomial in x.

    Computed by evaluating the Sylvester determinant (formal y-degrees held
    fixed) at enough integer abscissae and interpolating; exact throughout.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant with the zero polynomial is undefined")
    m, n = a.deg_y, b.deg_y
    bound = n * a.deg_x + m * b.deg_x
    ca, cb = a.as_poly_in_y(), b.as_poly_in_y()
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [univariate_resultant([c(x) for c in ca], [c(x) for c in cb], m, n) for x in xs]
    return interpolate(xs, ys)


def resultant_x(a: BiPoly, b: BiPoly) -> UniPoly:
    """Resultant with respect to x, as a polynomial in y."""
    return resultant_y(a.swap(), b.swap())


def _y_coeff(f: BiPoly, d: int) -> BiPoly:
    return BiPoly({(i, 0): c for (i, j), c in f._c.items() if j == d})


def _x_content(f: BiPoly) -> UniPoly:
    g = UniPoly()
    for col in f.as_poly_in_y():
        g = poly_gcd(g, col)
        if g.degree == 0:
            break
    return g


def _from_x(u: UniPoly) -> BiPoly:
    return BiPoly({(i, 0): c for i, c in enumerate(u.coeffs)})


def bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Greatest common divisor over Q, normalised to a monic leading term.

    Primitive pseudo-remainder sequence in y over Q[x], with the x-content
    handled separately by univariate gcds.
    """
    if a.is_zero():
        return _normalize_lead(b)
    if b.is_zero():
        return _normalize_lead(a)
    ca, cb = _x_content(a), _x_content(b)
    cont = _from_x(poly_gcd(ca, cb))
    u = a.exact_div(_from_x(ca))
    v = b.exact_div(_from_x(cb))
    if u.deg_y < v.deg_y:
        u, v = v, u
    while not v.is_zero() and v.deg_y > 0:
        r = _prem_y(u, v)
        if r.is_zero():
            u = v
            break
        u, v = v, r.exact_div(_from_x(_x_content(r)))
    else:
        if not v.is_zero():
            # v has y-degree 0 and is primitive in x, i.e. a nonzero constant
            u = BiPoly.constant(1)
    return _normalize_lead(cont * u)


def _prem_y(a: BiPoly, b: BiPoly) -> BiPoly:
    db = b.deg_y
    lb = _y_coeff(b, db)
    r = a
    while not r.is_zero() and r.deg_y >= db:
        dr = r.deg_y
        lr = _y_coeff(r, dr)
        r = lb * r - lr * BiPoly({(0, dr - db): 1}) * b
    return r


def _normalize_lead(f: BiPoly) -> BiPoly:
    if f.is_zero():
        return f
    return f * (1 / f.coeff(*max(f.as_dict())))
