"""Free T^2 biquotient actions on U(n+1)/U(n-1).

An action is encoded by (p, q1, q2, s1, s2): z^p acts on the left, and
z^q1 w^s1, z^q2 w^s2 on the two leading right-hand slots.

Equivalence moves used for normal forms:

* global negation of the z-exponents (z -> 1/z);
* w -> 1/w, negating (s1, s2);
* w' = z^a w, which shifts (q1, q2) by -a (s1, s2);
* exchanging the two right-hand slots, (q1, s1) <-> (q2, s2), realised by
  right multiplication with the permutation matrix of the first two
  coordinates.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass
from itertools import product
from math import gcd

CANONICAL = ((2, 0, 1, 1, 0), (2, 0, 1, -1, 1))


@dataclass(frozen=True, order=True)
class TorusAction:
    p: int
    q1: int
    q2: int
    s1: int
    s2: int

    def as_tuple(self) -> tuple:
        return astuple(self)

    def is_effective(self) -> bool:
        return gcd(gcd(self.p, self.q1), self.q2) == 1 and gcd(self.s1, self.s2) == 1


def _action(a) -> TorusAction:
    return a if isinstance(a, TorusAction) else TorusAction(*a)


def freeness_quantities(a) -> tuple[int, int, int]:
    p, q1, q2, s1, s2 = _action(a).as_tuple()
    return (q1 * s2 - q2 * s1, (q1 - p) * s2 - q2 * s1, q1 * s2 - (q2 - p) * s1)


def is_free(a) -> bool:
    a = _action(a)
    if gcd(a.s1, a.s2) != 1:
        raise ValueError(f"gcd(s1, s2) must be 1, got {a.as_tuple()}")
    return all(abs(v) == 1 for v in freeness_quantities(a))


def _negate_z(a: TorusAction) -> TorusAction:
    return TorusAction(-a.p, -a.q1, -a.q2, a.s1, a.s2)


def _invert_w(a: TorusAction) -> TorusAction:
    return TorusAction(a.p, a.q1, a.q2, -a.s1, -a.s2)


def _shift(a: TorusAction, k: int) -> TorusAction:
    return TorusAction(a.p, a.q1 - k * a.s1, a.q2 - k * a.s2, a.s1, a.s2)


def _swap(a: TorusAction) -> TorusAction:
    return TorusAction(a.p, a.q2, a.q1, a.s2, a.s1)


def _reduce(a: TorusAction) -> TorusAction:
    if a.p < 0:
        a = _negate_z(a)
    if a.s2 < 0 or (a.s2 == 0 and a.s1 < 0):
        a = _invert_w(a)
    if a.s1 != 0:
        a = _shift(a, (a.q1 - a.q1 % abs(a.s1)) // a.s1)
    elif a.s2 != 0:
        a = _shift(a, (a.q2 - a.q2 % abs(a.s2)) // a.s2)
    return a


def normalize_action(a) -> TorusAction:
    """Smallest reduced representative over the orbit of the moves above."""
    a = _action(a)
    return min(_reduce(a), _reduce(_swap(a)))


@dataclass
class Enumeration:
    bound: int
    classes: set
    unreached: set
    tested: int
    survivors: int
    ps_violations: list

    @property
    def canonical_only(self) -> bool:
        return not self.unreached and {c.as_tuple() for c in self.classes} == set(CANONICAL)


def enumerate_free(bound: int) -> Enumeration:
    """Test every effective tuple with entries in [-bound, bound], p != 0."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    r = range(-bound, bound + 1)
    classes, unreached, violations = set(), set(), []
    tested = survivors = 0
    canonical = {TorusAction(*c) for c in CANONICAL}
    for p, q1, q2, s1, s2 in product(r, r, r, r, r):
        if p == 0:
            continue
        a = TorusAction(p, q1, q2, s1, s2)
        if not a.is_effective():
            continue
        tested += 1
        if not is_free(a):
            continue
        survivors += 1
        if p * s1 not in (0, 2, -2) or p * s2 not in (0, 2, -2):
            violations.append(a)
        nf = normalize_action(a)
        classes.add(nf)
        if nf not in canonical:
            unreached.add(a)
    return Enumeration(bound, classes, unreached, tested, survivors, violations)
