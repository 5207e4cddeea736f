from itertools import product
from math import gcd

import pytest

from apclab import torus
from apclab.torus import (
    CANONICAL,
    TorusAction,
    enumerate_free,
    freeness_quantities,
    is_free,
    normalize_action,
)

MOVES = [torus._negate_z, torus._invert_w, torus._swap,
         lambda a: torus._shift(a, 1), lambda a: torus._shift(a, -2)]


def _free_pool(bound):
    r = range(-bound, bound + 1)
    return [TorusAction(*a) for a in product(r, repeat=5)
            if a[0] != 0 and gcd(a[3], a[4]) == 1 and gcd(gcd(a[0], a[1]), a[2]) == 1
            and is_free(a)]


@pytest.mark.parametrize("a, free", [((2, 0, 1, 1, 0), True), ((2, 0, 1, -1, 1), True),
                                     ((1, 1, 0, 0, 1), False)])
def test_freeness(a, free):
    assert is_free(a) is free


def test_freeness_needs_primitive_circle():
    with pytest.raises(ValueError):
        is_free((2, 0, 1, 2, 0))


@pytest.mark.parametrize("a, want", [((2, 1, 0, 0, 1), (2, 0, 1, 1, 0)),
                                     ((-2, 0, -1, -1, 1), (2, 0, 1, -1, 1)),
                                     ((2, 0, 1, 1, 0), (2, 0, 1, 1, 0))])
def test_normalization(a, want):
    assert normalize_action(a).as_tuple() == want


def test_canonical_forms_are_fixed():
    for c in CANONICAL:
        nf = normalize_action(c)
        assert nf.as_tuple() == c and normalize_action(nf) == nf


@pytest.mark.parametrize("bound", [2, 5])
def test_enumeration(bound):
    e = enumerate_free(bound)
    assert {c.as_tuple() for c in e.classes} == set(CANONICAL)
    assert e.canonical_only and not e.unreached
    assert not e.ps_violations and e.survivors > 0


def test_enumeration_rejects_small_bound():
    with pytest.raises(ValueError):
        enumerate_free(1)


def test_moves_preserve_freeness_quantities(rng):
    pool = _free_pool(4)
    for a in (rng.choice(pool) for _ in range(500)):
        base = sorted(map(abs, freeness_quantities(a)))
        for move in MOVES:
            assert sorted(map(abs, freeness_quantities(move(a)))) == base
        nf = normalize_action(a)
        assert is_free(nf) and normalize_action(nf) == nf
