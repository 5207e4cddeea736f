"""Cohomology invariant ell and strong-inhomogeneity certificates."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .eschenburg import is_admissible

TRIAL_DIVISION_LIMIT = 2**64
# Deterministic for every n < 3.3e24; beyond that the answer is a strong
# probable-prime verdict and is labelled as such.
MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_BELOW = 3317044064679887385961981


def homogeneous_sum(q1: int, q2: int, k: int) -> int:
    """sum_{i<k} q1^i q2^(k-1-i), i.e. (q1^k - q2^k)/(q1 - q2) for q1 != q2."""
    return sum(q1**i * q2 ** (k - 1 - i) for i in range(k))


def ell(n: int, t) -> int:
    if n < 2:
        raise ValueError("n must be at least 2")
    p, q1, q2 = t
    return p * homogeneous_sum(q1, q2, n) - homogeneous_sum(q1, q2, n + 1)


@dataclass(frozen=True)
class SpaceInvariants:
    n: int
    dim: int
    ell: int
    h2n_order: int | None  # None flags ell == 0, where no group is asserted

    def to_json(self) -> dict:
        return {"n": self.n, "dim": self.dim, "ell": str(self.ell),
                "h2n_order": str(self.h2n_order) if self.h2n_order is not None else None,
                "ell_vanishes": self.h2n_order is None}


def invariants(n: int, t) -> SpaceInvariants:
    e = ell(n, t)
    return SpaceInvariants(n, 4 * n - 1, e, abs(e) if e != 0 else None)


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primality(n: int) -> tuple[bool, str]:
    """(is_prime, method).  Trial division while cheap, then Miller-Rabin."""
    if n < 2:
        return False, "trial-division"
    if n < 4:
        return True, "trial-division"
    if n % 2 == 0:
        return False, "trial-division"
    if n < 10**12:
        for d in range(3, isqrt(n) + 1, 2):
            if n % d == 0:
                return False, "trial-division"
        return True, "trial-division"
    for d in range(3, 1000, 2):
        if n % d == 0:
            return False, "trial-division"
    ok = _miller_rabin(n, MR_WITNESSES)
    if n < MR_DETERMINISTIC_BELOW:
        return ok, "miller-rabin-deterministic"
    return ok, "miller-rabin-probable"


def is_prime(n: int) -> bool:
    return primality(n)[0]


def homogeneous_match(n: int, target: int, bound: int) -> tuple | None:
    """First coprime (r1, r2), |r_i| <= bound, with |ell(n, (0, r1, r2))| = |target|."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    goal = abs(target)
    for r1 in range(-bound, bound + 1):
        for r2 in range(-bound, bound + 1):
            if gcd(r1, r2) == 1 and abs(ell(n, (0, r1, r2))) == goal:
                return (r1, r2)
    return None


@dataclass(frozen=True)
class ParityCertificate:
    n: int
    ell: int
    kind: str = "parity"

    def to_json(self) -> dict:
        return {"kind": self.kind, "conclusive": True, "n": self.n, "ell": str(self.ell),
                "reason": "n even: every homogeneous space in this family has odd ell"}


@dataclass(frozen=True)
class PrimeMod4Certificate:
    n: int
    prime: int
    method: str
    kind: str = "prime-mod-4"

    def to_json(self) -> dict:
        return {"kind": self.kind, "conclusive": True, "n": self.n, "prime": str(self.prime),
                "primality": self.method,
                "reason": "n odd: no homogeneous space here has |ell| a prime = 3 mod 4"}


@dataclass(frozen=True)
class BoundedSearchOnly:
    n: int
    ell: int
    bound: int
    match: tuple | None
    kind: str = "bounded-search"

    def to_json(self) -> dict:
        return {"kind": self.kind, "conclusive": False, "n": self.n, "ell": str(self.ell),
                "bound": self.bound,
                "homogeneous_match": list(self.match) if self.match else None}


InhomogeneityCertificate = ParityCertificate | PrimeMod4Certificate | BoundedSearchOnly


def inhomogeneity_certificate(n: int, t, search_bound: int = 20) -> InhomogeneityCertificate:
    if n < 2:
        raise ValueError("n must be at least 2")
    if not is_admissible(t):
        raise ValueError(f"{tuple(t)} is not admissible")
    e = ell(n, t)
    if n % 2 == 0 and e % 2 == 0:
        return ParityCertificate(n, e)
    if n % 2 == 1:
        prime, method = primality(abs(e))
        if prime and abs(e) % 4 == 3:
            return PrimeMod4Certificate(n, abs(e), method)
    return BoundedSearchOnly(n, e, search_bound, homogeneous_match(n, e, search_bound))


def prime_search(n: int, count: int) -> list[int]:
    """The first ``count`` values p = 4k+1 (k >= 1) with 4kn - 1 prime."""
    if n % 2 == 0:
        raise ValueError("n must be odd")
    if count < 1:
        raise ValueError("count must be positive")
    out, k = [], 1
    while len(out) < count:
        if is_prime(4 * k * n - 1):
            out.append(4 * k + 1)
        k += 1
    return out
