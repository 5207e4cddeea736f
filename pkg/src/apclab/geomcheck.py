"""Floating-point checks of zero-curvature planes on u(n+1).

Matrices are (n+1)x(n+1) complex numpy arrays.  Indices in names such as
``x2`` or ``y3`` are 1-based to match the usual matrix-entry notation; the
arrays themselves are 0-based.

The subgroup K = U(1)U(n) is the block-diagonal 1 + n split and
H = U(1) x U(1) x U(n-1) the 1 + 1 + (n-1) split.  p and m are their
orthogonal complements for <X, Y>_0 = -Re Tr(XY).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .eschenburg import Triple, build_f, is_admissible

SKEW_TOL = 1e-12
RANK_TOL = 1e-6
CONSTRUCTION_TOL = 1e-8

EXCLUDED = frozenset({(0, 1, 0), (0, 0, 1), (1, 1, 0), (0, -1, 1)})


class DegenerateFrameError(ValueError):
    """A formula would divide by zero at the requested frame."""


class NoPlaneError(ValueError):
    """f < 0 at the requested point, so no zero-curvature plane exists there."""


@dataclass(frozen=True)
class MetricParams:
    """Cheeger-deformation scales.  1 is allowed as the undeformed limit."""

    lambda1: float = 0.5
    lambda2: float = 0.5

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")

    @classmethod
    def from_t(cls, t1: float, t2: float) -> "MetricParams":
        return cls(t1 / (t1 + 1), t2 / (t2 + 1))


DEFAULT_PARAMS = MetricParams()


@dataclass
class ResidualReport:
    entries: dict[str, float]

    @property
    def max_residual(self) -> float:
        return max(self.entries.values()) if self.entries else 0.0

    def ok(self, tol: float) -> bool:
        return self.max_residual <= tol

    def to_json(self) -> dict:
        return {"entries": {k: self.entries[k] for k in sorted(self.entries)},
                "max_residual": self.max_residual}


@dataclass
class PlaneCandidate:
    """A spanning pair (X, Y) plus the scalars that generated it.

    ``x`` holds (x_2, ..., x_{n+1}) and ``y`` holds (y_3, ..., y_{n+1}).
    """

    type_tag: str
    X: np.ndarray
    Y: np.ndarray
    t: float
    r: float
    alpha: float = 0.0
    beta: float = 0.0
    x: tuple = ()
    y: tuple = ()

    @property
    def n(self) -> int:
        return self.X.shape[0] - 1

    @property
    def epsilon(self) -> int:
        return 1 if self.type_tag == "IV" else 0

    def x_(self, j: int) -> complex:
        return self.x[j - 2] if 2 <= j < 2 + len(self.x) else 0j

    def y_(self, j: int) -> complex:
        return self.y[j - 3] if 3 <= j < 3 + len(self.y) else 0j

    def shape_residual(self) -> float:
        """How far the scalars are from the structural constraints of the type."""
        if self.type_tag == "IV":
            beta_gap = abs(self.beta - (1 - sum(abs(v) ** 2 for v in self.y)))
            link = max((abs(self.x_(j) + 1j * self.x_(2) * self.y_(j))
                        for j in range(3, self.n + 2)), default=0.0)
            return max(beta_gap, link)
        if self.type_tag == "V":
            orth = abs(sum(self.x_(j) * np.conj(self.y_(j)) for j in range(3, self.n + 2)))
            return max(abs(self.x_(2)), orth)
        return 0.0

    def padded(self, n: int) -> "PlaneCandidate":
        """The same plane embedded in u(n+1) by zero-padding."""
        if n < self.n:
            raise ValueError("can only pad to a larger n")
        return PlaneCandidate(self.type_tag, _pad(self.X, n), _pad(self.Y, n), self.t, self.r,
                              self.alpha, self.beta,
                              self.x + (0j,) * (n - self.n), self.y + (0j,) * (n - self.n))


def _pad(M: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n + 1, n + 1), dtype=complex)
    k = M.shape[0]
    out[:k, :k] = M
    return out


# --- frames and decompositions -------------------------------------------

def frame_point(t: float, r: float, n: int = 2) -> np.ndarray:
    if n < 2:
        raise ValueError("n must be at least 2")
    ct, st, cr, sr = math.cos(t), math.sin(t), math.cos(r), math.sin(r)
    B = np.eye(n + 1)
    B[:3, :3] = [[ct * cr, -sr, -st * cr],
                 [ct * sr, cr, -st * sr],
                 [st, 0.0, ct]]
    return B


def inner0(X: np.ndarray, Y: np.ndarray) -> float:
    return -float(np.trace(X @ Y).real)


def skew_residual(X: np.ndarray) -> float:
    return float(np.linalg.norm(X + X.conj().T))


def _require_skew(X: np.ndarray) -> None:
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 3:
        raise ValueError(f"expected a square matrix of size >= 3, got shape {X.shape}")
    res = skew_residual(X)
    if res > SKEW_TOL * max(1.0, float(np.linalg.norm(X))):
        raise ValueError(f"matrix is not skew-Hermitian (residual {res:.3e})")


def _block_mask(n: int, sizes: tuple) -> np.ndarray:
    mask = np.zeros((n + 1, n + 1), dtype=bool)
    start = 0
    for s in sizes:
        mask[start:start + s, start:start + s] = True
        start += s
    return mask


def split_kp(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    _require_skew(X)
    mask = _block_mask(X.shape[0] - 1, (1, X.shape[0] - 1))
    return np.where(mask, X, 0), np.where(mask, 0, X)


def split_hm(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    _require_skew(X)
    mask = _block_mask(X.shape[0] - 1, (1, 1, X.shape[0] - 2))
    return np.where(mask, X, 0), np.where(mask, 0, X)


def phi1(X: np.ndarray, params: MetricParams = DEFAULT_PARAMS) -> np.ndarray:
    k, p = split_kp(X)
    return params.lambda1 * k + p


def phi1_inv(X: np.ndarray, params: MetricParams = DEFAULT_PARAMS) -> np.ndarray:
    k, p = split_kp(X)
    return k / params.lambda1 + p


def psi(X: np.ndarray, params: MetricParams = DEFAULT_PARAMS) -> np.ndarray:
    h, m = split_hm(X)
    return params.lambda2 * h + m


def ad_inv(B: np.ndarray, X: np.ndarray) -> np.ndarray:
    return B.conj().T @ X @ B


def bracket(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X


# --- residual conditions ---------------------------------------------------

def dependence_residual(u: np.ndarray, v: np.ndarray) -> float:
    """Norm of all 2x2 minors after scaling the longer vector to unit length."""
    scale = max(np.linalg.norm(u), np.linalg.norm(v))
    if scale == 0:
        return 0.0
    u, v = u / scale, v / scale
    minors = [u[i] * v[j] - u[j] * v[i] for i, j in combinations(range(len(u)), 2)]
    return float(np.linalg.norm(minors)) if minors else 0.0


def _p_vector(X: np.ndarray) -> np.ndarray:
    # The p-part of a skew-Hermitian matrix is fixed by its first column below the diagonal.
    return X[1:, 0]


def _check_rank(X: np.ndarray, Y: np.ndarray) -> None:
    stack = np.stack([np.concatenate([X.real.ravel(), X.imag.ravel()]),
                      np.concatenate([Y.real.ravel(), Y.imag.ravel()])])
    s = np.linalg.svd(stack, compute_uv=False)
    if s[0] == 0 or s[1] < RANK_TOL * s[0]:
        raise ValueError("X and Y are linearly dependent")


def _normalized(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X)


def _exponents(tri, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Left and right circle exponents as diagonals of length n+1.

    ``tri`` is a triple (p, q1, q2), or a pair (left vector, (q1, q2)).
    """
    tri = tuple(tri)
    if len(tri) == 2:
        left, (q1, q2) = tri
        left = np.asarray(left, dtype=float)
        if left.shape != (n + 1,):
            raise ValueError("left exponent vector has the wrong length")
    else:
        p, q1, q2 = tri
        left = np.zeros(n + 1)
        left[0] = p
    right = np.zeros(n + 1)
    right[:2] = (q1, q2)
    return left, right


def _circle_trace(B: np.ndarray, Z: np.ndarray, tri) -> float:
    left, right = _exponents(tri, B.shape[0] - 1)
    M = B @ np.diag(left) @ B.conj().T - np.diag(right)
    return float(np.trace(1j * Z @ M).real)


def _horizontality(B: np.ndarray, Z: np.ndarray, tri) -> tuple[float, float]:
    """(circle residual, u(n-1) residual) of one spanning vector."""
    return abs(_circle_trace(B, Z, tri)), float(np.linalg.norm(Z[2:, 2:]))


def _prepare(B, X, Y):
    for M in (X, Y):
        _require_skew(M)
    _check_rank(X, Y)
    if np.linalg.norm(B.conj().T @ B - np.eye(B.shape[0])) > 1e-10:
        raise ValueError("B is not unitary")
    return _normalized(X), _normalized(Y)


def wilking_residuals(B, X, Y, tri, params: MetricParams | None = None) -> ResidualReport:
    """Residuals of the four zero-curvature conditions for the one-step metric.

    The conditions do not depend on the deformation scale; ``params`` is
    accepted so both residual functions share one call shape.
    """
    X, Y = _prepare(B, X, Y)
    hx, hy = _horizontality(B, X, tri), _horizontality(B, Y, tri)
    return ResidualReport({
        "horizontal_circle_X": hx[0],
        "horizontal_circle_Y": hy[0],
        "horizontal_block_X": hx[1],
        "horizontal_block_Y": hy[1],
        "bracket": float(np.linalg.norm(bracket(X, Y))),
        "p_dependence": dependence_residual(_p_vector(X), _p_vector(Y)),
        "p_dependence_conjugated": dependence_residual(_p_vector(ad_inv(B, X)),
                                                       _p_vector(ad_inv(B, Y))),
    })


def kerin_residuals(B, X, Y, tri, params: MetricParams = DEFAULT_PARAMS) -> ResidualReport:
    """Residuals of the five zero-curvature conditions for the two-step metric."""
    X, Y = _prepare(B, X, Y)
    fx, fy = phi1(X, params), phi1(Y, params)
    hx, hy = _horizontality(B, fx, tri), _horizontality(B, fy, tri)
    xh, xm = split_hm(X)
    yh, ym = split_hm(Y)
    # The second deformation lives inside K, so its m-part is K minus H.
    xm, ym = split_kp(xm)[0], split_kp(ym)[0]
    return ResidualReport({
        "horizontal_circle_X": hx[0],
        "horizontal_circle_Y": hy[0],
        "horizontal_block_X": hx[1],
        "horizontal_block_Y": hy[1],
        "bracket": float(np.linalg.norm(bracket(X, Y))),
        "p_dependence": dependence_residual(_p_vector(X), _p_vector(Y)),
        "p_dependence_conjugated": dependence_residual(_p_vector(ad_inv(B, fx)),
                                                       _p_vector(ad_inv(B, fy))),
        "bracket_m": float(np.linalg.norm(bracket(xm, ym))),
        "bracket_h": float(np.linalg.norm(bracket(xh, yh))),
    })


def candidate_residuals(cand: PlaneCandidate, tri, params: MetricParams = DEFAULT_PARAMS,
                        metric: str = "kerin") -> ResidualReport:
    B = frame_point(cand.t, cand.r, cand.n)
    fn = kerin_residuals if metric == "kerin" else wilking_residuals
    return fn(B, cand.X, cand.Y, tri, params)


# --- candidate families ----------------------------------------------------

def build_candidate(type_tag: str, t: float, r: float, alpha: float, beta: float,
                    x, y, n: int = 2) -> PlaneCandidate:
    """Assemble X and Y for a type IV or V plane from its scalars.

    X carries i*alpha at (1,1) and x down the first column; Y carries
    i*epsilon at (1,1), i*beta at (2,2) and y down the second column.
    """
    if type_tag not in ("IV", "V"):
        raise ValueError(f"unsupported type {type_tag!r}")
    x = tuple(complex(v) for v in x) + (0j,) * (n - len(x))
    y = tuple(complex(v) for v in y) + (0j,) * (n - 1 - len(y))
    if len(x) != n or len(y) != n - 1:
        raise ValueError("x must have n entries and y n-1 entries")
    X = np.zeros((n + 1, n + 1), dtype=complex)
    Y = np.zeros((n + 1, n + 1), dtype=complex)
    X[0, 0] = 1j * alpha
    X[1:, 0] = x
    X[0, 1:] = -np.conj(x)
    Y[0, 0] = 1j if type_tag == "IV" else 0
    Y[1, 1] = 1j * beta
    Y[2:, 1] = y
    Y[1, 2:] = -np.conj(y)
    return PlaneCandidate(type_tag, X, Y, t, r, alpha, beta, x, y)


def type_i_plane_001(t: float, r: float, n: int = 2) -> PlaneCandidate:
    """The explicit type I pair offered for the triple (0, 0, 1)."""
    if abs(math.sin(t)) < 1e-9:
        raise DegenerateFrameError("sin t = 0")
    X = np.zeros((n + 1, n + 1), dtype=complex)
    X[1, 2] = -1j * math.sin(r) / math.tan(t)
    X[2, 1] = -np.conj(X[1, 2])
    X[2, 2] = 1j * ((2 - math.cos(r) ** 2) * math.cos(t) ** 2 - 1) / math.sin(t) ** 2
    Y = np.zeros((n + 1, n + 1), dtype=complex)
    Y[0, 0] = 1j
    return PlaneCandidate("I", X, Y, t, r)


def horizontality_scalars(t: float, r: float, tri, cand: PlaneCandidate,
                          params: MetricParams = DEFAULT_PARAMS) -> tuple[float, float]:
    """The closed-form circle conditions for X and for Y, in that order."""
    p, q1, q2 = tri
    eps = cand.epsilon
    ct, st, cr, sr = math.cos(t), math.sin(t), math.cos(r), math.sin(r)
    la = params.lambda1 * cand.alpha
    x2, x3, y3 = cand.x_(2), cand.x_(3), cand.y_(3)
    for_x = (la * p * ct**2 * cr**2 - la * q1
             + 2 * p * (eps * x2.imag * ct**2 * sr + x3.imag * ct * st) * cr)
    b = cand.beta
    for_y = (p * ct**2 * (b * sr**2 + eps * cr**2) + 2 * p * y3.imag * ct * st * sr
             - b * q2 - eps * q1)
    return for_x, for_y


@dataclass
class VWComparison:
    V: np.ndarray
    W: np.ndarray
    matched_row: str
    discrepancy: float


# Places where the closed-form V and W might live inside the conjugated matrices.
_ROW_CHOICES = {
    "first column below diagonal": lambda M: M[1:, 0],
    "first row right of diagonal": lambda M: M[0, 1:],
    "second row, columns 1 and 3..": lambda M: np.concatenate([[M[1, 0]], M[1, 2:]]),
}


def vw_closed_form(t: float, r: float, cand: PlaneCandidate,
                   params: MetricParams = DEFAULT_PARAMS) -> tuple[np.ndarray, np.ndarray]:
    eps = cand.epsilon
    ct, st, cr, sr = math.cos(t), math.sin(t), math.cos(r), math.sin(r)
    la = params.lambda1 * cand.alpha
    x2, x3, y3, b = cand.x_(2), cand.x_(3), cand.y_(3), cand.beta
    cx2, cx3, cy3 = np.conj(x2), np.conj(x3), np.conj(y3)
    V = [(eps * x2 * cr**2 + eps * cx2 * sr**2 - 1j * la * cr * sr) * ct + cx3 * sr * st,
         cr * (x3 * ct**2 + (-1j * la * cr - 2 * eps * x2.imag * 1j * sr) * st * ct
               + cx3 * st**2)]
    W = [cr * ((b - eps) * 1j * sr * ct - cy3 * st),
         y3 * ct**2 * sr - 1j * (b * sr**2 + eps * cr**2) * st * ct + cy3 * st**2 * sr]
    for j in range(4, cand.n + 2):
        V.append(cand.x_(j) * ct * cr)
        W.append(cand.y_(j) * ct * sr)
    return np.array(V, dtype=complex), np.array(W, dtype=complex)


def vw_vectors(t: float, r: float, cand: PlaneCandidate,
               params: MetricParams = DEFAULT_PARAMS) -> VWComparison:
    """Closed-form V, W and the place in the conjugated matrices they match best."""
    V, W = vw_closed_form(t, r, cand, params)
    B = frame_point(t, r, cand.n)
    MX, MY = ad_inv(B, phi1(cand.X, params)), ad_inv(B, cand.Y)
    best = None
    for name, pick in _ROW_CHOICES.items():
        gap = float(max(np.linalg.norm(pick(MX) - V), np.linalg.norm(pick(MY) - W)))
        if best is None or gap < best[1]:
            best = (name, gap)
    return VWComparison(V, W, best[0], best[1])


def _trig(x, y):
    # (x, y) = (cos^2 r, cos^2 t) with both in (0, 1).
    x, y = float(x), float(y)
    return math.sqrt(1 - y), math.sqrt(y), math.sqrt(1 - x), math.sqrt(x)


def construct_zero_plane(tri, x, y, params: MetricParams = DEFAULT_PARAMS,
                         n: int = 2) -> PlaneCandidate:
    """Build the type IV zero-curvature plane at (cos^2 r, cos^2 t) = (x, y).

    Exists exactly when f(x, y) >= 0; raises NoPlaneError otherwise.
    """
    tri = Triple(*tri)
    p, q1, q2 = tri
    if not is_admissible(tri):
        raise ValueError(f"{tuple(tri)} is not admissible")
    if tuple(tri) in EXCLUDED:
        raise ValueError(f"{tuple(tri)} is one of the excluded triples")
    x, y = Fraction(x), Fraction(y)
    if not (0 < x < 1 and 0 < y < 1):
        raise DegenerateFrameError("x and y must lie strictly inside (0, 1)")
    fval = build_f(tri)(x, y)
    if fval < 0:
        raise NoPlaneError(f"f{tuple(tri)}({x}, {y}) = {fval} < 0")
    dens = {"p*cos^2 t*cos^2 r - q1": p * x * y - q1,
            "p*cos^2 t*sin^2 r - q2": p * y * (1 - x) - q2,
            "p(p-2q1-q2)cos^2 r cos^2 t + q1(p-q2)": p * (p - 2 * q1 - q2) * x * y + q1 * (p - q2)}
    for name, v in dens.items():
        if v == 0:
            raise DegenerateFrameError(f"denominator {name} vanishes at ({x}, {y})")

    st, ct, sr, cr = _trig(x, y)
    X_, Y_ = float(x), float(y)
    num = (((q1 - q2) * X_ + p - 3 * q1) * p * X_ * Y_**2
           + ((-p * q2 + q1 * (q1 + 3 * q2)) * X_ + p * q1 * (1 - X_)) * Y_
           - q1**2 * (1 - Y_) - q1 * q2)
    den = -2 * sr * st * ct * float(dens["p(p-2q1-q2)cos^2 r cos^2 t + q1(p-q2)"])
    im_y3 = num / den
    # beta solves the circle condition for Y directly.
    beta = -(2 * p * im_y3 * st * sr * ct + p * Y_ * X_ - q1) / float(dens["p*cos^2 t*sin^2 r - q2"])
    # 1 - beta - Im(y3)^2 equals f / den^2, so the exact f gives the real part.
    re_y3 = math.sqrt(float(fval)) / abs(den)
    y3 = complex(re_y3, im_y3)
    x2 = (1j * sr * ct - y3.conjugate() * st) / (ct * cr)
    x3 = (y3 * sr * ct + 1j * (1 - beta) * st) / (ct * cr)
    la = (2 * p * (beta * st**2 - 1 + ct**2 * cr**2 - 2 * im_y3 * sr * st * ct)
          / float(dens["p*cos^2 t*cos^2 r - q1"]))
    t, r = math.acos(ct), math.acos(cr)
    return build_candidate("IV", t, r, la / params.lambda1, beta, (x2, x3), (y3,), n)


def w0_candidate_110(t: float, r: float, params: MetricParams = DEFAULT_PARAMS,
                     n: int = 2) -> PlaneCandidate:
    """The explicit type IV plane with W = 0 for the triple (1, 1, 0)."""
    ct, st, cr, sr = math.cos(t), math.sin(t), math.cos(r), math.sin(r)
    if abs(sr) < 1e-9 or abs(ct) < 1e-9:
        raise DegenerateFrameError("need sin r != 0 and cos t != 0")
    y3 = 1j * st / (ct * sr)
    beta = 1 - st**2 / (ct**2 * sr**2)
    x2, x3 = 1 + 0j, -1j * y3
    # Solve the circle condition for X, linear in lambda1*alpha.
    d = ct**2 * cr**2 - 1
    if abs(d) < 1e-12:
        raise DegenerateFrameError("cos t cos r = 1")
    la = -2 * (x2.imag * ct**2 * sr + x3.imag * ct * st) * cr / d
    return build_candidate("IV", t, r, la / params.lambda1, beta, (x2, x3), (y3,), n)


def w0_plane_110(t: float, r: float, params: MetricParams = DEFAULT_PARAMS,
                 n: int = 2) -> ResidualReport:
    return candidate_residuals(w0_candidate_110(t, r, params, n), (1, 1, 0), params)


# --- the fixed quasi-positive point ----------------------------------------

A0_FRAME = (3 * math.pi / 4, math.pi / 4)
A0_LEFT = (1, -1, -1)
A0_PRINTED = (
    lambda re, im: 1 - math.sqrt(2) * im,
    lambda re, im: -1 + 2 * math.sqrt(2) * im,
    lambda re, im: math.sqrt(2) * re,
    lambda re, im: 0.5 - 1.5 * math.sqrt(2) * im,
    lambda re, im: -re,
    lambda re, im: -math.sqrt(2) / 2 + 2 * im,
)


# The published solution uses the mirror convention y3 -> conj(y3),
# x2 -> conj(x2), x3 -> -conj(x3); it preserves x3 = -i x2 y3 and |y3|.
# These signs turn a published component into ours.
_MIRROR = (1, 1, 1, -1, -1, 1)


@dataclass
class A0Report:
    printed_solution_gap: float
    im_y3_roots: list
    re_y3_squared: list
    odd_terms: float
    contradiction: bool

    @property
    def im_y3_roots_mirrored(self) -> list:
        """Roots in the published sign convention."""
        return sorted(-v for v in self.im_y3_roots)

    def to_json(self) -> dict:
        return {"printed_solution_gap": self.printed_solution_gap,
                "im_y3_roots": self.im_y3_roots,
                "im_y3_roots_mirrored": self.im_y3_roots_mirrored,
                "re_y3_squared": self.re_y3_squared,
                "odd_terms": self.odd_terms, "contradiction": self.contradiction}


def _a0_equations(u: np.ndarray, y3: complex) -> np.ndarray:
    """Six real equations at A0 for u = (lambda1*alpha, beta, Re x2, Im x2, Re x3, Im x3).

    The circle conditions for X and Y, and V = W, all read off the
    conjugated matrices directly rather than from closed forms.
    """
    la, beta, a2, b2, a3, b3 = u
    n = 2
    tri = (np.array(A0_LEFT, dtype=float), (0, 0))
    B = frame_point(*A0_FRAME, n)
    fX = np.zeros((3, 3), dtype=complex)
    fX[0, 0] = 1j * la
    fX[1:, 0] = (complex(a2, b2), complex(a3, b3))
    fX[0, 1:] = -np.conj(fX[1:, 0])
    Y = np.zeros((3, 3), dtype=complex)
    Y[0, 0], Y[1, 1] = 1j, 1j * beta
    Y[2, 1], Y[1, 2] = y3, -np.conj(y3)
    diff = _p_vector(ad_inv(B, fX)) - _p_vector(ad_inv(B, Y))
    return np.array([_circle_trace(B, fX, tri), _circle_trace(B, Y, tri),
                     diff[0].real, diff[0].imag, diff[1].real, diff[1].imag])


def _a0_solve(y3: complex) -> np.ndarray:
    zero = _a0_equations(np.zeros(6), y3)
    M = np.column_stack([_a0_equations(e, y3) - zero for e in np.eye(6)])
    return np.linalg.solve(M, -zero)


def quasipositive_A0_check() -> A0Report:
    """Rule out type IV zero planes at A0 for left exponents (1, -1, -1), q = (0, 0)."""
    rng = np.random.default_rng(0)
    gap = 0.0
    for re, im in rng.uniform(-2, 2, size=(8, 2)):
        u = _a0_solve(complex(re, im))
        printed = [sgn * f(re, -im) for sgn, f in zip(_MIRROR, A0_PRINTED)]
        gap = max(gap, max(abs(u[k] - printed[k]) for k in range(6)))

    # The remaining link x3 = -i x2 y3 has imaginary part Im x3 + Re(x2 y3) = 0,
    # quadratic in (Re y3, Im y3).  Fit it, then eliminate Re y3 via beta = 1 - |y3|^2.
    def link(re, im):
        u = _a0_solve(complex(re, im))
        x2, x3 = complex(u[2], u[3]), complex(u[4], u[5])
        return (x3 + 1j * x2 * complex(re, im)).imag

    pts = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]
    basis = lambda a, b: [1, a, b, a * a, a * b, b * b]
    c = np.linalg.solve(np.array([basis(a, b) for a, b in pts], dtype=float),
                        np.array([link(a, b) for a, b in pts]))
    odd = float(abs(c[1]) + abs(c[4]))
    # beta(Im y3) is affine: beta = b0 + b1*Im y3.
    b0 = _a0_solve(0j)[1]
    b1 = _a0_solve(1j)[1] - b0
    # Re^2 = 1 - b0 - b1*Im - Im^2
    quad = [c[5] - c[3], c[2] - c[3] * b1, c[0] + c[3] * (1 - b0)]
    roots = sorted(float(z.real) for z in np.roots(quad))
    re_sq = [float(1 - b0 - b1 * v - v * v) for v in roots]
    return A0Report(float(gap), roots, re_sq, odd, all(v < 0 for v in re_sq))


# --- the V = 0 determinant --------------------------------------------------

def small_det_check(t: float, r: float, tri) -> tuple[float, float]:
    """Determinant of the V = 0 system in (lambda1*alpha, Im x2, Im x3), and its closed form.

    The system is assembled from the conjugated matrix: imaginary parts of
    the first two entries of its p-column, plus the circle condition for X.
    """
    p, q1, q2 = tri
    B = frame_point(t, r, 2)

    def rows(u):
        la, b2, b3 = u
        fX = np.zeros((3, 3), dtype=complex)
        fX[0, 0] = 1j * la
        fX[1:, 0] = (1j * b2, 1j * b3)
        fX[0, 1:] = -np.conj(fX[1:, 0])
        col = _p_vector(ad_inv(B, fX))
        return np.array([col[0].imag, col[1].imag, _circle_trace(B, fX, tri)])

    M = np.column_stack([rows(e) for e in np.eye(3)])
    closed = (p - 2 * q1) * math.cos(r) ** 2 * math.cos(t) ** 3 + q1 * math.cos(t) ** 3
    return float(np.linalg.det(M)), closed


def small_det_derived(t: float, r: float, tri) -> float:
    """Exact determinant of the assembled system in closed form.

    It vanishes identically only for p = q1 = 0, like the published form,
    but differs from it as a function of (t, r).
    """
    p, q1, _ = tri
    ct, cr = math.cos(t), math.cos(r)
    return -cr * ct * ((p - 2 * q1) * cr**2 * ct**2 + q1)


# --- batch verification -----------------------------------------------------

@dataclass
class GridPoint:
    x: Fraction
    y: Fraction
    f_sign: int
    constructed: bool
    max_residual: float | None = None
    wilking_after_switch: float | None = None
    error: str | None = None

    def to_json(self) -> dict:
        out = {"x": f"{self.x.numerator}/{self.x.denominator}",
               "y": f"{self.y.numerator}/{self.y.denominator}",
               "f_sign": self.f_sign, "constructed": self.constructed}
        if self.max_residual is not None:
            out["max_residual"] = self.max_residual
            out["wilking_after_switch"] = self.wilking_after_switch
        if self.error:
            out["error"] = self.error
        return out

    @property
    def consistent(self) -> bool:
        if self.f_sign < 0:
            return not self.constructed and self.error is not None
        if not self.constructed:
            return self.error is not None and self.error.startswith("degenerate")
        return max(self.max_residual, self.wilking_after_switch) <= CONSTRUCTION_TOL


def check_point(tri, x, y, params: MetricParams = DEFAULT_PARAMS, n: int = 2) -> GridPoint:
    x, y = Fraction(x), Fraction(y)
    fval = build_f(Triple(*tri))(x, y)
    sign = (fval > 0) - (fval < 0)
    try:
        cand = construct_zero_plane(tri, x, y, params, n)
    except NoPlaneError as exc:
        return GridPoint(x, y, sign, False, error=f"no-plane: {exc}")
    except DegenerateFrameError as exc:
        return GridPoint(x, y, sign, False, error=f"degenerate: {exc}")
    kerin = candidate_residuals(cand, tri, params)
    B = frame_point(cand.t, cand.r, n)
    wil = wilking_residuals(B, phi1(cand.X, params), cand.Y, tri, params)
    return GridPoint(x, y, sign, True, kerin.max_residual, wil.max_residual)


def grid_points(grid: int) -> list[tuple[Fraction, Fraction]]:
    """Interior grid (i/(grid+1), j/(grid+1)) for 1 <= i, j <= grid."""
    d = grid + 1
    return [(Fraction(i, d), Fraction(j, d)) for i in range(1, d) for j in range(1, d)]


def _grid_chunk(args):
    tri, pts, params, n = args
    return [check_point(tri, x, y, params, n) for x, y in pts]


def verify_grid(tri, grid: int = 12, params: MetricParams = DEFAULT_PARAMS, n: int = 2,
                workers: int = 1) -> list[GridPoint]:
    pts = grid_points(grid)
    if workers <= 1:
        return _grid_chunk((tri, pts, params, n))
    chunks = [pts[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        rows = [g for part in pool.map(_grid_chunk, [(tri, c, params, n) for c in chunks])
                for g in part]
    return sorted(rows, key=lambda g: (g.x, g.y))
