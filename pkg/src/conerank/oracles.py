"""Closed-form values, example generators and analytic baseline bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CpInputMatrix, NonnegMatrix, NonnegTensor
from .errors import InputValidationError, ZeroInputError

RANK_TOL = 1e-9


@dataclass(frozen=True)
class TwoByTwo:
    """2x2 nonnegative matrix laid out as [[x, y], [z, w]]."""
    x: float
    y: float
    z: float
    w: float

    def __post_init__(self):
        vals = (self.x, self.y, self.z, self.w)
        if any(not math.isfinite(v) or v < 0.0 for v in vals):
            raise InputValidationError("2x2 entries must be finite and nonnegative")


def _diag_anti_products(M: TwoByTwo):
    xw = M.x * M.w
    yz = M.y * M.z
    if xw == 0.0 and yz == 0.0:
        if M.x == M.y == M.z == M.w == 0.0:
            raise ZeroInputError("zero matrix has rank 0")
        return None  # rank-one support pattern
    return xw, yz


def tau_plus_2x2(M: TwoByTwo) -> float:
    """Closed form: 2 - xw/yz when xw <= yz, else 2 - yz/xw; 1 on the
    degenerate xw = yz = 0 pattern with a positive entry."""
    prods = _diag_anti_products(M)
    if prods is None:
        return 1.0
    xw, yz = prods
    return 2.0 - xw / yz if xw <= yz else 2.0 - yz / xw


def tau_plus_sos_2x2(M: TwoByTwo) -> float:
    """Closed form of the SDP relaxation: 2 / (1 + min-ratio of xw, yz)."""
    prods = _diag_anti_products(M)
    if prods is None:
        return 1.0
    xw, yz = prods
    return 2.0 / (1.0 + xw / yz) if xw <= yz else 2.0 / (1.0 + yz / xw)


def psd_rank_lemma_value(A, rank_tol: float = RANK_TOL) -> float:
    """rank(A) for symmetric PSD A, via the eigendecomposition reduction of
    the identity rank(A) = min { t : vec(A) vec(A)^T <= t * A (x) A }.

    Counts eigenvalues above rank_tol * lambda_max.
    """
    arr = A.entries if isinstance(A, CpInputMatrix) else np.asarray(A, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputValidationError("expected a square matrix")
    scale = float(np.abs(arr).max()) if arr.size else 0.0
    if float(np.abs(arr - arr.T).max()) > 1e-8 * max(scale, 1.0):
        raise InputValidationError("expected a symmetric matrix")
    eigs = np.linalg.eigvalsh((arr + arr.T) / 2.0)
    lam_max = float(eigs[-1])
    if lam_max <= 0.0:
        if float(eigs[0]) < -rank_tol * max(abs(float(eigs[0])), 1.0):
            raise InputValidationError("matrix is not positive semidefinite")
        return 0.0
    if float(eigs[0]) < -rank_tol * lam_max * len(eigs):
        raise InputValidationError("matrix is not positive semidefinite")
    return float(int(np.sum(eigs > rank_tol * lam_max)))


def gen_nested_rect_matrix(a: float, b: float) -> NonnegMatrix:
    """The 4x4 nested-rectangles matrix M(a, b), parameters in [0, 1]."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise InputValidationError("parameters must lie in [0, 1]")
    return NonnegMatrix([
        [1 - a, 1 + a, 1 + a, 1 - a],
        [1 - b, 1 - b, 1 + b, 1 + b],
        [1 + a, 1 - a, 1 - a, 1 + a],
        [1 + b, 1 + b, 1 - b, 1 - b],
    ])


def nested_triangle_exists(a: float, b: float) -> bool:
    """Whether a triangle can be nested between the two rectangles, which
    happens iff (1+a)(1+b) <= 2; equivalent to rank_+(M(a,b)) = 3."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise InputValidationError("parameters must lie in [0, 1]")
    return (1.0 + a) * (1.0 + b) <= 2.0


def gen_tensor_example(x: float, w: float) -> NonnegTensor:
    """The 2x2x2 tensor with slices [[x,1],[1,w]] and [[w,1],[1,x]]."""
    if not (x >= 0.0 and w >= 0.0):
        raise InputValidationError("parameters must be nonnegative")
    T = np.empty((2, 2, 2))
    T[:, :, 0] = [[x, 1.0], [1.0, w]]
    T[:, :, 1] = [[w, 1.0], [1.0, x]]
    return NonnegTensor(T)


def tensor_rank_le2(x: float, w: float) -> bool:
    """Whether the example tensor has nonnegative rank <= 2: xw >= 1 or x = w."""
    if not (x >= 0.0 and w >= 0.0):
        raise InputValidationError("parameters must be nonnegative")
    return x * w >= 1.0 or x == w


def gen_cp_example(a: float, b: float) -> CpInputMatrix:
    """The 5x5 completely positive example: diagonal (3+a, 3+a, 2+b, 2+b, 2+b)
    over the off-diagonal ones pattern of K_{2,3}; diagonally dominant for
    all a, b >= 0."""
    if not (a >= 0.0 and b >= 0.0):
        raise InputValidationError("parameters must be nonnegative")
    A = np.array([
        [3 + a, 0, 1, 1, 1],
        [0, 3 + a, 1, 1, 1],
        [1, 1, 2 + b, 0, 0],
        [1, 1, 0, 2 + b, 0],
        [1, 1, 0, 0, 2 + b],
    ], dtype=float)
    return CpInputMatrix(A)


def mutual_information_bound(A: NonnegMatrix) -> float:
    """2**I(X;Y) of the distribution A / sum(A), a lower bound on the
    nonnegative rank.  Logs in bits; 0 * log 0 = 0."""
    arr = A.entries
    total = float(arr.sum())
    if total <= 0.0:
        raise ZeroInputError("zero matrix has rank 0")
    P = arr / total
    p = P.sum(axis=1)
    q = P.sum(axis=0)
    info = 0.0
    for i in range(P.shape[0]):
        for j in range(P.shape[1]):
            if P[i, j] > 0.0:
                info += P[i, j] * math.log2(P[i, j] / (p[i] * q[j]))
    return 2.0 ** info
