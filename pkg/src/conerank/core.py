"""Validated nonnegative containers and the index/vectorization conventions.

All externally visible indices are 1-based.  Vectorization is column-major:
entry (i, j) of an m x n matrix lands at position (j-1)*m + i of the vector.
Support is decided by strict comparison against ``eps_zero``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError

DEFAULT_EPS_ZERO = 1e-12


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


class NonnegMatrix:
    """Dense nonnegative matrix with an explicit support threshold.

    Entries are stored row-major.  Construction rejects negative or
    non-finite entries.  Zero-size matrices (m = 0 or n = 0) are permitted
    so that block composition has an identity element.

    Parameters
    ----------
    entries : array_like, shape (m, n)
    eps_zero : float, optional
        Support threshold; entries <= eps_zero count as zeros.
    """

    def __init__(self, entries, eps_zero: float = DEFAULT_EPS_ZERO):
        arr = np.asarray(entries, dtype=float)
        if arr.ndim != 2:
            raise InputValidationError(f"expected a 2-d array, got ndim={arr.ndim}")
        if arr.size and not np.all(np.isfinite(arr)):
            raise InputValidationError("matrix entries must be finite")
        if arr.size and float(arr.min()) < 0.0:
            raise InputValidationError("matrix entries must be nonnegative")
        if not (float(eps_zero) >= 0.0):
            raise InputValidationError("eps_zero must be a nonnegative real")
        self._entries = _frozen_array(arr)
        self._eps_zero = float(eps_zero)

    @property
    def m(self) -> int:
        return self._entries.shape[0]

    @property
    def n(self) -> int:
        return self._entries.shape[1]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def eps_zero(self) -> float:
        return self._eps_zero

    def __getitem__(self, ij):
        """Entry at 1-based (i, j)."""
        i, j = ij
        return float(self._entries[i - 1, j - 1])

    def __repr__(self):
        return f"NonnegMatrix({self.m}x{self.n}, eps_zero={self._eps_zero:g})"


class NonnegTensor:
    """Dense nonnegative tensor of order >= 2.

    Parameters
    ----------
    entries : array_like with ndim >= 2
    eps_zero : float, optional
    """

    def __init__(self, entries, eps_zero: float = DEFAULT_EPS_ZERO):
        arr = np.asarray(entries, dtype=float)
        if arr.ndim < 2:
            raise InputValidationError(f"tensor order must be >= 2, got {arr.ndim}")
        if any(d < 1 for d in arr.shape):
            raise InputValidationError("all tensor dimensions must be positive")
        if not np.all(np.isfinite(arr)):
            raise InputValidationError("tensor entries must be finite")
        if float(arr.min()) < 0.0:
            raise InputValidationError("tensor entries must be nonnegative")
        if not (float(eps_zero) >= 0.0):
            raise InputValidationError("eps_zero must be a nonnegative real")
        self._entries = _frozen_array(arr)
        self._eps_zero = float(eps_zero)

    @classmethod
    def from_flat(cls, shape, data, eps_zero: float = DEFAULT_EPS_ZERO) -> "NonnegTensor":
        """Build from a flat list with the LAST index varying fastest."""
        shape = tuple(int(d) for d in shape)
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 1 or arr.size != int(np.prod(shape)):
            raise InputValidationError(
                f"flat data length {arr.size} does not match shape {shape}")
        return cls(arr.reshape(shape, order="C"), eps_zero=eps_zero)

    @property
    def shape(self) -> tuple:
        return self._entries.shape

    @property
    def order(self) -> int:
        return self._entries.ndim

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def eps_zero(self) -> float:
        return self._eps_zero

    def __getitem__(self, idx):
        """Entry at a 1-based multi-index."""
        return float(self._entries[tuple(k - 1 for k in idx)])

    def __repr__(self):
        return f"NonnegTensor({'x'.join(map(str, self.shape))}, eps_zero={self._eps_zero:g})"


class CpInputMatrix:
    """Symmetric nonnegative matrix validated as a candidate cp-rank input.

    Checks the necessary conditions for complete positivity: symmetry within
    ``tol``, nonnegative entries and positive semidefiniteness within ``tol``
    (smallest eigenvalue >= -tol * spectral norm).  Membership in the
    completely positive cone itself is not decided here.
    """

    def __init__(self, entries, tol: float = 1e-8):
        arr = np.asarray(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputValidationError("cp input must be a square matrix")
        if arr.shape[0] < 1:
            raise InputValidationError("cp input must have size n >= 1")
        if not np.all(np.isfinite(arr)):
            raise InputValidationError("cp input entries must be finite")
        if not (float(tol) >= 0.0):
            raise InputValidationError("tolerance must be a nonnegative real")
        scale = float(np.abs(arr).max()) if arr.size else 0.0
        if float(np.abs(arr - arr.T).max()) > tol * max(scale, 1.0):
            raise InputValidationError("cp input must be symmetric within tolerance")
        if float(arr.min()) < -tol * max(scale, 1.0):
            raise InputValidationError("cp input entries must be nonnegative")
        sym = np.clip((arr + arr.T) / 2.0, 0.0, None)
        eigs = np.linalg.eigvalsh(sym)
        norm = float(np.abs(eigs).max()) if eigs.size else 0.0
        if eigs[0] < -tol * max(norm, 1.0):
            raise InputValidationError(
                f"cp input must be positive semidefinite within tolerance "
                f"(lambda_min = {eigs[0]:.3e})")
        self._entries = _frozen_array(sym)
        self._tol = float(tol)

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def tol(self) -> float:
        return self._tol

    def __getitem__(self, ij):
        i, j = ij
        return float(self._entries[i - 1, j - 1])

    def __repr__(self):
        return f"CpInputMatrix({self.n}x{self.n}, tol={self._tol:g})"


@dataclass(frozen=True)
class MatrixIndexPair:
    """Two 1-based matrix index pairs with the partial order (i,j) < (k,l).

    The order is strict iff i < k AND j < l.
    """

    first: tuple
    second: tuple

    def __post_init__(self):
        for pair in (self.first, self.second):
            if len(pair) != 2 or any(int(v) < 1 for v in pair):
                raise InputValidationError(f"index pair must be 1-based, got {pair}")

    @property
    def is_strict(self) -> bool:
        (i, j), (k, l) = self.first, self.second
        return i < k and j < l

    def partner(self) -> "MatrixIndexPair":
        """The swapped pair ((i,l),(k,j)) appearing in the 2x2-minor equations."""
        (i, j), (k, l) = self.first, self.second
        return MatrixIndexPair((i, l), (k, j))


def vectorize(A) -> np.ndarray:
    """Column-major vectorization; entry (i, j) lands at position (j-1)*m + i."""
    arr = A.entries if isinstance(A, (NonnegMatrix, CpInputMatrix)) else np.asarray(A, dtype=float)
    return arr.flatten(order="F")


def unvectorize(v, m: int, n: int) -> np.ndarray:
    """Inverse of vectorize for an m x n shape."""
    arr = np.asarray(v, dtype=float)
    if arr.size != m * n:
        raise InputValidationError(
            f"cannot reshape a length-{arr.size} vector into {m} x {n}"
        )
    return arr.reshape((m, n), order="F")


def kronecker(A, B) -> np.ndarray:
    """Kronecker product A (x) B; satisfies vec(AXB) = (B^T (x) A) vec(X)."""
    a = A.entries if isinstance(A, (NonnegMatrix, CpInputMatrix)) else np.asarray(A, dtype=float)
    b = B.entries if isinstance(B, (NonnegMatrix, CpInputMatrix)) else np.asarray(B, dtype=float)
    return np.kron(a, b)


def support(A) -> list:
    """1-based indices of entries strictly above eps_zero, sorted lexicographically."""
    if isinstance(A, NonnegMatrix):
        arr, eps = A.entries, A.eps_zero
        return [(i + 1, j + 1) for i in range(arr.shape[0]) for j in range(arr.shape[1])
                if arr[i, j] > eps]
    if isinstance(A, NonnegTensor):
        arr, eps = A.entries, A.eps_zero
        return [tuple(k + 1 for k in idx) for idx in np.ndindex(arr.shape) if arr[idx] > eps]
    raise InputValidationError(f"support expects NonnegMatrix or NonnegTensor, got {type(A)!r}")


def diag_scale(A: NonnegMatrix, d_left, d_right) -> NonnegMatrix:
    """Return D1 A D2 for strictly positive diagonal scale vectors."""
    dl = np.asarray(d_left, dtype=float)
    dr = np.asarray(d_right, dtype=float)
    if dl.shape != (A.m,) or dr.shape != (A.n,):
        raise InputValidationError("scale vector lengths must match the matrix shape")
    if dl.size and dl.min() <= 0.0 or dr.size and dr.min() <= 0.0:
        raise InputValidationError("scale entries must be strictly positive")
    return NonnegMatrix(dl[:, None] * A.entries * dr[None, :], eps_zero=A.eps_zero)


def direct_sum(A: NonnegMatrix, B: NonnegMatrix) -> NonnegMatrix:
    """Block-diagonal composition [[A, 0], [0, B]]."""
    out = np.zeros((A.m + B.m, A.n + B.n))
    out[:A.m, :A.n] = A.entries
    out[A.m:, A.n:] = B.entries
    return NonnegMatrix(out, eps_zero=max(A.eps_zero, B.eps_zero))
