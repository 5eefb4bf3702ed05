"""Dense Gaussian elimination over GF(p^d).

Matrices are int64 numpy arrays of field codes (see ``fields``).  Pivoting is
deterministic: the first nonzero entry in the current column.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch
from ..fields import FieldSpec


def rref(F: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {A.shape}")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r, c:] = F.mul(A[r, c:], int(F.inv(lead)))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[np.ix_(hit, np.arange(c, cols))] = F.sub(
                A[np.ix_(hit, np.arange(c, cols))], F.mul(col[hit, None], A[r, c:][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: FieldSpec, A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Columns form a basis of {x : A x = 0}."""
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(piv):
            basis[pc, k] = int(F.neg(R[i, fc]))
    return basis


def left_nullspace(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Rows form a basis of {y : y A = 0}."""
    return nullspace(F, A.T).T


def row_basis(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1]).astype(np.int64)
    R, piv = rref(F, A)
    return R[: len(piv)]


def inverse(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"cannot invert non-square shape {A.shape}")
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise np.linalg.LinAlgError("matrix is singular over the field")
    return R[:, n:]


def is_invertible(F: FieldSpec, A: np.ndarray) -> bool:
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def solve(F: FieldSpec, A: np.ndarray, b: np.ndarray):
    """Solve ``A x = b``.  Returns (particular solution or None, kernel basis)."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    B = b[:, None] if vec else b
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch(f"A has {A.shape[0]} rows but b has {B.shape[0]}")
    n = A.shape[1]
    kernel = nullspace(F, A)
    R, piv = rref(F, np.hstack([A, B]))
    if any(c >= n for c in piv):
        return None, kernel
    x = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n:]
    return (x[:, 0] if vec else x), kernel


def span_basis(F: FieldSpec, mats: list[np.ndarray], shape=None) -> list[np.ndarray]:
    """Basis (as matrices) of the span of a list of equally-shaped matrices."""
    if not mats:
        return []
    shape = shape or mats[0].shape
    rows = row_basis(F, np.stack([m.reshape(-1) for m in mats]))
    return [r.reshape(shape) for r in rows]


def coordinates(F: FieldSpec, basis_rows: np.ndarray, vectors: np.ndarray) -> np.ndarray | None:
    """Coordinates of each row of ``vectors`` in the row space ``basis_rows``
    (rows linearly independent).  None if some vector is outside the span."""
    x, _ = solve(F, basis_rows.T, vectors.T)
    if x is None:
        return None
    return x.T


def reduce_against(F: FieldSpec, echelon: np.ndarray, pivots: list[int], vectors: np.ndarray) -> np.ndarray:
    """Reduce rows of ``vectors`` modulo an RREF row space; zero rows mean membership."""
    if len(pivots) == 0:
        return np.array(vectors, dtype=np.int64)
    coeffs = vectors[:, pivots]
    return F.sub(vectors, F.matmul(coeffs, echelon[: len(pivots)]))


@dataclass
class FFMatrix:
    """A dense matrix over a finite field (thin wrapper used at API boundaries)."""

    field: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64)
        if self.entries.ndim != 2:
            raise DimensionMismatch("FFMatrix entries must be two-dimensional")
        if self.entries.size and (self.entries.min() < 0 or self.entries.max() >= self.field.q):
            raise ValueError("entries must be field codes in [0, q)")

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.entries.shape} @ {other.entries.shape}")
        return FFMatrix(self.field, self.field.matmul(self.entries, other.entries))

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        return FFMatrix(self.field, self.field.add(self.entries, other.entries))

    def __sub__(self, other: "FFMatrix") -> "FFMatrix":
        return FFMatrix(self.field, self.field.sub(self.entries, other.entries))

    def __eq__(self, other):
        return isinstance(other, FFMatrix) and self.field == other.field and \
            np.array_equal(self.entries, other.entries)

    def rank(self) -> int:
        return rank(self.field, self.entries)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "FFMatrix":
        return cls(field, np.eye(n, dtype=np.int64))


def ff_solve(A: FFMatrix, b: FFMatrix):
    """Particular solution of ``A x = b`` (or None) plus a kernel basis of A."""
    if A.field != b.field:
        raise DimensionMismatch("matrices over different fields")
    if A.rows != b.rows:
        raise DimensionMismatch(f"A has {A.rows} rows, b has {b.rows}")
    x, ker = solve(A.field, A.entries, b.entries)
    sol = None if x is None else FFMatrix(A.field, x)
    kernel = [FFMatrix(A.field, ker[:, [j]]) for j in range(ker.shape[1])]
    return sol, kernel
