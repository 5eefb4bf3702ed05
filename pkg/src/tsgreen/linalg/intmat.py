"""Integer matrices: Hermite and Smith normal forms, lattice queries.

All arithmetic uses Python ints, so intermediate growth never overflows.
Matrices are lists of rows; a lattice is the Z-span of the *columns*.
"""
from __future__ import annotations

from dataclasses import dataclass, field

IntMatrix = list[list[int]]


def _shape(M: IntMatrix, ncols: int | None = None) -> tuple[int, int]:
    n = len(M)
    c = len(M[0]) if n else (ncols or 0)
    if any(len(r) != c for r in M):
        raise ValueError("ragged integer matrix")
    return n, c


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def matvec(A: IntMatrix, x: list[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: IntMatrix, ncols: int = 0) -> IntMatrix:
    if not A:
        return [[] for _ in range(ncols)]
    return [list(r) for r in zip(*A)]


@dataclass
class HNF:
    """Column-style Hermite form H = M U with U unimodular.

    ``pivots[t] = (row, col)``: column t of H has its first nonzero entry, a
    positive pivot, in that row; pivot rows strictly increase and every other
    entry of a pivot row to the left of its pivot is reduced into [0, pivot).
    """

    H: IntMatrix
    U: IntMatrix
    pivots: list[tuple[int, int]]

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass
class SNF:
    """Smith form D = S M T with S, T unimodular; ``divisors`` is the
    nonzero diagonal d_1 | d_2 | ... (all positive)."""

    D: IntMatrix
    S: IntMatrix
    T: IntMatrix
    divisors: list[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.divisors)


def hnf(M: IntMatrix, ncols: int | None = None) -> HNF:
    n, c = _shape(M, ncols)
    H = [list(map(int, r)) for r in M]
    U = identity(c)

    def colop(dst, src, k):  # col[dst] += k * col[src]
        for r in H:
            r[dst] += k * r[src]
        for r in U:
            r[dst] += k * r[src]

    def swap(a, b):
        for r in H:
            r[a], r[b] = r[b], r[a]
        for r in U:
            r[a], r[b] = r[b], r[a]

    def negate(a):
        for r in H:
            r[a] = -r[a]
        for r in U:
            r[a] = -r[a]

    pivots: list[tuple[int, int]] = []
    k = 0
    for i in range(n):
        if k == c:
            break
        while True:
            nz = [j for j in range(k, c) if H[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(H[i][j]), j))
            if j0 != k:
                swap(k, j0)
            done = True
            for j in range(k + 1, c):
                if H[i][j]:
                    colop(j, k, -(H[i][j] // H[i][k]))
                    if H[i][j]:
                        done = False
            if done:
                break
        if H[i][k] == 0:
            continue
        if H[i][k] < 0:
            negate(k)
        piv = H[i][k]
        for j in range(k):
            q = H[i][j] // piv
            if q:
                colop(j, k, -q)
        pivots.append((i, k))
        k += 1
    return HNF(H, U, pivots)


def snf(M: IntMatrix, ncols: int | None = None) -> SNF:
    n, c = _shape(M, ncols)
    D = [list(map(int, r)) for r in M]
    S = identity(n)
    T = identity(c)

    def rowop(dst, src, k):
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]

    def colop(dst, src, k):
        for r in D:
            r[dst] += k * r[src]
        for r in T:
            r[dst] += k * r[src]

    def rowswap(a, b):
        D[a], D[b] = D[b], D[a]
        S[a], S[b] = S[b], S[a]

    def colswap(a, b):
        for r in D:
            r[a], r[b] = r[b], r[a]
        for r in T:
            r[a], r[b] = r[b], r[a]

    t = 0
    while t < min(n, c):
        entries = [(abs(D[i][j]), i, j) for i in range(t, n) for j in range(t, c) if D[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        rowswap(t, i0)
        colswap(t, j0)
        while True:
            changed = False
            for i in range(t + 1, n):
                if D[i][t]:
                    rowop(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        changed = True
            for j in range(t + 1, c):
                if D[t][j]:
                    colop(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        changed = True
            if changed:
                entries = [(abs(D[i][t]), i, t) for i in range(t, n) if D[i][t]] + \
                          [(abs(D[t][j]), t, j) for j in range(t, c) if D[t][j]]
                _, i0, j0 = min(entries)
                rowswap(t, i0)
                colswap(t, j0)
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, c)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            rowop(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            S[t] = [-a for a in S[t]]
        t += 1
    divisors = [D[i][i] for i in range(min(n, c)) if D[i][i]]
    return SNF(D, S, T, divisors)


def rank(M: IntMatrix, ncols: int | None = None) -> int:
    return hnf(M, ncols).rank


def lattice_solve(M: IntMatrix, v: list[int], ncols: int | None = None) -> list[int] | None:
    """Integer x with M x = v, or None when v is outside the column lattice."""
    n, c = _shape(M, ncols)
    if len(v) != n:
        raise ValueError(f"vector of length {len(v)} for {n} rows")
    h = hnf(M, c)
    r = list(map(int, v))
    y = [0] * h.rank
    piv_row = {row: t for t, (row, _) in enumerate(h.pivots)}
    for i in range(n):
        if i in piv_row:
            t = piv_row[i]
            col = h.pivots[t][1]
            p = h.H[i][col]
            if r[i] % p:
                return None
            q = r[i] // p
            y[t] = q
            if q:
                for rr in range(n):
                    r[rr] -= q * h.H[rr][col]
        elif r[i] != 0:
            return None
    if any(r):
        return None
    return [sum(h.U[j][t] * y[t] for t in range(h.rank)) for j in range(c)]


def lattice_contains(M: IntMatrix, v: list[int], ncols: int | None = None) -> bool:
    return lattice_solve(M, v, ncols) is not None


def lattice_equals_full(M: IntMatrix, dim: int, ncols: int | None = None) -> bool:
    """Whether the column lattice of M is all of Z^dim."""
    if len(M) != dim:
        raise ValueError(f"matrix has {len(M)} rows, expected {dim}")
    s = snf(M, ncols)
    return s.rank == dim and all(d == 1 for d in s.divisors)
