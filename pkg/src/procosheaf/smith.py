"""Smith normal form and exact integer linear algebra.

Matrices are plain lists of lists of Python ints internally so that no
intermediate value can overflow; :func:`smith_normal_form` converts at the
boundary and accepts anything ``numpy.asarray`` understands.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product of integer matrices; ``inner`` is needed when ``a`` has no rows."""
    if inner is None:
        inner = len(a[0]) if a else len(b)
    cols = len(b[0]) if b else 0
    return [
        [sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for row in a
    ]


def matvec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


@dataclass(frozen=True)
class SNF:
    """Result of a Smith decomposition ``U @ M @ V == D``.

    ``V_inv`` is carried along because presentations are rebased through it.
    ``diagonal`` has length ``min(rows, cols)``; entries past ``rank`` are 0.
    """

    U: Matrix
    D: Matrix
    V: Matrix
    V_inv: Matrix
    rows: int
    cols: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[k][k] for k in range(min(self.rows, self.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(m: Matrix, cols: int | None = None) -> SNF:
    """Smith decomposition of an integer matrix given as a list of rows.

    ``cols`` must be passed when ``m`` has no rows.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if a else (cols or 0)
    U = identity(nr)
    V = identity(nc)
    Vi = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        if q:
            a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        # col_dst += q * col_src; inverse acts on rows of Vi
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    for t in range(min(nr, nc)):
        while True:
            pivot = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < nr and t < nc and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SNF(U=U, D=a, V=V, V_inv=Vi, rows=nr, cols=nc)


def _to_array(m: Matrix, shape: tuple[int, int]) -> np.ndarray:
    flat = [x for row in m for x in row]
    dtype = np.int64 if all(abs(x) < 2**62 for x in flat) else object
    return np.array(m, dtype=dtype).reshape(shape)


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...``.

    >>> U, D, V = smith_normal_form([[2, 4], [6, 8]])
    >>> D.tolist()
    [[2, 0], [0, 4]]
    """
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    rows, cols = arr.shape
    res = snf([[int(x) for x in row] for row in arr.tolist()], cols=cols)
    return (
        _to_array(res.U, (rows, rows)),
        _to_array(res.D, (rows, cols)),
        _to_array(res.V, (cols, cols)),
    )


def invariant_factors(m: Matrix, ngens: int) -> tuple[int, ...]:
    """Invariant factors of ``Z^ngens / rowspace(m)``, units dropped, zeros last."""
    res = snf(m, cols=ngens)
    torsion = [d for d in res.diagonal if d not in (0, 1)]
    return tuple(torsion) + (0,) * (ngens - res.rank)


def solve_integer(a: Matrix, b: list[int], ncols: int) -> list[int] | None:
    """An integer solution ``x`` of ``a @ x == b``, or ``None``."""
    res = snf(a, cols=ncols)
    y = matvec(res.U, b) if a else []
    w = [0] * ncols
    for k, yk in enumerate(y):
        d = res.D[k][k] if k < ncols else 0
        if d == 0:
            if yk != 0:
                return None
        elif yk % d:
            return None
        else:
            w[k] = yk // d
    return matvec(res.V, w)


def minors_gcd(m: Matrix, k: int) -> int:
    """gcd of all ``k x k`` minors, by brute force (independent of :func:`snf`)."""
    from itertools import combinations

    g = 0
    rows = len(m)
    cols = len(m[0]) if m else 0
    for ri in combinations(range(rows), k):
        for ci in combinations(range(cols), k):
            g = gcd(g, determinant([[m[i][j] for j in ci] for i in ri]))
    return g


def determinant(m: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]
