"""Small exact linear-algebra kernels over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import IntPolynomial

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def row_reduce(rows: Sequence[Sequence]) -> Matrix:
    """Reduced row echelon form with zero rows dropped."""
    a = to_fractions(rows)
    if not a:
        return []
    ncols = len(a[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(pivot_row, len(a)) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[pivot_row], a[pivot] = a[pivot], a[pivot_row]
        lead = a[pivot_row][col]
        a[pivot_row] = [x / lead for x in a[pivot_row]]
        for r in range(len(a)):
            if r != pivot_row and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[pivot_row])]
        pivot_row += 1
        if pivot_row == len(a):
            break
    return a[:pivot_row]


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows))


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis (as row vectors) of ``{x : rows @ x = 0}``."""
    reduced = row_reduce(rows) if rows else []
    pivots = []
    for row in reduced:
        pivots.append(next(i for i, x in enumerate(row) if x != 0))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def in_span(basis_rows: Sequence[Sequence], vector: Sequence) -> bool:
    return rank(list(basis_rows) + [list(vector)]) == rank(basis_rows)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def block_diag(*blocks: Sequence[Sequence[int]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def kron(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    """Kronecker product; the index of ``b`` varies fastest."""
    nb, mb = len(b), len(b[0])
    return [
        [a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(mb)]
        for i in range(len(a))
        for k in range(nb)
    ]


def charpoly(matrix: Sequence[Sequence]) -> IntPolynomial:
    """det(xI - M) for an integer matrix, via Hessenberg reduction (O(n^3))."""
    n = len(matrix)
    h = to_fractions(matrix)
    for m in range(1, n - 1):
        pivot = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if pivot is None:
            continue
        if pivot != m:
            h[pivot], h[m] = h[m], h[pivot]
            for row in h:
                row[pivot], row[m] = row[m], row[pivot]
        t = h[m][m - 1]
        for i in range(m + 1, n):
            u = h[i][m - 1] / t
            if u == 0:
                continue
            h[i] = [x - u * y for x, y in zip(h[i], h[m])]
            for row in h:
                row[m] += u * row[i]
    # p_k(x) = charpoly of leading k x k block
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [Fraction(0)] + prev  # x * p_{k-1}
        for i, c in enumerate(prev):
            cur[i] -= h[k - 1][k - 1] * c
        prod = Fraction(1)
        for i in range(k - 1, 0, -1):
            prod *= h[i][i - 1]
            coeff = h[i - 1][k - 1] * prod
            if coeff:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] -= coeff * c
        polys.append(cur)
    result = polys[n]
    if any(c.denominator != 1 for c in result):
        raise ArithmeticError("characteristic polynomial of an integer matrix is not integral")
    return IntPolynomial(int(c) for c in result)
