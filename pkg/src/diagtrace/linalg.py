"""Exact nullspaces by fraction-free Gauss-Jordan elimination."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from gmpy2 import mpq


def _integer_rows(matrix: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in matrix:
        row = [Fraction(int(v.numerator), int(v.denominator)) if hasattr(v, "denominator") else Fraction(v) for v in row]
        den = 1
        for v in row:
            den = lcm(den, v.denominator)
        rows.append([int(v * den) for v in row])
    return rows


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def row_reduce(matrix: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Integer reduced echelon form and pivot columns.

    Pivot rule: scan columns left to right and take the first remaining row
    with a non-zero entry.  Rows are kept primitive (content 1) so entries
    stay small; every pivot column is zero outside its pivot row.
    """
    rows = _integer_rows(matrix)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        sel = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv_row = rows[r]
        pv = piv_row[col]
        for i in range(len(rows)):
            if i == r or not rows[i][col]:
                continue
            f = rows[i][col]
            g = gcd(pv, f)
            a, b = pv // g, f // g
            rows[i] = _primitive([a * u - b * w for u, w in zip(rows[i], piv_row)])
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column, as ``mpq`` lists.

    The basis vector for free column ``f`` has a 1 in position ``f`` and zeros
    in the other free positions.
    """
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not matrix:
        return [[mpq(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    rows, pivots = row_reduce(matrix, ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, pc in zip(rows, pivots):
            if row[f]:
                v[pc] = mpq(-row[f], row[pc])
        basis.append(v)
    return basis


def rank(matrix: Sequence[Sequence], ncols: int | None = None) -> int:
    if not matrix:
        return 0
    return len(row_reduce(matrix, ncols)[1])


def mat_vec(matrix: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v)), mpq(0)) for row in matrix]
