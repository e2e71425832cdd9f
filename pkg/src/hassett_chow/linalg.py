"""Integer matrices and Smith normal form with Python's big integers."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence


@dataclass
class IntegerMatrix:
    """Sparse integer matrix stored as one ``{column: value}`` dict per row."""

    nrows: int
    ncols: int
    rows: list[dict[int, int]]

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = [{j: int(x) for j, x in enumerate(r) if x} for r in data]
        return cls(len(rows), ncols, rows)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                out[i][j] = x
        return out


@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]  # nonzero invariant factors, each dividing the next

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def _normalize_chain(diag: list[int]) -> tuple[int, ...]:
    """Turn any list of nonzero diagonal entries into the divisibility chain."""
    d = sorted(abs(x) for x in diag if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            a, b = d[i], d[j]
            if b % a:
                g = gcd(a, b)
                d[i], d[j] = g, a // g * b
    return tuple(sorted(d))


def _dense_diagonal(a: list[list[int]]) -> list[int]:
    """Diagonalize by row and column operations, pivoting on the smallest entry."""
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    top = 0
    while top < min(m, n):
        best = None
        for i in range(top, m):
            for j in range(top, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[top], a[pi] = a[pi], a[top]
        for r in a:
            r[top], r[pj] = r[pj], r[top]
        while True:
            p = a[top][top]
            done = True
            for i in range(top + 1, m):
                if a[i][top]:
                    q = a[i][top] // p
                    ri, rt = a[i], a[top]
                    for j in range(top, n):
                        ri[j] -= q * rt[j]
                    if ri[top]:
                        done = False
            for j in range(top + 1, n):
                if a[top][j]:
                    q = a[top][j] // p
                    for i in range(top, m):
                        a[i][j] -= q * a[i][top]
                    if a[top][j]:
                        done = False
            if done:
                break
            # a remainder is smaller than the pivot: move it into place and repeat
            best = None
            for i in range(top, m):
                if a[i][top] and (best is None or abs(a[i][top]) < best[0]):
                    best = (abs(a[i][top]), i, top)
            for j in range(top, n):
                if a[top][j] and abs(a[top][j]) < best[0]:
                    best = (abs(a[top][j]), top, j)
            _, pi, pj = best
            a[top], a[pi] = a[pi], a[top]
            for r in a:
                r[top], r[pj] = r[pj], r[top]
        diag.append(a[top][top])
        top += 1
    return diag


def smith_normal_form(M: IntegerMatrix) -> SmithForm:
    """Invariant factors of ``M``.

    Unit pivots are eliminated sparsely first (the usual case for relation
    matrices with entries in {-1, 0, 1}); whatever is left is reduced densely.
    """
    rows = {i: dict(r) for i, r in enumerate(M.rows) if r}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    ones = 0
    while True:
        pivot = None
        for i, r in rows.items():
            for j, x in r.items():
                if x in (1, -1):
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if pivot is None or cost < pivot[0]:
                        pivot = (cost, i, j)
                        if cost == 0:
                            break
            if pivot and pivot[0] == 0:
                break
        if pivot is None:
            break
        _, pi, pj = pivot
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        sign = prow[pj]
        for i in list(cols[pj]):
            r = rows[i]
            q = r[pj] * sign
            for j, x in prow.items():
                y = r.get(j, 0) - q * x
                if y:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = y
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                del rows[i]
        del cols[pj]
        ones += 1
    rest_cols = sorted({j for r in rows.values() for j in r})
    pos = {j: k for k, j in enumerate(rest_cols)}
    dense = [[0] * len(rest_cols) for _ in rows]
    for k, r in enumerate(rows.values()):
        for j, x in r.items():
            dense[k][pos[j]] = x
    diag = [1] * ones + _dense_diagonal(dense)
    return SmithForm(_normalize_chain(diag))
