"""Exact integer linear algebra: Smith normal form, echelon forms, kernels.

Sparse matrices are lists of columns, each column a ``{row: value}`` dict.
All arithmetic is on Python ints.
"""

from __future__ import annotations

import heapq
from typing import Mapping, Sequence

SparseColumn = dict[int, int]


def _axpy(target: dict, coef: int, source: Mapping) -> None:
    """target += coef * source, dropping zeros."""
    if not coef:
        return
    for k, v in source.items():
        nv = target.get(k, 0) + coef * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


# -- dense -------------------------------------------------------------------

def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(S, U, V)`` with ``U @ m @ V == S`` and U, V unimodular.

    S is diagonal with nonnegative entries, each dividing the next.  Pivots
    are always the nonzero entry of least absolute value.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, row)) for row in m]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        if q:
            ra, rs = a[dst], a[src]
            for k in range(cols):
                ra[k] += q * rs[k]
            ua, us = u[dst], u[src]
            for k in range(rows):
                ua[k] += q * us[k]

    def add_col(dst: int, src: int, q: int) -> None:
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                _, i, j = min(rest)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v


def diagonal(s: Sequence[Sequence[int]]) -> list[int]:
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


# -- sparse ------------------------------------------------------------------

def dense_to_columns(m: Sequence[Sequence[int]]) -> tuple[list[SparseColumn], int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return [{i: m[i][j] for i in range(rows) if m[i][j]} for j in range(cols)], rows


def invariant_factors(columns: Sequence[Mapping[int, int]], nrows: int) -> list[int]:
    """Nonzero Smith invariants of a sparse integer matrix.

    Unit pivots are eliminated sparsely first (Markowitz-style choice by
    column length, then row length); whatever is left goes through the dense
    :func:`smith_normal_form`.  The length of the result is the rank.
    """
    cols: dict[int, dict[int, int]] = {j: dict(c) for j, c in enumerate(columns) if c}
    rows: dict[int, dict[int, int]] = {}
    for j, c in cols.items():
        for i, x in c.items():
            rows.setdefault(i, {})[j] = x
    units = 0
    progress = True
    while progress:
        progress = False
        heap = [(len(c), j) for j, c in cols.items()]
        heapq.heapify(heap)
        while heap:
            _, j = heapq.heappop(heap)
            col = cols.get(j)
            if not col:
                continue
            best = None
            for i, x in col.items():
                if x in (1, -1):
                    key = len(rows[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                continue
            r = best[1]
            pv = col[r]
            for j2, x in list(rows[r].items()):
                if j2 == j:
                    continue
                coef = -x * pv
                c2 = cols[j2]
                for i, y in col.items():
                    nv = c2.get(i, 0) + coef * y
                    if nv:
                        c2[i] = nv
                        rows.setdefault(i, {})[j2] = nv
                    else:
                        c2.pop(i, None)
                        rows[i].pop(j2, None)
                if not c2:
                    del cols[j2]
            for i in col:
                rows[i].pop(j, None)
            del cols[j]
            # row r now only meets column j, which is gone
            for j2 in list(rows.get(r, {})):
                cols[j2].pop(r, None)
                if not cols[j2]:
                    del cols[j2]
            rows.pop(r, None)
            units += 1
            progress = True
    if not cols:
        return [1] * units
    row_ids = sorted({i for c in cols.values() for i in c})
    col_ids = sorted(cols)
    index = {i: k for k, i in enumerate(row_ids)}
    dense = [[0] * len(col_ids) for _ in row_ids]
    for k, j in enumerate(col_ids):
        for i, x in cols[j].items():
            dense[index[i]][k] = x
    s, _, _ = smith_normal_form(dense)
    return [1] * units + diagonal(s)


def rank(columns: Sequence[Mapping[int, int]], nrows: int) -> int:
    return len(invariant_factors(columns, nrows))


class ColumnEchelon:
    """Unimodular column reduction ``E = A V`` of a sparse matrix.

    Rows are processed in increasing order; each row keeps at most one
    active column (its pivot) after gcd-style reduction.  Columns still
    active at the end are zero, and their transforms form a basis of the
    integer kernel.
    """

    def __init__(self, columns: Sequence[Mapping[int, int]], nrows: int, track: bool = True):
        self.nrows = nrows
        self.ncols = len(columns)
        e = [dict(c) for c in columns]
        v = [{j: 1} for j in range(self.ncols)] if track else None
        by_row: dict[int, set[int]] = {}
        for j, c in enumerate(e):
            for i in c:
                by_row.setdefault(i, set()).add(j)
        active = set(range(self.ncols))
        pivots: list[tuple[int, int, int]] = []

        def update(c: int, coef: int, p: int) -> None:
            before = set(e[c])
            _axpy(e[c], coef, e[p])
            after = set(e[c])
            for i in after - before:
                by_row.setdefault(i, set()).add(c)
            for i in before - after:
                by_row[i].discard(c)
            if v is not None:
                _axpy(v[c], coef, v[p])

        for r in sorted(by_row):
            cand = sorted(c for c in by_row.get(r, ()) if c in active)
            while len(cand) > 1:
                p = min(cand, key=lambda c: (abs(e[c][r]), len(e[c]), c))
                pv = e[p][r]
                rest = []
                for c in cand:
                    if c == p:
                        continue
                    update(c, -(e[c][r] // pv), p)
                    if e[c].get(r):
                        rest.append(c)
                cand = [p] + rest
            if cand:
                p = cand[0]
                pivots.append((r, p, e[p][r]))
                active.discard(p)
        self.columns = e
        self.transform = v
        self.pivots = pivots
        self.kernel_columns = sorted(active)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel_basis(self) -> list[SparseColumn]:
        if self.transform is None:
            raise ValueError("kernel basis needs a tracked transform")
        return [dict(self.transform[c]) for c in self.kernel_columns]

    def solve(self, b: Mapping[int, int]) -> SparseColumn | None:
        """An integer x with A x = b, or None when there is none."""
        if self.transform is None:
            raise ValueError("solving needs a tracked transform")
        res = {k: x for k, x in b.items() if x}
        x: SparseColumn = {}
        for r, p, g in self.pivots:
            t = res.get(r, 0)
            if not t:
                continue
            if t % g:
                return None
            q = t // g
            _axpy(res, -q, self.columns[p])
            _axpy(x, q, self.transform[p])
        if res:
            return None
        return x

    def is_unimodular_square(self) -> bool:
        return self.ncols == self.nrows and self.rank == self.nrows and all(abs(g) == 1 for _, _, g in self.pivots)

    def surjects(self) -> bool:
        """Columns span all of Z^nrows."""
        return self.rank == self.nrows and all(abs(g) == 1 for _, _, g in self.pivots)

    def determinant_abs(self) -> int:
        """|det| for a square matrix (0 if singular)."""
        if self.ncols != self.nrows or self.rank < self.nrows:
            return 0
        out = 1
        for _, _, g in self.pivots:
            out *= abs(g)
        return out


def kernel_basis(columns: Sequence[Mapping[int, int]], nrows: int) -> list[SparseColumn]:
    return ColumnEchelon(columns, nrows).kernel_basis()
