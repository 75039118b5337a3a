"""Smith normal form over the integers.

Entries are kept within signed 64-bit range; any intermediate value that
leaves it raises ``SNFOverflow`` instead of wrapping.  Pivots are chosen
by minimal absolute value to delay growth.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..errors import SNFOverflow

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class SNFResult:
    factors: tuple  # d_1 | d_2 | ... | d_r, all positive
    rank: int

    @property
    def torsion(self):
        return tuple(d for d in self.factors if d > 1)


def _check(x):
    if x > INT64_MAX or x < -INT64_MAX:
        raise SNFOverflow(f"entry {x} exceeds 64-bit range")
    return x


def smith_normal_form(matrix):
    """Invariant factors and rank of a dense integer matrix (list of rows)."""
    a = [list(row) for row in matrix]
    for row in a:
        for x in row:
            _check(x)
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] = _check(ri[j] - q * rt[j])
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for i in range(t, m):
                            a[i][j] = _check(a[i][j] - q * a[i][t])
                    if a[t][j]:
                        done = False
            if done:
                # enforce divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(t, n):
                    a[t][j] = _check(a[t][j] + a[bad][j])
                continue
            # move the new smallest entry of row/column t into the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return SNFResult(tuple(diag), len(diag))


def sparse_smith(columns, nrows):
    """Invariant factors of a sparse matrix given as ``[{row: value}, ...]``.

    Unit pivots are eliminated sparsely (each contributes a factor 1); the
    small residual block goes through the dense routine.
    """
    cols = {j: {i: v for i, v in col.items() if v} for j, col in enumerate(columns)}
    cols = {j: c for j, c in cols.items() if c}
    rows = {}
    for j, col in cols.items():
        for i, v in col.items():
            rows.setdefault(i, {})[j] = _check(v)
    ones = 0
    heap = [(len(c), j) for j, c in cols.items()]
    heapq.heapify(heap)
    stuck = set()
    while heap:
        size, j = heapq.heappop(heap)
        col = cols.get(j)
        if col is None or j in stuck:
            continue
        if len(col) != size:
            heapq.heappush(heap, (len(col), j))
            continue
        pivot = None
        for i, v in col.items():
            if v in (1, -1) and (pivot is None or len(rows[i]) < len(rows[pivot])):
                pivot = i
        if pivot is None:
            stuck.add(j)
            continue
        u = col[pivot]
        prow = rows.pop(pivot)
        # clear column j in other rows using row ``pivot``
        for i, v in list(col.items()):
            if i == pivot:
                continue
            q = v * u
            r = rows[i]
            for jj, w in prow.items():
                nv = _check(r.get(jj, 0) - q * w)
                c2 = cols[jj]
                if nv:
                    r[jj] = nv
                    c2[i] = nv
                else:
                    r.pop(jj, None)
                    c2.pop(i, None)
        for jj in prow:
            cj = cols.get(jj)
            if cj is None:
                continue
            cj.pop(pivot, None)
            if jj != j:
                if not cj:
                    del cols[jj]
                else:
                    stuck.discard(jj)
                    heapq.heappush(heap, (len(cj), jj))
        cols.pop(j, None)
        ones += 1
        for i in list(rows):
            if not rows[i]:
                del rows[i]
    rest_cols = sorted(j for j, c in cols.items() if c)
    rest_rows = sorted({i for j in rest_cols for i in cols[j]})
    if rest_cols:
        ri = {i: k for k, i in enumerate(rest_rows)}
        dense = [[0] * len(rest_cols) for _ in rest_rows]
        for k, j in enumerate(rest_cols):
            for i, v in cols[j].items():
                dense[ri[i]][k] = v
        res = smith_normal_form(dense)
        factors = (1,) * ones + res.factors
    else:
        factors = (1,) * ones
    return SNFResult(tuple(factors), len(factors))
