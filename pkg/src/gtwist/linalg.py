"""Exact dense linear algebra over the rationals.

Matrices are lists of rows, entries fractions.Fraction (ints accepted).
Everything here is deterministic; pivoting is first-nonzero.
"""

from __future__ import annotations

from fractions import Fraction as Q

Matrix = list


def zeros(n, m):
    return [[Q(0)] * m for _ in range(n)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Q(1)
    return out


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c == 0:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j] != 0:
                    oi[j] += c * bt[j]
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def rref(mat):
    """Row-reduce a copy of `mat`; return (rref_rows, pivot_columns)."""
    m = [[Q(x) for x in row] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat):
    if not mat or not mat[0]:
        return 0
    return len(rref(mat)[1])


def nullspace(mat, cols=None):
    """Basis of the right kernel of `mat` (rows = equations)."""
    if cols is None:
        cols = len(mat[0]) if mat else 0
    if not mat:
        return [[Q(1) if j == i else Q(0) for j in range(cols)] for i in range(cols)]
    red, pivots = rref(mat)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = []
    for fc in free:
        v = [Q(0)] * cols
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def nullity(mat, cols=None):
    if cols is None:
        cols = len(mat[0]) if mat else 0
    if not mat or cols == 0:
        return cols
    return cols - rank(mat)


def solve(mat, rhs):
    """One solution x of mat·x = rhs, or None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [list(mat[i]) + [Q(rhs[i])] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Q(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


class ReducedSpan:
    """Fully reduced row space over hashable, orderable keys.

    Unlike SparseSpan, inserted rows are back-eliminated, so the residual of
    `reduce` has support disjoint from the pivot set; residuals are honest
    coordinates over the complement of the pivots.
    """

    def __init__(self):
        self.rows = {}

    def reduce(self, vec):
        v = {k: Q(c) for k, c in vec.items() if c != 0}
        while True:
            hit = None
            for k in v:
                if k in self.rows:
                    hit = k
                    break
            if hit is None:
                return v
            f = v[hit]
            for kk, cc in self.rows[hit].items():
                nv = v.get(kk, Q(0)) - f * cc
                if nv == 0:
                    v.pop(kk, None)
                else:
                    v[kk] = nv

    def add(self, vec):
        v = self.reduce(vec)
        if not v:
            return False
        k = min(v.keys())
        inv = 1 / v[k]
        row = {kk: cc * inv for kk, cc in v.items()}
        for other in self.rows.values():
            if k in other:
                f = other[k]
                for kk, cc in row.items():
                    nv = other.get(kk, Q(0)) - f * cc
                    if nv == 0:
                        other.pop(kk, None)
                    else:
                        other[kk] = nv
        self.rows[k] = row
        return True

    def dim(self):
        return len(self.rows)


class SparseSpan:
    """Incremental row space over arbitrary hashable keys (online elimination).

    Rows are dicts key -> Fraction. `add` reduces against current pivots and
    inserts if independent; `reduce` returns the residual of a vector, which
    is empty iff the vector lies in the span.
    """

    def __init__(self):
        self.pivots = {}

    @staticmethod
    def _lead(v):
        return min(v.keys())

    def reduce(self, vec):
        v = {k: Q(c) for k, c in vec.items() if c != 0}
        while v:
            k = self._lead(v)
            row = self.pivots.get(k)
            if row is None:
                return v
            f = v[k]
            for kk, cc in row.items():
                nv = v.get(kk, Q(0)) - f * cc
                if nv == 0:
                    v.pop(kk, None)
                else:
                    v[kk] = nv
        return v

    def add(self, vec):
        """Insert vector; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        k = self._lead(v)
        inv = 1 / v[k]
        self.pivots[k] = {kk: cc * inv for kk, cc in v.items()}
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def dim(self):
        return len(self.pivots)
