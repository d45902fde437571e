"""Exact linear algebra over the rationals.

Rows are sparse dictionaries ``{column: value}``.  Elimination runs on
primitive integer rows (fraction-free: ``r <- a*r - b*pivot`` followed by
division by the row content), so no rational arithmetic happens until the
kernel or a solution is read off the reduced form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Row = dict  # column -> int or Fraction


def _primitive(row: dict) -> dict[int, int]:
    """Scale a rational row to a primitive integer row with positive leading entry."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    return _normalize(ints)


def _normalize(ints: dict[int, int]) -> dict[int, int]:
    if not ints:
        return ints
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    if g != 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def as_sparse_rows(matrix) -> list[dict]:
    """Accept dense lists of rows or lists of sparse dict rows."""
    rows = []
    for r in matrix:
        if isinstance(r, dict):
            rows.append({c: v for c, v in r.items() if v})
        else:
            rows.append({c: v for c, v in enumerate(r) if v})
    return rows


class Echelon:
    """Fully reduced row echelon basis of a growing row space.

    Each stored row is a primitive integer row whose pivot (its smallest
    column) is zero in every other stored row.
    """

    def __init__(self, ncols: int | None = None):
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        self._cols_index: dict[int, set[int]] = {}  # column -> pivots of rows using it

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def _eliminate(self, row: dict[int, int], pivot: int, prow: dict[int, int]) -> dict[int, int]:
        b = row[pivot]
        a = prow[pivot]
        g = gcd(a, b)
        ma, mb = a // g, b // g
        out = {c: v * ma for c, v in row.items()}
        for c, v in prow.items():
            nv = out.get(c, 0) - mb * v
            if nv:
                out[c] = nv
            else:
                out.pop(c, None)
        return _normalize(out)

    def reduce(self, row: dict) -> dict[int, int]:
        """Reduce a row against the stored basis; returns a primitive integer row."""
        r = _primitive(row)
        changed = True
        while r and changed:
            changed = False
            for c in sorted(set(r) & self.rows.keys()):
                if c in r:
                    r = self._eliminate(r, c, self.rows[c])
                    changed = True
        return r

    def add(self, row: dict) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        # clear the new pivot from the existing rows
        for q in list(self._cols_index.get(p, ())):
            old = self.rows[q]
            if p in old:
                new = self._eliminate(old, p, r)
                self._unindex(q, old)
                self.rows[q] = new
                self._index(q, new)
        self.rows[p] = r
        self._index(p, r)
        return True

    def _index(self, p, row):
        for c in row:
            self._cols_index.setdefault(c, set()).add(p)

    def _unindex(self, p, row):
        for c in row:
            s = self._cols_index.get(c)
            if s:
                s.discard(p)

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)


def rank(matrix) -> int:
    ech = Echelon()
    for r in as_sparse_rows(matrix):
        ech.add(r)
    return ech.rank


def rref(matrix, ncols: int) -> Echelon:
    ech = Echelon(ncols)
    for r in as_sparse_rows(matrix):
        ech.add(r)
    return ech


def kernel_from_echelon(ech: Echelon, ncols: int) -> list[dict[int, Fraction]]:
    pivots = set(ech.rows)
    free = [c for c in range(ncols) if c not in pivots]
    # column -> list of (pivot, pivot value, entry)
    by_col: dict[int, list[tuple[int, int, int]]] = {}
    for p, row in ech.rows.items():
        a = row[p]
        for c, v in row.items():
            if c != p:
                by_col.setdefault(c, []).append((p, a, v))
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, a, v in by_col.get(f, ()):
            vec[p] = Fraction(-v, a)
        basis.append(vec)
    return basis


def rank_kernel(matrix, ncols: int | None = None) -> tuple[int, list[list[Fraction]] | list[dict]]:
    """Exact rank and kernel basis of a matrix.

    Dense input (list of lists) yields dense kernel vectors; sparse input
    (list of dicts, ``ncols`` required) yields sparse ones.
    """
    dense = bool(matrix) and not isinstance(matrix[0], dict)
    if ncols is None:
        if not dense:
            raise ValueError("ncols is required for sparse input")
        ncols = len(matrix[0]) if matrix else 0
    ech = rref(matrix, ncols)
    ker = kernel_from_echelon(ech, ncols)
    if dense or not matrix:
        ker = [[v.get(c, Fraction(0)) for c in range(ncols)] for v in ker]
    return ech.rank, ker


def solve(matrix, rhs: Sequence, ncols: int) -> dict[int, Fraction] | None:
    """One solution of M x = rhs (free variables set to 0), or None."""
    rows = as_sparse_rows(matrix)
    rhs = list(rhs)
    if len(rhs) != len(rows):
        raise ValueError("right-hand side length does not match the row count")
    ech = Echelon(ncols + 1)
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = b
        ech.add(row)
    if ncols in ech.rows:
        return None
    sol = {}
    for p, row in ech.rows.items():
        v = row.get(ncols, 0)
        if v:
            sol[p] = Fraction(v, row[p])
    return sol


def solve_columns(columns: Sequence[dict], target: dict) -> dict[int, Fraction] | None:
    """Find coefficients c with sum_j c_j columns[j] = target."""
    rows: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows.setdefault(key, {})[j] = v
    for key in target:
        rows.setdefault(key, {})
    keys = sorted(rows, key=repr)
    return solve([rows[k] for k in keys], [target.get(k, 0) for k in keys], len(columns))


def mat_vec(rows: Sequence[dict], vec: dict) -> dict:
    out = {}
    for i, r in enumerate(rows):
        s = sum((v * vec[c] for c, v in r.items() if c in vec), Fraction(0))
        if s:
            out[i] = s
    return out


def columns_to_rows(columns: Sequence[dict], nrows: int | None = None) -> list[dict]:
    n = nrows if nrows is not None else 1 + max((max(c) for c in columns if c), default=-1)
    rows = [dict() for _ in range(n)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows[i][j] = v
    return rows


def to_dense(rows: Sequence[dict], ncols: int) -> list[list[Fraction]]:
    return [[Fraction(r.get(c, 0)) for c in range(ncols)] for r in rows]


def mat_mul_dense(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    if not a or not b:
        return [[Fraction(0)] * (len(b[0]) if b else 0) for _ in a]
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


# -- exact linear programming -------------------------------------------------

def lp_maximize(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence):
    """Maximize c.x subject to A_eq x = b_eq, x >= 0, exactly (two-phase simplex, Bland's rule).

    Returns ``(status, value, x)`` with status in {"optimal", "infeasible", "unbounded"}.
    """
    m = len(A_eq)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A_eq]
    b = [Fraction(v) for v in b_eq]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # tableau columns: n originals, m artificials
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r, col):
        pv = T[r][col]
        T[r] = [v / pv for v in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = col

    def run(cost, allowed):
        while True:
            # reduced costs
            entering = None
            for j in range(width):
                if j not in allowed or j in basis:
                    continue
                rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, set(range(width)))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return "infeasible", None, None
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    status = run(cost, set(range(n)))
    if status == "unbounded":
        return status, None, None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return "optimal", sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0)), x


def solve_dense(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique-or-any solution of a dense system; None if inconsistent."""
    ncols = len(a[0]) if a else 0
    sol = solve(a, b, ncols)
    if sol is None:
        return None
    return [sol.get(i, Fraction(0)) for i in range(ncols)]
