"""Small dense linear algebra over exact rationals (and mpmath reals).

Matrices are lists of rows.  Everything here is deliberately naive: the
systems that show up (weight slices, module closures, quotient
complements) have at most a few hundred columns.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

Row = list


def _is_zero(x, tol) -> bool:
    if tol is None:
        return x == 0
    return abs(x) <= tol


def rref(rows: Sequence[Sequence], tol=None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns).

    With ``tol=None`` arithmetic is exact and zero tests are exact;
    otherwise pivots smaller than ``tol`` in absolute value are treated as
    zero and the largest available pivot is used.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        if tol is None:
            p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        else:
            p = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
            if _is_zero(m[p][c], tol):
                p = None
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and not _is_zero(m[i][c], tol):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, tol=None) -> int:
    return len(rref(rows, tol)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : A v = 0}, one vector per free column, in the
    reduced echelon normal form (free coordinate 1, other free ones 0)."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list:
    """Solve the square system a x = b exactly; raises on singular input."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]


class EchelonBasis:
    """Incrementally maintained reduced basis of a growing subspace.

    ``add`` returns True when the vector enlarges the span.  Vectors are
    reduced against stored pivots only, so insertion order decides which
    vectors are kept, which is what the greedy complement and module
    closure rely on.
    """

    def __init__(self, ncols: int, tol=None):
        self.ncols = ncols
        self.tol = tol
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def reduce(self, v) -> list:
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if not _is_zero(c, self.tol):
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        if self.tol is None:
            pc = next((i for i, x in enumerate(v) if x != 0), None)
        else:
            pc = max(range(self.ncols), key=lambda i: abs(v[i]), default=None)
            if pc is not None and _is_zero(v[pc], self.tol):
                pc = None
        if pc is None:
            return False
        piv = v[pc]
        v = [x / piv for x in v]
        for i, row in enumerate(self.rows):
            c = row[pc]
            if not _is_zero(c, self.tol):
                self.rows[i] = [a - c * b for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(pc)
        return True

    def contains(self, v) -> bool:
        return all(_is_zero(x, self.tol) for x in self.reduce(v))

    def __len__(self) -> int:
        return len(self.rows)


def solve_with_defaults(a: Sequence[Sequence], b: Sequence, defaults: Sequence):
    """One exact solution of a x = b: free variables take ``defaults``.

    Returns None when the system is inconsistent.
    """
    n = len(defaults)
    if not a:
        return list(defaults)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(d) for d in defaults]
    free = [c for c in range(n) if c not in pivots]
    for row, pc in zip(red, pivots):
        x[pc] = row[n] - sum(row[f] * x[f] for f in free)
    return x


def minimax_residual(target: Sequence[Fraction], columns: Sequence[Sequence[Fraction]]):
    """Exact value of min_u max_i |target_i - (sum_j u_j columns[j])_i|.

    A floating point LP locates the optimum and its active constraints.  The
    value is then certified in exact arithmetic from both sides: a dual
    solution supported on the active set gives a lower bound, and a primal
    point attaining it gives the matching upper bound.  Returns (value, u).
    """
    from scipy.optimize import linprog

    n = len(columns)
    if n == 0:
        return max(abs(x) for x in target), []
    rows = [i for i in range(len(target))
            if target[i] != 0 or any(col[i] != 0 for col in columns)]
    m = len(rows)
    if m == 0:
        return Fraction(0), [Fraction(0)] * n
    bmat = np.array([[float(columns[j][i]) for j in range(n)] for i in rows])
    a = np.array([float(target[i]) for i in rows])
    # variables (u, t): minimise t subject to a - B u <= t and B u - a <= t
    c = np.zeros(n + 1)
    c[-1] = 1.0
    a_ub = np.vstack([
        np.hstack([-bmat, -np.ones((m, 1))]),
        np.hstack([bmat, -np.ones((m, 1))]),
    ])
    b_ub = np.concatenate([-a, a])
    # t >= 0 is implied by the paired rows; leaving t free keeps all dual weight on them
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status != 0:
        raise RuntimeError(f"minimax LP failed: {res.message}")
    duals = -res.ineqlin.marginals
    active = [int(i) for i in np.flatnonzero(duals > 1e-9)]
    signs = [1 if idx < m else -1 for idx in active]
    where = [rows[idx % m] for idx in active]

    # dual: y >= 0, sum y = 1, sum_i y_i sgn_i B_i = 0; value sum y_i sgn_i a_i
    deq = [[sg * columns[j][i] for sg, i in zip(signs, where)] for j in range(n)]
    deq.append([Fraction(1)] * len(active))
    y = solve_with_defaults(deq, [Fraction(0)] * n + [Fraction(1)],
                            [Fraction(float(duals[idx])).limit_denominator(10 ** 6)
                             for idx in active])
    if y is None or any(v < 0 for v in y):
        raise RuntimeError("could not certify the minimax dual exactly")
    value = sum(yi * sg * target[i] for yi, sg, i in zip(y, signs, where))

    # primal point on the active constraints at level ``value``.  Rows that are
    # tight without carrying dual weight can be pushed over by rounding the free
    # variables; such rows join the equality set and the solve is repeated.
    eqs = list(zip(signs, where))
    defaults = [Fraction(float(v)).limit_denominator(10 ** 9) for v in res.x[:n]]
    for _ in range(len(target) + 1):
        peq = [[-sg * columns[j][i] for j in range(n)] for sg, i in eqs]
        prhs = [value - sg * target[i] for sg, i in eqs]
        u = solve_with_defaults(peq, prhs, defaults)
        if u is None:
            raise RuntimeError("could not certify the minimax primal exactly")
        over = []
        for i in range(len(target)):
            r = target[i] - sum(u[j] * columns[j][i] for j in range(n))
            if abs(r) > value:
                over.append((1 if r > 0 else -1, i))
        if not over:
            return value, u
        eqs.extend(over)
    raise RuntimeError("certified primal point is infeasible")
