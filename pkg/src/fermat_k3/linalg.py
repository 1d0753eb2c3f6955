"""Exact Gaussian elimination over any field whose elements support
``+ - * /`` and truthiness (Fractions, CycNumbers)."""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return [], []
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a[:r], pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, n_cols=None, zero=Fraction(0), one=Fraction(1)):
    """Basis of {x : rows . x = 0}, one vector per free column, in RREF-dual form."""
    if n_cols is None:
        n_cols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n_cols
        v[f] = one
        for row, pc in zip(red, pivots):
            v[pc] = zero - row[f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution x of rows . x = rhs, or None if inconsistent."""
    n_cols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if n_cols in pivots:
        return None
    zero = rhs[0] - rhs[0]
    x = [zero] * n_cols
    for row, pc in zip(red, pivots):
        x[pc] = row[n_cols]
    return x


def mat_vec(rows, v):
    out = []
    for r in rows:
        acc = None
        for a, b in zip(r, v):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out
