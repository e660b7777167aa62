"""Exact dense linear algebra mod p, vectorized with numpy int64 arrays.

Row reduction uses the first nonzero entry as pivot, so results are
deterministic.  A pure-python fallback handles coefficients from extension
fields, where matrices stay tiny.
"""

from __future__ import annotations

import numpy as np


def as_array(rows, cols=None):
    """Build an int64 matrix from a list of rows; explicit shape for empties."""
    if len(rows) == 0:
        return np.zeros((0, 0 if cols is None else cols), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form mod p; returns (matrix, pivot column list)."""
    m = a.copy() % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of {x : a @ x = 0 mod p}; shape (cols, dim)."""
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-int(r[i, fc])) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution x of a @ x = b mod p, or None; b may be a matrix."""
    rows, cols = a.shape
    bb = b.reshape(rows, -1) % p
    aug = np.concatenate([a % p, bb], axis=1)
    r, pivots = rref(aug, p)
    ncols_b = bb.shape[1]
    for pc in pivots:
        if pc >= cols:
            return None  # inconsistent system
    x = np.zeros((cols, ncols_b), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x if b.ndim > 1 else x[:, 0]


def in_span(span_cols: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Is column vector v in the column span of span_cols mod p?"""
    if not v.any():
        return True
    if span_cols.shape[1] == 0:
        return False
    return solve(span_cols, v, p) is not None


def complement_pivots(base: np.ndarray, cand: np.ndarray, p: int):
    """Indices of candidate columns extending the span of the base columns.

    Greedy from the left; returned indices are into cand's columns.
    """
    if cand.shape[1] == 0:
        return []
    stacked = np.concatenate([base, cand], axis=1) if base.shape[1] else cand
    _, pivots = rref(stacked, p)
    nb = base.shape[1]
    return [c - nb for c in pivots if c >= nb]


def field_rank(field, rows) -> int:
    """Rank over an arbitrary field object; rows is a list of lists."""
    mat = [list(r) for r in rows]
    if not mat or not mat[0]:
        return 0
    ncols = len(mat[0])
    rk = 0
    for c in range(ncols):
        piv = None
        for i in range(rk, len(mat)):
            if mat[i][c] != field.zero:
                piv = i
                break
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        inv = field.inv(mat[rk][c])
        mat[rk] = [field.mul(x, inv) for x in mat[rk]]
        for i in range(len(mat)):
            if i != rk and mat[i][c] != field.zero:
                f = mat[i][c]
                mat[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[i], mat[rk])]
        rk += 1
        if rk == len(mat):
            break
    return rk


def field_nullspace(field, rows, ncols):
    """Nullspace basis vectors (as lists) over an arbitrary field object."""
    mat = [list(r) for r in rows]
    pivots = []
    rk = 0
    for c in range(ncols):
        piv = None
        for i in range(rk, len(mat)):
            if mat[i][c] != field.zero:
                piv = i
                break
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        inv = field.inv(mat[rk][c])
        mat[rk] = [field.mul(x, inv) for x in mat[rk]]
        for i in range(len(mat)):
            if i != rk and mat[i][c] != field.zero:
                f = mat[i][c]
                mat[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(mat[i], mat[rk])]
        pivots.append(c)
        rk += 1
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(mat[i][fc])
        basis.append(v)
    return basis
