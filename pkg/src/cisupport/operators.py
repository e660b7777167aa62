"""Cohomology operators on resolutions over a complete intersection.

Lifting the differentials of a minimal R-resolution to the ambient ring
leaves a square that decomposes along the defining forms:
d~ . d~ = sum_i f_i t_i.  The degree -2 chain maps t_i induce commuting
degree +2 operators chi_i on Ext(M, k); evaluating a polynomial in the chi
variables as a chain map drives the mapping-cone construction.
"""

from __future__ import annotations

import numpy as np

from . import modlinalg
from .cimodule import CIRing, GradedModule
from .field import PrimeField
from .groebner import member_witness
from .pmatrix import PolyMatrix
from .poly import Poly, mono_mul
from .resolution import FreeResolution, minimal_resolution


def lift_to_ambient(res: FreeResolution):
    """Entry-wise ambient preimages of the differentials.

    Entries of a resolution over a quotient are stored as normal forms
    modulo the quotient's Groebner basis, which are already canonical
    representatives in the ambient ring, so the lift is the identity on
    entry data.
    """
    return [res.differential(i) for i in range(1, res.length + 1)]


class OperatorFamily:
    """Chain maps t_i[n]: F_n -> F_{n-2} over the ambient ring.

    ops[i][n] holds t_{i+1} at homological degree n (n >= 2), satisfying
    d~_{n-1} d~_n = sum_i f_i t_i[n] entry-exactly.
    """

    def __init__(self, ring: CIRing, res: FreeResolution, ops):
        self.ring = ring
        self.res = res
        self.ops = ops  # list (per i) of dict {n: PolyMatrix}
        self.window = res.length

    def t(self, i: int, n: int) -> PolyMatrix:
        return self.ops[i][n]

    def scalar_t(self, i: int, n: int):
        """Reduction of t_i[n] modulo the irrelevant ideal, as a k-matrix."""
        m = self.ops[i][n]
        a = np.zeros((m.nrows, m.ncols), dtype=np.int64)
        for r in range(m.nrows):
            for c in range(m.ncols):
                e = m.entries[r][c]
                if not e.is_zero():
                    a[r, c] = e.constant_coeff()
        return a

    def verify_identity(self):
        """d~ d~ = sum f_i t_i, entry-exact over the ambient ring."""
        res = self.res
        for n in range(2, self.window + 1):
            prod = res.differential(n - 1).mul(res.differential(n))
            acc = PolyMatrix.zero(prod.ring, prod.row_twists, prod.col_twists)
            for i, f in enumerate(self.ring.fs):
                t = self.ops[i][n]
                for r in range(prod.nrows):
                    for c in range(prod.ncols):
                        if not t.entries[r][c].is_zero():
                            acc.entries[r][c] = acc.entries[r][c] + f * t.entries[r][c]
            for r in range(prod.nrows):
                for c in range(prod.ncols):
                    if prod.entries[r][c] - acc.entries[r][c] != prod.ring.zero():
                        raise AssertionError(f"operator identity fails at n={n}")
        return True

    def verify_chain_property(self):
        """d_{n-2} t_i[n] = t_i[n-1] d_n modulo the quotient ideal."""
        ring = self.ring
        res = self.res
        for i in range(ring.c):
            for n in range(3, self.window + 1):
                left = res.differential(n - 2).mul(
                    self.ops[i][n], reduce=lambda q: ring.nf(q)
                )
                right = self.ops[i][n - 1].mul(
                    res.differential(n), reduce=lambda q: ring.nf(q)
                )
                for r in range(left.nrows):
                    for c in range(left.ncols):
                        if left.entries[r][c] != right.entries[r][c]:
                            raise AssertionError(
                                f"chain property fails for t_{i+1} at n={n}"
                            )
        return True


def operator_family(ring: CIRing, res: FreeResolution, strategy: str = "forward") -> OperatorFamily:
    """Solve d~_{n-1} d~_n = sum_i f_i t_i[n] entry-wise for all n in the window.

    strategy chooses the generator order handed to the witness solver
    ("forward" or "reverse"); any witness works, and the induced action on
    Ext(M, k) does not depend on the choice.
    """
    amb = ring.ambient
    fs = list(ring.fs)
    order = list(range(ring.c))
    if strategy == "reverse":
        order = order[::-1]
    elif strategy != "forward":
        raise ValueError("strategy must be 'forward' or 'reverse'")
    gens = [fs[i] for i in order]
    fdeg = [f.degree() for f in fs]
    ops = [dict() for _ in range(ring.c)]
    for n in range(2, res.length + 1):
        prod = res.differential(n - 1).mul(res.differential(n))
        mats = [
            PolyMatrix.zero(amb, prod.row_twists, tuple(t - fdeg[i] for t in prod.col_twists))
        for i in range(ring.c)
        ]
        for r in range(prod.nrows):
            for c in range(prod.ncols):
                e = prod.entries[r][c]
                if e.is_zero():
                    continue
                wit = member_witness(e, gens)
                if wit is None:
                    raise AssertionError(
                        "square of lifted differential not in the defining ideal"
                    )
                for pos, i in enumerate(order):
                    mats[i].entries[r][c] = wit[pos]
        for i in range(ring.c):
            ops[i][n] = mats[i]
    return OperatorFamily(ring, res, ops)


class ExtKModule:
    """Graded action of k[chi_1..chi_c] on Ext(M, k) over a window.

    dims[n] = dim Ext^n(M, k); chi_maps[i][n] is the matrix of
    chi_{i+1}: Ext^n -> Ext^{n + deg f_{i+1}} in the standard bases.
    """

    def __init__(self, ring: CIRing, dims, chi_maps, window: int):
        self.ring = ring
        self.dims = dims
        self.chi_maps = chi_maps
        self.window = window

    def chi(self, i: int, n: int) -> np.ndarray:
        return self.chi_maps[i][n]

    def monomial_action(self, expo, n: int) -> np.ndarray:
        """Matrix of chi^expo acting from Ext^n, composing one variable at a time."""
        p = self.ring.field.p
        cur = np.eye(self.dims[n], dtype=np.int64)
        level = n
        for i in range(self.ring.c - 1, -1, -1):
            for _ in range(expo[i]):
                cur = self.chi_maps[i][level] @ cur % p
                level += 2
        return cur

    def verify_commutativity(self):
        p = self.ring.field.p
        c = self.ring.c
        for i in range(c):
            for j in range(i + 1, c):
                di = dj = 2
                for n in range(0, self.window - di - dj + 1):
                    a = self.chi_maps[j][n + di] @ self.chi_maps[i][n] % p
                    b = self.chi_maps[i][n + dj] @ self.chi_maps[j][n] % p
                    if not np.array_equal(a, b):
                        raise AssertionError(
                            f"chi_{i+1} and chi_{j+1} do not commute at n={n}"
                        )
        return True


def _span_solver_columns(ring: CIRing, g: int):
    """Columns expressing deg-g multiples of defining forms in the monomial basis.

    Returns (matrix S, labels) where labels[j] = (i, mono) and the column is
    the coefficient vector of f_i * mono among degree-g monomials.
    """
    amb = ring.ambient
    monos_g = amb.monomials_of_degree(g)
    idx = {m: t for t, m in enumerate(monos_g)}
    cols = []
    labels = []
    one = amb.field.one
    for i, f in enumerate(ring.fs):
        d = f.degree()
        if d > g:
            continue
        for m in amb.monomials_of_degree(g - d):
            vec = [0] * len(monos_g)
            for fm, fc in f.terms:
                vec[idx[mono_mul(fm, m)]] = fc
            cols.append(vec)
            labels.append((i, m))
    if not cols:
        return np.zeros((len(monos_g), 0), dtype=np.int64), []
    return np.array(cols, dtype=np.int64).T, labels


def _coeff_matrices(mat: PolyMatrix, p: int):
    """Decompose a polynomial matrix as {monomial: integer coefficient matrix}."""
    out = {}
    for r in range(mat.nrows):
        for c in range(mat.ncols):
            for m, cc in mat.entries[r][c].terms:
                a = out.get(m)
                if a is None:
                    a = np.zeros((mat.nrows, mat.ncols), dtype=np.int64)
                    out[m] = a
                a[r, c] = cc
    return out


def chi_action(ring: CIRing, module: GradedModule, window: int, engine: str = "auto") -> ExtKModule:
    """The k[chi]-action on Ext(M, k) over homological degrees [0, window].

    Works directly with the scalar parts of the operator decomposition: for
    each entry of the squared lifted differential whose twist gap equals
    deg f_i, the coefficient of f_i is a uniquely determined scalar, found by
    one linear solve per gap degree.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    amb = ring.ambient
    if not isinstance(amb.field, PrimeField):
        raise ValueError("chi actions are computed over prime fields")
    p = amb.field.p
    res = minimal_resolution(ring, module, window, engine)
    dims = list(res.betti[: window + 1])
    fdeg = [f.degree() for f in ring.fs]
    # scalar part of t_i[n] as matrix (b_{n-2} x b_n)
    scalar_t = [dict() for _ in range(ring.c)]
    span_cache = {}
    for n in range(2, window + 1):
        rows_tw = res.twists(n - 2)
        cols_tw = res.twists(n)
        bn2, bn = dims[n - 2], dims[n]
        tmats = [np.zeros((bn2, bn), dtype=np.int64) for _ in range(ring.c)]
        if bn2 and bn:
            gaps = {}
            for r in range(bn2):
                for c in range(bn):
                    g = cols_tw[c] - rows_tw[r]
                    if g in fdeg:
                        gaps.setdefault(g, []).append((r, c))
            if gaps:
                a_parts = _coeff_matrices(res.differential(n - 1), p)
                b_parts = _coeff_matrices(res.differential(n), p)
                needed = set(gaps)
                prod_coeffs = {}
                for m1, a1 in a_parts.items():
                    d1 = amb.wdeg(m1)
                    for m2, b2 in b_parts.items():
                        if d1 + amb.wdeg(m2) not in needed:
                            continue
                        m = mono_mul(m1, m2)
                        acc = prod_coeffs.get(m)
                        prod = a1 @ b2 % p
                        prod_coeffs[m] = prod if acc is None else (acc + prod) % p
                for g, entries in gaps.items():
                    if g not in span_cache:
                        span_cache[g] = _span_solver_columns(ring, g)
                    s_mat, labels = span_cache[g]
                    monos_g = amb.monomials_of_degree(g)
                    rhs = np.zeros((len(monos_g), len(entries)), dtype=np.int64)
                    for t, m in enumerate(monos_g):
                        cm = prod_coeffs.get(m)
                        if cm is None:
                            continue
                        for e_idx, (r, c) in enumerate(entries):
                            rhs[t, e_idx] = cm[r, c]
                    sol = modlinalg.solve(s_mat, rhs, p)
                    if sol is None:
                        raise AssertionError("square not decomposable along the forms")
                    for lbl_idx, (i, m) in enumerate(labels):
                        if fdeg[i] == g and m == amb.zero_mono:
                            for e_idx, (r, c) in enumerate(entries):
                                tmats[i][r, c] = sol[lbl_idx, e_idx]
        for i in range(ring.c):
            scalar_t[i][n] = tmats[i]
    chi_maps = []
    for i in range(ring.c):
        maps = {}
        for n in range(0, window - 1):
            maps[n] = scalar_t[i][n + 2].T % p
        chi_maps.append(maps)
    return ExtKModule(ring, dims, chi_maps, window)


def chi_action_from_family(family: OperatorFamily) -> ExtKModule:
    """Action induced by an explicitly computed operator family."""
    ring = family.ring
    p = ring.field.p
    dims = list(family.res.betti[: family.window + 1])
    chi_maps = []
    for i in range(ring.c):
        maps = {}
        for n in range(0, family.window - 1):
            maps[n] = family.scalar_t(i, n + 2).T % p
        chi_maps.append(maps)
    return ExtKModule(ring, dims, chi_maps, family.window)


def evaluate_chi_class(
    ring: CIRing,
    module: GradedModule,
    p_chi: Poly,
    window: int = None,
    engine: str = "auto",
):
    """Chain map over R representing a homogeneous class p(chi_1..chi_c).

    Returns a dict {n: PolyMatrix F_n -> F_{n-e}} for n = e..window, where
    e = 2 * deg(p).  The components commute with the differentials over R.
    """
    chi = ring.chi_ring()
    if p_chi.ring.key() != chi.key():
        raise ValueError("class must live in the chi coordinate ring")
    if p_chi.is_zero() or not p_chi.is_homogeneous():
        raise ValueError("class must be homogeneous and nonzero")
    d = p_chi.degree()
    if d < 1:
        raise ValueError("class must have chi-degree >= 1")
    e = 2 * d
    if window is None:
        window = e
    if window < e:
        raise ValueError("window too short for the class degree")
    res = minimal_resolution(ring, module, window, engine)
    family = operator_family(ring, res)
    amb = ring.ambient
    out = {}
    for n in range(e, window + 1):
        acc = None
        for mono, coeff in p_chi.terms:
            comp = None
            level = n
            for i in range(ring.c - 1, -1, -1):
                for _ in range(mono[i]):
                    step = family.t(i, level)
                    comp = step if comp is None else step.mul(comp)
                    level -= 2
            comp = comp.scale(coeff)
            acc = comp if acc is None else _add(acc, comp)
        out[n] = acc.map_entries(lambda q: ring.nf(q))
    return out


def _add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    entries = [
        [a.entries[i][j] + b.entries[i][j] for j in range(a.ncols)]
        for i in range(a.nrows)
    ]
    return PolyMatrix(a.ring, entries, a.row_twists, a.col_twists)
