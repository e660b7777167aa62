"""Ext vanishing tests and fast Tor ranks over hypersurface quotients.

Over a hypersurface A = Q/(f) the Tor ranks of a module are read off a free
A-resolution assembled from a finite ambient resolution together with a
system of multiplication-by-f homotopies; reducing that complex modulo the
irrelevant ideal leaves finite linear algebra.  The general Ext test applies
Hom(-, N) to a minimal resolution and compares kernel and image by Groebner
containments.
"""

from __future__ import annotations

import numpy as np

from . import modlinalg
from .cimodule import (
    CIRing,
    GradedModule,
    ambient_of,
    column_to_vec,
    is_residue_field,
    quotient_columns,
    restrict_to_ring,
    ring_nf,
    submodule_igb,
    vec_to_column,
)
from .field import PrimeField
from .groebner import module_groebner, module_syzygies
from .pmatrix import PolyMatrix
from .poly import PolyRing, mono_mul


class ColumnSolver:
    """Solve  sum_j c_j * columns[j] = target  exactly over a free ring."""

    def __init__(self, ring: PolyRing, twists, columns):
        self.ring = ring
        self.ncols = len(columns)
        vectors = [column_to_vec(c) for c in columns]
        self.gb = module_groebner(ring, twists, vectors, track=True)

    def solve(self, target_col):
        rem, quots = self.gb.reduce(column_to_vec(target_col), track=True)
        if rem:
            return None
        ring = self.ring
        field = ring.field
        coeffs = [ring.zero() for _ in range(self.ncols)]
        for t, qd in quots.items():
            trace = self.gb.traces[t]
            for (j, m), c in trace.items():
                coeffs[j] = coeffs[j] + ring.from_terms(
                    (mono_mul(m, qm), field.mul(c, qc)) for qm, qc in qd.items()
                )
        return coeffs


# ---------------------------------------------------------------------------
# hypersurface Tor ranks


class HypersurfaceComplex:
    """Free resolution data over A = Q/(f) built from an ambient resolution.

    Stores the finite ambient resolution G of the module together with the
    homotopy system sigma_t (sigma_1 trivializes multiplication by f, the
    higher ones fix up the squares), which determines a free A-resolution
    with underlying modules (+)_j G_{m-2j}.
    """

    def __init__(self, ring_a: CIRing, module: GradedModule):
        if ring_a.c != 1:
            raise ValueError("hypersurface complex needs a codimension-1 quotient")
        self.ring_a = ring_a
        amb = ring_a.ambient
        self.amb = amb
        self.f = ring_a.fs[0]
        mq = restrict_to_ring(module, amb).minimalized()
        self.module_q = mq
        length = amb.n + 1
        from .resolution import minimal_resolution

        res = minimal_resolution(amb, mq, length, engine="groebner")
        pd = res.projective_dimension()
        if pd is None:
            raise AssertionError("ambient resolution did not terminate")
        self.pd = pd
        self.res = res
        self.sigma = {}  # (t, i) -> PolyMatrix G_i -> G_{i+2t-1}
        self._solvers = {}
        self._build_homotopies()

    def _solver(self, i):
        if i not in self._solvers:
            d = self.res.differential(i)
            self._solvers[i] = ColumnSolver(self.amb, d.row_twists, d.columns())
        return self._solvers[i]

    def _zero_matrix(self, rows_twists, cols_twists):
        return PolyMatrix.zero(self.amb, rows_twists, cols_twists)

    def _identity_times_f(self, twists):
        m = PolyMatrix.zero(self.amb, twists, tuple(t + self.f.degree() for t in twists))
        for i in range(len(twists)):
            m.entries[i][i] = self.f
        return m

    def _compose(self, a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
        return a.mul(b)

    def _build_homotopies(self):
        res, pd = self.res, self.pd
        fdeg = self.f.degree()
        t = 1
        while t <= pd + 1:
            for i in range(0, pd + 1):
                target = i + 2 * t - 1
                # rhs: G_i -> G_{i + 2t - 2}
                if t == 1:
                    rhs = self._identity_times_f(res.twists(i))
                else:
                    rhs = None
                    for u in range(1, t):
                        left = self.sigma.get((u, i + 2 * (t - u) - 1))
                        right = self.sigma.get((t - u, i))
                        if left is None or right is None:
                            continue
                        term = left.mul(right).scale(
                            self.amb.field.neg(self.amb.field.one)
                        )
                        rhs = term if rhs is None else _matrix_add(rhs, term)
                if i > 0:
                    prev = self.sigma.get((t, i - 1))
                    if prev is not None:
                        corr = prev.mul(res.differential(i)).scale(
                            self.amb.field.neg(self.amb.field.one)
                        )
                        rhs = corr if rhs is None else _matrix_add(rhs, corr)
                if rhs is None or rhs.is_zero():
                    continue
                if target > pd:
                    if not rhs.is_zero():
                        raise AssertionError("homotopy system inconsistent at the top")
                    continue
                solver = self._solver(target)
                cols = []
                for j in range(rhs.ncols):
                    sol = solver.solve(rhs.column(j))
                    if sol is None:
                        raise AssertionError("homotopy right-hand side is not a boundary")
                    cols.append(sol)
                twists_target = res.twists(target)
                entries = [
                    [cols[j][u] for j in range(len(cols))]
                    for u in range(len(twists_target))
                ]
                self.sigma[(t, i)] = PolyMatrix(
                    self.amb,
                    entries,
                    twists_target,
                    tuple(tt + t * fdeg for tt in res.twists(i)),
                )
            t += 1

    def rank_of(self, m: int) -> int:
        if m < 0:
            return 0
        return sum(
            self.res.betti[m - 2 * j]
            for j in range((m // 2) + 1)
            if m - 2 * j <= self.pd
        )

    def _components(self, m: int):
        return [
            (m - 2 * j, j)
            for j in range((m // 2) + 1)
            if 0 <= m - 2 * j <= self.pd
        ]

    def scalar_differential(self, m: int):
        """Mod-irrelevant-ideal matrix of d: F_m -> F_{m-1} (field elements)."""
        field = self.amb.field
        src = self._components(m)
        dst = self._components(m - 1)
        dst_offsets = {}
        off = 0
        for comp in dst:
            dst_offsets[comp] = off
            off += self.res.betti[comp[0]]
        rows = off
        cols = sum(self.res.betti[i] for i, _ in src)
        a = [[field.zero] * cols for _ in range(rows)]

        def put(mat: PolyMatrix, r0: int, c0: int):
            for u in range(mat.nrows):
                row = mat.entries[u]
                for v in range(mat.ncols):
                    e = row[v]
                    if not e.is_zero():
                        a[r0 + u][c0 + v] = e.constant_coeff()

        coff = 0
        for i, j in src:
            w = self.res.betti[i]
            # t = 0 block: the ambient differential
            if i >= 1 and (i - 1, j) in dst_offsets:
                put(self.res.differential(i), dst_offsets[(i - 1, j)], coff)
            for t in range(1, j + 1):
                mat = self.sigma.get((t, i))
                if mat is None:
                    continue
                key = (i + 2 * t - 1, j - t)
                if key in dst_offsets:
                    put(mat, dst_offsets[key], coff)
            coff += w
        return a

    def _rank(self, rows) -> int:
        field = self.amb.field
        if not rows or not rows[0]:
            return 0
        if isinstance(field, PrimeField):
            return modlinalg.rank(np.array(rows, dtype=np.int64), field.p)
        return modlinalg.field_rank(field, rows)

    def betti_over_a(self, upto: int):
        """Tor ranks of the module over A for homological degrees 0..upto."""
        out = []
        ranks = {m: self._rank(self.scalar_differential(m)) for m in range(upto + 2)}
        for m in range(upto + 1):
            out.append(self.rank_of(m) - ranks[m] - ranks[m + 1])
        return out


def _matrix_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    entries = [
        [a.entries[i][j] + b.entries[i][j] for j in range(a.ncols)]
        for i in range(a.nrows)
    ]
    return PolyMatrix(a.ring, entries, a.row_twists, a.col_twists)


_HYPER_CACHE: dict = {}


def hypersurface_betti(ring_a: CIRing, module: GradedModule, upto: int):
    key = (ring_a.key(), module.content_key())
    hc = _HYPER_CACHE.get(key)
    if hc is None:
        hc = HypersurfaceComplex(ring_a, module)
        _HYPER_CACHE[key] = hc
    return hc.betti_over_a(upto)


def ext_k_dims(ring, module: GradedModule, upto: int, engine: str = "auto"):
    """dim_k Ext^i(M, k) for i = 0..upto (the betti numbers of M)."""
    if isinstance(ring, CIRing) and ring.c == 1 and ring.dim >= 1:
        return hypersurface_betti(ring, module, upto)
    from .resolution import minimal_resolution

    return minimal_resolution(ring, module, upto, engine).betti[: upto + 1]


# ---------------------------------------------------------------------------
# general Ext vanishing via the Hom complex


def _hom_spot_data(ring, res, n_min: GradedModule, j: int):
    """Twists of Hom(F_j, A^g) and the relation columns at that spot."""
    amb = ambient_of(ring)
    g = n_min.ngens
    tN = n_min.row_twists
    fj = res.twists(j)
    twists = tuple(tN[s] - fj[u] for u in range(len(fj)) for s in range(g))
    rel_cols = []
    pres = n_min.presentation
    for u in range(len(fj)):
        for c in range(pres.ncols):
            col = [amb.zero()] * (len(fj) * g)
            for s in range(g):
                col[u * g + s] = pres.entries[s][c]
            rel_cols.append(col)
    return twists, rel_cols


def _hom_map_columns(ring, res, n_min: GradedModule, j: int):
    """Columns of Hom(d_{j+1}, N): Hom(F_j, A^g) -> Hom(F_{j+1}, A^g)."""
    amb = ambient_of(ring)
    g = n_min.ngens
    fj = res.twists(j)
    fj1 = res.twists(j + 1)
    d = res.differential(j + 1)
    cols = []
    for u in range(len(fj)):
        for s in range(g):
            col = [amb.zero()] * (len(fj1) * g)
            for v in range(len(fj1)):
                col[v * g + s] = d.entries[u][v]
            cols.append(col)
    return cols


def ext_vanishes(ring, module: GradedModule, other: GradedModule, i: int, engine: str = "auto") -> bool:
    """True iff Ext^i over the ring of (module, other) vanishes.

    For other = k this is the vanishing of the i-th betti number; in general
    Hom(-, other) is applied to the minimal resolution of the module and
    exactness at spot i is decided by two Groebner containments.
    """
    if i < 0:
        raise ValueError("Ext index must be >= 0")
    module = module.minimalized()
    if module.ngens == 0:
        return True
    if is_residue_field(other):
        dims = ext_k_dims(ring, module, i, engine)
        return dims[i] == 0
    return _ext_vanishes_general(ring, module, other.minimalized(), i, engine)


def _ext_vanishes_general(ring, module, n_min, i, engine="auto") -> bool:
    from .resolution import minimal_resolution

    amb = ambient_of(ring)
    res = minimal_resolution(ring, module, i + 1, engine)
    if res.betti[i] == 0:
        return True
    g = n_min.ngens
    if g == 0:
        return True
    spot_tw, spot_rels = _hom_spot_data(ring, res, n_min, i)
    next_tw, next_rels = _hom_spot_data(ring, res, n_min, i + 1)
    d_cols = _hom_map_columns(ring, res, n_min, i)

    # kernel generators: vectors v with D(v) inside the relation submodule
    all_cols = [column_to_vec(c) for c in d_cols]
    all_cols += [column_to_vec(c) for c in next_rels]
    all_cols += quotient_columns(ring, next_tw)
    syz = module_syzygies(amb, next_tw, all_cols)
    nv = len(d_cols)
    kernel_gens = []
    for s in syz:
        proj = {(j, m): c for (j, m), c in s.items() if j < nv}
        if not proj:
            continue
        col = [ring_nf(ring, p) for p in vec_to_column(amb, nv, proj)]
        if any(not p.is_zero() for p in col):
            kernel_gens.append(col)

    # image submodule: Hom(d_i, N) columns plus the relations at spot i
    image_cols = list(spot_rels)
    if i >= 1:
        image_cols += _hom_map_columns(ring, res, n_min, i - 1)
    igb = submodule_igb(ring, spot_tw, image_cols)
    for col in kernel_gens:
        if not igb.contains(column_to_vec(col)):
            return False
    return True


def ext_module_ring_coeffs(ring, module: GradedModule, m: int, engine: str = "auto") -> GradedModule:
    """Ext^m(M, ring) as a graded module (subquotient of the dual of F_m).

    Kernel and image of the transposed differentials are combined through a
    syzygy computation; m = 0 gives Hom(M, ring).
    """
    from .cimodule import subquotient_presentation, syzygy_matrix
    from .resolution import minimal_resolution

    module = module.minimalized()
    if module.ngens == 0:
        from .cimodule import zero_module

        return zero_module(ring)
    res = minimal_resolution(ring, module, m + 1, engine)
    if res.betti[m] == 0:
        from .cimodule import zero_module

        return zero_module(ring)
    d_next_t = res.differential(m + 1).transpose()
    ker = syzygy_matrix(ring, d_next_t)
    ker_cols = ker.columns()
    im_cols = []
    if m >= 1:
        im_cols = res.differential(m).transpose().columns()
    # kernel vectors live in the dual of F_m, whose twists are the columns
    twists = d_next_t.col_twists
    return subquotient_presentation(ring, twists, ker_cols, im_cols)
