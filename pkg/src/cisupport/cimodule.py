"""Complete-intersection rings and finitely generated graded modules.

A ring is either a free PolyRing or a CIRing (graded polynomial ring modulo
a regular sequence of forms of degree >= 2).  Modules are given by graded
presentation matrices; entries are kept in normal form modulo the quotient.
"""

from __future__ import annotations

import numpy as np

from . import modlinalg
from .groebner import (
    IncrementalGB,
    buchberger,
    is_regular_sequence,
    module_syzygies,
    normal_form,
)
from .poly import Poly, PolyRing, mono_divides
from .pmatrix import PolyMatrix


class CIRing:
    """Quotient of a graded polynomial ring by a regular sequence f_1..f_c.

    Fixes the coordinates of the degree-one slice of the defining ideal: the
    i-th coordinate corresponds to f_i, in order.
    """

    def __init__(self, ambient: PolyRing, fs, validate: bool = True):
        self.ambient = ambient
        self.fs = tuple(fs)
        self.note = ""
        if validate:
            res = is_regular_sequence(self.fs, ambient)
            if not res:
                raise ValueError("defining forms are not a regular sequence of degree >= 2")
            self.note = res.note
        self.c = len(self.fs)
        self.gb = buchberger(list(self.fs)) if self.fs else []
        self.dim = ambient.n - self.c
        self._std_cache = {}
        self._key = (
            "ciring",
            ambient.key(),
            tuple(tuple(f.terms) for f in self.fs),
        )

    @property
    def field(self):
        return self.ambient.field

    @property
    def is_artinian(self):
        return self.dim == 0

    def nf(self, poly: Poly) -> Poly:
        return normal_form(poly, self.gb)

    def std_monomials(self, d: int):
        """Monomial basis of the degree-d piece of the quotient ring."""
        if d < 0:
            return []
        if d not in self._std_cache:
            lts = [g.lm() for g in self.gb]
            self._std_cache[d] = [
                m
                for m in self.ambient.monomials_of_degree(d)
                if not any(mono_divides(lt, m) for lt in lts)
            ]
        return self._std_cache[d]

    def top_socle_degree(self, limit: int = 200) -> int:
        """Largest degree with a nonzero piece; only valid when artinian."""
        if not self.is_artinian:
            raise ValueError("socle degree only defined for artinian quotients")
        top = 0
        d = 0
        empty_run = 0
        while d <= limit:
            if self.std_monomials(d):
                top = d
                empty_run = 0
            else:
                empty_run += 1
                if empty_run > max(self.ambient.weights):
                    break
            d += 1
        return top

    def chi_ring(self) -> PolyRing:
        """Coordinate ring of the space of defining forms: k[chi1..chic]."""
        return PolyRing([f"chi{i + 1}" for i in range(self.c)], field=self.field)

    def s_ring(self, r: int) -> PolyRing:
        """Coordinate ring for a rank-r subspace restriction: k[s1..sr]."""
        return PolyRing([f"s{i + 1}" for i in range(r)], field=self.field)

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, CIRing) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        from .poly import render_poly

        rel = ", ".join(render_poly(f) for f in self.fs)
        return f"CIRing({self.ambient.variables} / ({rel}))"


# ---------------------------------------------------------------------------
# ring dispatch helpers: functions below accept a PolyRing or a CIRing


def ambient_of(ring) -> PolyRing:
    return ring.ambient if isinstance(ring, CIRing) else ring


def quotient_gb(ring):
    return ring.gb if isinstance(ring, CIRing) else []


def ring_nf(ring, poly: Poly) -> Poly:
    return ring.nf(poly) if isinstance(ring, CIRing) else poly


def ring_dim(ring) -> int:
    return ring.dim if isinstance(ring, CIRing) else ring.n


def ring_key(ring):
    return ring.key()


def std_monomials(ring, d: int):
    if isinstance(ring, CIRing):
        return ring.std_monomials(d)
    return ring.monomials_of_degree(d) if d >= 0 else []


def is_artinian(ring) -> bool:
    return isinstance(ring, CIRing) and ring.is_artinian


# ---------------------------------------------------------------------------
# columns as vectors


def column_to_vec(col) -> dict:
    v = {}
    for i, p in enumerate(col):
        for m, c in p.terms:
            v[(i, m)] = c
    return v


def vec_to_column(ambient: PolyRing, nrows: int, v: dict):
    rows = [[] for _ in range(nrows)]
    for (i, m), c in v.items():
        rows[i].append((m, c))
    return [ambient.from_terms(r) for r in rows]


def column_degree(ring, twists, col):
    """Degree of a homogeneous column vector; None if zero."""
    for i, p in enumerate(col):
        if not p.is_zero():
            return p.degree() + twists[i]
    return None


def quotient_columns(ring, twists):
    """Vectors h * e_i for the quotient relations h; empty for free rings."""
    gbq = quotient_gb(ring)
    cols = []
    for i in range(len(twists)):
        for h in gbq:
            cols.append({(i, m): c for m, c in h.terms})
    return cols


def submodule_igb(ring, twists, columns) -> IncrementalGB:
    """Incremental basis of the span of the columns over the given ring."""
    igb = IncrementalGB(ambient_of(ring), twists)
    for v in quotient_columns(ring, twists):
        igb.add(v)
    for col in columns:
        igb.add(column_to_vec(col))
    return igb


def submodule_contains(ring, twists, columns, vector) -> bool:
    return submodule_igb(ring, twists, columns).contains(column_to_vec(vector))


def syzygy_matrix(ring, matrix: PolyMatrix) -> PolyMatrix:
    """Generators of the kernel of the graded map defined by the matrix.

    Over a quotient ring the kernel is computed by adjoining multiples of the
    quotient relations in the ambient ring and projecting back.
    """
    amb = ambient_of(ring)
    cols = [column_to_vec(matrix.column(j)) for j in range(matrix.ncols)]
    extra = quotient_columns(ring, matrix.row_twists)
    syz = module_syzygies(amb, matrix.row_twists, cols + extra)
    ncols = matrix.ncols
    out_cols = []
    out_twists = []
    ctx_twists = matrix.col_twists
    for s in syz:
        proj = {(j, m): c for (j, m), c in s.items() if j < ncols}
        col = vec_to_column(amb, ncols, proj)
        col = [ring_nf(ring, p) for p in col]
        deg = column_degree(ring, ctx_twists, col)
        if deg is None:
            continue
        out_cols.append(col)
        out_twists.append(deg)
    entries = [[out_cols[j][i] for j in range(len(out_cols))] for i in range(ncols)]
    return PolyMatrix(amb, entries, ctx_twists, out_twists)


def minimal_generator_indices(ring, twists, columns):
    """Indices of a minimal generating subset of the given columns.

    Columns are considered in increasing degree (ties by position), which by
    the graded Nakayama lemma yields a minimal generating set.
    """
    degs = []
    for j, col in enumerate(columns):
        d = column_degree(ring, twists, col)
        degs.append((d if d is not None else None, j))
    order = sorted((d, j) for d, j in degs if d is not None)
    igb = IncrementalGB(ambient_of(ring), twists)
    for v in quotient_columns(ring, twists):
        igb.add(v)
    kept = []
    for _, j in order:
        if igb.add(column_to_vec(columns[j])):
            kept.append(j)
    return kept


# ---------------------------------------------------------------------------
# graded modules


class GradedModule:
    """Finitely generated graded module given by a presentation matrix.

    Rows index generators (with their twists), columns index relations.  The
    zero module is the case of zero generators.
    """

    def __init__(self, ring, presentation: PolyMatrix, normalize: bool = True):
        self.ring = ring
        if normalize:
            presentation = presentation.map_entries(lambda p: ring_nf(ring, p))
        presentation.check_homogeneous()
        self.presentation = presentation
        self.row_twists = presentation.row_twists
        self.ngens = presentation.nrows
        self.nrels = presentation.ncols
        self._minimal = None
        self._key = None

    @classmethod
    def from_columns(cls, ring, row_twists, columns, col_twists=None):
        amb = ambient_of(ring)
        if col_twists is None:
            col_twists = []
            for col in columns:
                d = column_degree(ring, row_twists, col)
                if d is None:
                    raise ValueError("zero relation column needs an explicit twist")
                col_twists.append(d)
        entries = [[columns[j][i] for j in range(len(columns))] for i in range(len(row_twists))]
        return cls(ring, PolyMatrix(amb, entries, row_twists, col_twists))

    def content_key(self):
        if self._key is None:
            self._key = ("module", ring_key(self.ring), self.presentation.content_key())
        return self._key

    def column(self, j):
        return self.presentation.column(j)

    def minimalized(self) -> "GradedModule":
        """Equivalent module with a minimal presentation (pruned units,
        minimal relation set)."""
        if self._minimal is None:
            self._minimal = _minimalize(self)
        return self._minimal

    def is_zero(self) -> bool:
        return self.minimalized().ngens == 0

    def is_free(self) -> bool:
        return self.minimalized().nrels == 0

    def __repr__(self):
        return f"GradedModule({self.ngens} gens, {self.nrels} rels)"


def _minimalize(module: GradedModule) -> GradedModule:
    ring = module.ring
    amb = ambient_of(ring)
    field = amb.field
    entries = [row[:] for row in module.presentation.entries]
    row_twists = list(module.row_twists)
    col_twists = list(module.presentation.col_twists)

    def find_unit():
        for i in range(len(row_twists)):
            for j in range(len(col_twists)):
                e = entries[i][j]
                if not e.is_zero() and e.degree() == 0:
                    return i, j
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        i, j = hit
        u_inv = field.inv(entries[i][j].constant_coeff())
        pivot_col = [entries[r][j] for r in range(len(row_twists))]
        for j2 in range(len(col_twists)):
            if j2 == j:
                continue
            c = entries[i][j2]
            if c.is_zero():
                continue
            factor = c.scale(u_inv)
            for r in range(len(row_twists)):
                prod = pivot_col[r] * factor
                entries[r][j2] = ring_nf(ring, entries[r][j2] - prod)
        del entries[i]
        del row_twists[i]
        for row in entries:
            del row[j]
        del col_twists[j]

    mat = PolyMatrix(amb, entries, row_twists, col_twists)
    cols = mat.columns()
    kept = minimal_generator_indices(ring, tuple(row_twists), cols)
    kept_cols = [cols[j] for j in kept]
    kept_twists = [col_twists[j] for j in kept]
    out_entries = [[kept_cols[j][i] for j in range(len(kept))] for i in range(len(row_twists))]
    out = GradedModule(
        ring,
        PolyMatrix(amb, out_entries, row_twists, kept_twists),
        normalize=False,
    )
    out._minimal = out
    return out


def zero_module(ring) -> GradedModule:
    return GradedModule(ring, PolyMatrix(ambient_of(ring), [], (), ()))


def free_module(ring, twists=(0,)) -> GradedModule:
    return GradedModule(ring, PolyMatrix(ambient_of(ring), [[] for _ in twists], twists, ()))


def residue_module(ring, twist: int = 0) -> GradedModule:
    """The residue field k presented by the variables."""
    amb = ambient_of(ring)
    cols = [[amb.var_poly(i)] for i in range(amb.n)]
    return GradedModule.from_columns(ring, (twist,), cols)


def cyclic_module(ring, relation_polys, twist: int = 0) -> GradedModule:
    """ring/(relations) as a module with one generator."""
    cols = [[p] for p in relation_polys]
    return GradedModule.from_columns(ring, (twist,), cols)


def is_residue_field(module: GradedModule) -> bool:
    m = module.minimalized()
    if m.ngens != 1:
        return False
    amb = ambient_of(m.ring)
    rel = [m.presentation.entries[0][j] for j in range(m.nrels)]
    gb1 = buchberger(rel + list(quotient_gb(m.ring)))
    gb2 = buchberger([amb.var_poly(i) for i in range(amb.n)] + list(quotient_gb(m.ring)))
    return gb1 == gb2


# ---------------------------------------------------------------------------
# graded pieces and Hilbert functions


def free_basis(ring, twists, d: int):
    """Basis of the degree-d piece of (+) ring(-t_j): list of (j, monomial)."""
    out = []
    for j, t in enumerate(twists):
        for m in std_monomials(ring, d - t):
            out.append((j, m))
    return out


def poly_coords(ring, poly: Poly, d: int, basis_monos=None):
    """Coordinates of a (normal-form) element of degree d in the monomial basis."""
    if basis_monos is None:
        basis_monos = std_monomials(ring, d)
    idx = {m: i for i, m in enumerate(basis_monos)}
    v = [0] * len(basis_monos)
    for m, c in poly.terms:
        v[idx[m]] = c
    return v

def column_coords(ring, twists, col, d: int):
    """Coordinates of a homogeneous degree-d column in the free-module basis."""
    out = []
    for j, t in enumerate(twists):
        monos = std_monomials(ring, d - t)
        out.extend(poly_coords(ring, col[j], d - t, monos))
    return out


def slice_matrix(ring, matrix: PolyMatrix, d: int) -> np.ndarray:
    """Degree-d piece of the graded map as an integer matrix mod p."""
    dom = free_basis(ring, matrix.col_twists, d)
    cod = free_basis(ring, matrix.row_twists, d)
    cod_index = {}
    offs = 0
    row_monos = {}
    for i, t in enumerate(matrix.row_twists):
        monos = std_monomials(ring, d - t)
        row_monos[i] = {m: k for k, m in enumerate(monos)}
        cod_index[i] = offs
        offs += len(monos)
    a = np.zeros((len(cod), len(dom)), dtype=np.int64)
    for col_idx, (j, mono) in enumerate(dom):
        for i in range(matrix.nrows):
            e = matrix.entries[i][j]
            if e.is_zero():
                continue
            prod = ring_nf(ring, e.term_mul(mono, matrix.ring.field.one))
            base = cod_index[i]
            lookup = row_monos[i]
            for m, c in prod.terms:
                a[base + lookup[m], col_idx] = c
    return a


def hilbert_function(module: GradedModule, dmax: int):
    """dim_k of each graded piece of the module for degrees 0..dmax."""
    ring = module.ring
    p = ambient_of(ring).field.p
    out = []
    for d in range(dmax + 1):
        total = len(free_basis(ring, module.row_twists, d))
        if total == 0:
            out.append(0)
            continue
        a = slice_matrix(ring, module.presentation, d)
        out.append(total - modlinalg.rank(a, p))
    return out


# ---------------------------------------------------------------------------
# constructions


def tensor_over_base(m1: GradedModule, m2: GradedModule, target) -> GradedModule:
    """Presentation of M1 (x) M2 over the common ambient ring, moved to target.

    Generators are pairs; relations are the two blocks rel(M1) (x) id and
    id (x) rel(M2).
    """
    r1, r2 = m1.ring, m2.ring
    amb = ambient_of(target)
    if not isinstance(r1, PolyRing) or not isinstance(r2, PolyRing):
        raise ValueError("tensor factors must be presented over the ambient ring")
    if r1.key() != amb.key() or r2.key() != amb.key():
        raise ValueError("tensor factors must share the target's ambient ring")
    g1, g2 = m1.ngens, m2.ngens
    row_twists = []
    for i in range(g1):
        for j in range(g2):
            row_twists.append(m1.row_twists[i] + m2.row_twists[j])
    cols = []
    col_twists = []
    p1, p2 = m1.presentation, m2.presentation
    for s in range(m1.nrels):
        for j in range(g2):
            col = [amb.zero()] * (g1 * g2)
            for i in range(g1):
                col[i * g2 + j] = p1.entries[i][s]
            cols.append(col)
            col_twists.append(p1.col_twists[s] + m2.row_twists[j])
    for i in range(g1):
        for t in range(m2.nrels):
            col = [amb.zero()] * (g1 * g2)
            for j in range(g2):
                col[i * g2 + j] = p2.entries[j][t]
            cols.append(col)
            col_twists.append(m1.row_twists[i] + p2.col_twists[t])
    entries = [[cols[j][i] for j in range(len(cols))] for i in range(g1 * g2)]
    return GradedModule(target, PolyMatrix(amb, entries, row_twists, col_twists))


def quotient_by_element(module: GradedModule, x: Poly):
    """(M/xM, is x regular on M).

    Regularity is decided by computing the multiplication kernel through a
    syzygy computation and testing it against the relation submodule.
    """
    ring = module.ring
    amb = ambient_of(ring)
    x = ring_nf(ring, x)
    if x.is_zero() or not x.is_homogeneous() or x.degree() < 1:
        raise ValueError("need a homogeneous element of positive degree")
    g = module.ngens
    pres = module.presentation
    # columns of [x*Id | P]; syzygies' first block generates {v : x v in im P}
    mult_cols = []
    for i in range(g):
        col = [amb.zero()] * g
        col[i] = x
        mult_cols.append(col)
    all_cols = [column_to_vec(c) for c in mult_cols]
    all_cols += [column_to_vec(pres.column(j)) for j in range(pres.ncols)]
    all_cols += quotient_columns(ring, module.row_twists)
    syz = module_syzygies(amb, module.row_twists, all_cols)
    rel_igb = submodule_igb(ring, module.row_twists, pres.columns())
    regular = True
    xdeg = x.degree()
    for s in syz:
        proj = {(j, m): c for (j, m), c in s.items() if j < g}
        if not proj:
            continue
        kern = [ring_nf(ring, p) for p in vec_to_column(amb, g, proj)]
        if not rel_igb.contains(column_to_vec(kern)):
            regular = False
            break
    new_cols = pres.columns() + mult_cols
    new_twists = list(pres.col_twists) + [t + xdeg for t in module.row_twists]
    entries = [[new_cols[j][i] for j in range(len(new_cols))] for i in range(g)]
    quot = GradedModule(ring, PolyMatrix(amb, entries, module.row_twists, new_twists))
    return quot, regular


def submodule_and_quotient(module: GradedModule, gens):
    """Submodule generated by the given elements and the quotient by it.

    gens: list of homogeneous column vectors over the ring.  Returns
    (S, M/S, inclusion matrix); the three modules form a short exact
    sequence.
    """
    ring = module.ring
    amb = ambient_of(ring)
    g = module.ngens
    gens = [[ring_nf(ring, p) for p in col] for col in gens]
    gens = [col for col in gens if any(not p.is_zero() for p in col)]
    gen_twists = []
    for col in gens:
        d = column_degree(ring, module.row_twists, col)
        gen_twists.append(d)
    pres = module.presentation
    all_cols = [column_to_vec(c) for c in gens]
    all_cols += [column_to_vec(pres.column(j)) for j in range(pres.ncols)]
    all_cols += quotient_columns(ring, module.row_twists)
    syz = module_syzygies(amb, module.row_twists, all_cols)
    r = len(gens)
    rel_cols = []
    rel_twists = []
    for s in syz:
        proj = {(j, m): c for (j, m), c in s.items() if j < r}
        if not proj:
            continue
        col = [ring_nf(ring, p) for p in vec_to_column(amb, r, proj)]
        d = column_degree(ring, tuple(gen_twists), col)
        if d is None:
            continue
        rel_cols.append(col)
        rel_twists.append(d)
    s_entries = [[rel_cols[j][i] for j in range(len(rel_cols))] for i in range(r)]
    sub = GradedModule(ring, PolyMatrix(amb, s_entries, gen_twists, rel_twists))
    q_cols = pres.columns() + gens
    q_twists = list(pres.col_twists) + gen_twists
    q_entries = [[q_cols[j][i] for j in range(len(q_cols))] for i in range(g)]
    quot = GradedModule(ring, PolyMatrix(amb, q_entries, module.row_twists, q_twists))
    incl = PolyMatrix(
        amb,
        [[gens[j][i] for j in range(r)] for i in range(g)],
        module.row_twists,
        gen_twists,
    )
    return sub, quot, incl


def restrict_to_ring(module: GradedModule, target) -> GradedModule:
    """View a module over a quotient ring as a module over a larger quotient.

    Valid whenever the target's defining ideal sits inside the annihilator;
    here: target relations are contained in the source ring's ideal.
    """
    src = module.ring
    amb_t = ambient_of(target)
    amb_s = ambient_of(src)
    if amb_s.key() != amb_t.key():
        raise ValueError("restriction requires the same ambient ring")
    pres = module.presentation
    cols = [[ring_nf(target, p) for p in pres.column(j)] for j in range(pres.ncols)]
    twists = list(pres.col_twists)
    for h in quotient_gb(src):
        hh = ring_nf(target, h)
        if hh.is_zero():
            continue
        for i in range(module.ngens):
            col = [amb_t.zero()] * module.ngens
            col[i] = hh
            cols.append(col)
            twists.append(module.row_twists[i] + hh.degree())
    entries = [[cols[j][i] for j in range(len(cols))] for i in range(module.ngens)]
    return GradedModule(target, PolyMatrix(amb_t, entries, module.row_twists, twists))


def base_change_ring(ring, new_field):
    amb = ambient_of(ring).with_field(new_field)
    if isinstance(ring, CIRing):
        embed = new_field.embed
        fs = [f.map_coefficients(embed, amb) for f in ring.fs]
        return CIRing(amb, fs, validate=False)
    return amb


def base_change_module(module: GradedModule, new_ring) -> GradedModule:
    amb = ambient_of(new_ring)
    embed = amb.field.embed
    pres = module.presentation
    entries = [
        [pres.entries[i][j].map_coefficients(embed, amb) for j in range(pres.ncols)]
        for i in range(pres.nrows)
    ]
    return GradedModule(
        new_ring, PolyMatrix(amb, entries, pres.row_twists, pres.col_twists)
    )


def subquotient_presentation(ring, twists, ker_cols, im_cols) -> GradedModule:
    """Presentation of (span of ker_cols) / (span of im_cols) inside a free module."""
    amb = ambient_of(ring)
    ker_cols = [col for col in ker_cols if any(not p.is_zero() for p in col)]
    r = len(ker_cols)
    gen_twists = [column_degree(ring, twists, col) for col in ker_cols]
    all_cols = [column_to_vec(c) for c in ker_cols]
    all_cols += [column_to_vec(c) for c in im_cols]
    all_cols += quotient_columns(ring, twists)
    syz = module_syzygies(amb, twists, all_cols)
    rel_cols = []
    rel_twists = []
    for s in syz:
        proj = {(j, m): c for (j, m), c in s.items() if j < r}
        if not proj:
            continue
        col = [ring_nf(ring, p) for p in vec_to_column(amb, r, proj)]
        d = column_degree(ring, tuple(gen_twists), col)
        if d is None:
            continue
        rel_cols.append(col)
        rel_twists.append(d)
    entries = [[rel_cols[j][i] for j in range(len(rel_cols))] for i in range(r)]
    return GradedModule(ring, PolyMatrix(amb, entries, gen_twists, rel_twists))
