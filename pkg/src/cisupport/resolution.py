"""Minimal graded free resolutions over a polynomial ring or a quotient.

Two engines produce the same contract:

* "slice": for artinian quotients every graded piece is a finite-dimensional
  vector space, so each kernel is found degree by degree with exact mod-p
  linear algebra, and new generators are the kernel vectors not reachable
  from lower degrees.
* "groebner": a syzygy computation in the ambient ring (adjoining quotient
  relations) followed by minimal-generator selection.

Every differential has entries in the irrelevant ideal by construction, so
the resolutions are minimal; betti numbers are the ranks.
"""

from __future__ import annotations

import numpy as np

from . import modlinalg
from .cimodule import (
    CIRing,
    GradedModule,
    ambient_of,
    free_basis,
    is_artinian,
    minimal_generator_indices,
    ring_key,
    ring_nf,
    slice_matrix,
    std_monomials,
    syzygy_matrix,
)
from .field import PrimeField
from .pmatrix import PolyMatrix


class FreeResolution:
    """A window F_L -> ... -> F_1 -> F_0 of a minimal graded resolution."""

    def __init__(self, ring, module, differentials, f0_twists, length):
        self.ring = ring
        self.module = module
        self.differentials = differentials  # [d_1, ..., d_length]
        self.f0_twists = tuple(f0_twists)
        self.length = length
        self.minimal = True

    @property
    def betti(self):
        out = [len(self.f0_twists)]
        for d in self.differentials:
            out.append(d.ncols)
        return out

    def twists(self, i):
        if i == 0:
            return self.f0_twists
        return self.differentials[i - 1].col_twists

    def differential(self, i) -> PolyMatrix:
        """The map F_i -> F_{i-1}, 1-based."""
        return self.differentials[i - 1]

    def betti_by_degree(self):
        return [dict(_count(self.twists(i))) for i in range(self.length + 1)]

    def terminated(self) -> bool:
        """True when the window already reached a zero module."""
        return any(b == 0 for b in self.betti[1:])

    def projective_dimension(self):
        """Finite pd if visible inside the window, else None."""
        b = self.betti
        for i in range(1, len(b)):
            if b[i] == 0:
                return i - 1
        return None


def _count(twists):
    out = {}
    for t in twists:
        out[t] = out.get(t, 0) + 1
    return out


# ---------------------------------------------------------------------------
# slice engine (artinian quotient rings)


def _ring_mult_matrix(ring: CIRing, var: int, d: int) -> np.ndarray:
    cache = getattr(ring, "_mult_cache", None)
    if cache is None:
        cache = {}
        ring._mult_cache = cache
    key = (var, d)
    if key not in cache:
        src = ring.std_monomials(d)
        w = ring.ambient.weights[var]
        dst = ring.std_monomials(d + w)
        idx = {m: i for i, m in enumerate(dst)}
        a = np.zeros((len(dst), len(src)), dtype=np.int64)
        vm = ring.ambient.var_mono(var)
        one = ring.field.one
        for j, m in enumerate(src):
            prod = ring.nf(ring.ambient.from_terms([(tuple(x + y for x, y in zip(m, vm)), one)]))
            for mm, c in prod.terms:
                a[idx[mm], j] = c
        cache[key] = a
    return cache[key]


def _free_mult_matrix(ring: CIRing, twists, var: int, d: int) -> np.ndarray:
    """Multiplication by a variable on the degree-d piece of (+)ring(-t_j)."""
    blocks = [_ring_mult_matrix(ring, var, d - t) for t in twists]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    a = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        a[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return a


def _coords_to_column(ring, twists, d, vec):
    """Inverse of column_coords: coordinate vector -> polynomial column."""
    amb = ambient_of(ring)
    col = []
    pos = 0
    for t in twists:
        monos = std_monomials(ring, d - t)
        terms = []
        for m in monos:
            c = int(vec[pos]) % amb.field.p
            if c:
                terms.append((m, c))
            pos += 1
        col.append(amb.from_terms(terms))
    return col


def _slice_kernel_step(ring: CIRing, mat: PolyMatrix) -> PolyMatrix:
    """Next differential: minimal generators of ker(mat) over an artinian ring."""
    p = ring.field.p
    twists = mat.col_twists
    amb = ring.ambient
    if len(twists) == 0:
        return PolyMatrix(amb, [], (), ())
    top = max(twists) + ring.top_socle_degree()
    lo = min(twists)
    kernels = {}
    new_cols = []
    new_twists = []
    for d in range(lo, top + 1):
        dim_dom = len(free_basis(ring, twists, d))
        if dim_dom == 0:
            kernels[d] = np.zeros((0, 0), dtype=np.int64)
            continue
        a = slice_matrix(ring, mat, d)
        n_d = modlinalg.nullspace(a, p)
        kernels[d] = n_d
        if n_d.shape[1] == 0:
            continue
        spans = []
        for v in range(amb.n):
            w = amb.weights[v]
            prev = kernels.get(d - w)
            if prev is None or prev.shape[1] == 0:
                continue
            spans.append(_free_mult_matrix(ring, twists, v, d - w) @ prev % p)
        base = (
            np.concatenate(spans, axis=1)
            if spans
            else np.zeros((n_d.shape[0], 0), dtype=np.int64)
        )
        chosen = modlinalg.complement_pivots(base, n_d, p)
        for c in chosen:
            new_cols.append(_coords_to_column(ring, twists, d, n_d[:, c]))
            new_twists.append(d)
    entries = [
        [new_cols[j][i] for j in range(len(new_cols))] for i in range(len(twists))
    ]
    return PolyMatrix(amb, entries, twists, tuple(new_twists))


# ---------------------------------------------------------------------------
# groebner engine


def _groebner_kernel_step(ring, mat: PolyMatrix) -> PolyMatrix:
    amb = ambient_of(ring)
    if mat.ncols == 0:
        return PolyMatrix(amb, [], (), ())
    syz = syzygy_matrix(ring, mat)
    cols = syz.columns()
    kept = minimal_generator_indices(ring, syz.row_twists, cols)
    kept_cols = [cols[j] for j in kept]
    kept_twists = [syz.col_twists[j] for j in kept]
    entries = [
        [kept_cols[j][i] for j in range(len(kept_cols))] for i in range(mat.ncols)
    ]
    return PolyMatrix(amb, entries, mat.col_twists, tuple(kept_twists))


# ---------------------------------------------------------------------------
# builder with caching


class _ResolutionBuilder:
    def __init__(self, ring, module: GradedModule, engine: str):
        self.ring = ring
        self.module = module
        self.engine = engine
        self.min_module = module.minimalized()
        self.diffs = []

    def extend_to(self, length: int):
        while len(self.diffs) < length:
            if not self.diffs:
                nxt = self.min_module.presentation
                # enforce deterministic relation order: ascending degree
                order = sorted(
                    range(nxt.ncols), key=lambda j: (nxt.col_twists[j], j)
                )
                cols = [nxt.column(j) for j in order]
                twists = [nxt.col_twists[j] for j in order]
                entries = [
                    [cols[j][i] for j in range(len(cols))]
                    for i in range(nxt.nrows)
                ]
                nxt = PolyMatrix(
                    ambient_of(self.ring), entries, nxt.row_twists, tuple(twists)
                )
            elif self.engine == "slice":
                nxt = _slice_kernel_step(self.ring, self.diffs[-1])
            else:
                nxt = _groebner_kernel_step(self.ring, self.diffs[-1])
            self.diffs.append(nxt)

    def view(self, length: int) -> FreeResolution:
        return FreeResolution(
            self.ring,
            self.min_module,
            self.diffs[:length],
            self.min_module.row_twists,
            length,
        )


_RES_CACHE: dict = {}


def clear_resolution_cache():
    _RES_CACHE.clear()


def resolve_engine(ring, engine: str = "auto") -> str:
    if engine != "auto":
        return engine
    if is_artinian(ring) and isinstance(ambient_of(ring).field, PrimeField):
        return "slice"
    return "groebner"


def minimal_resolution(ring, module: GradedModule, length: int, engine: str = "auto") -> FreeResolution:
    """Minimal graded free resolution of the module to the given length.

    Results are memoized per (ring, module, engine) and extended in place, so
    asking for a longer window continues the previous computation.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    eng = resolve_engine(ring, engine)
    key = (ring_key(ring), module.content_key(), eng)
    builder = _RES_CACHE.get(key)
    if builder is None:
        builder = _ResolutionBuilder(ring, module, eng)
        _RES_CACHE[key] = builder
    builder.extend_to(length)
    return builder.view(length)


def betti_numbers(ring, module: GradedModule, length: int, engine: str = "auto"):
    return minimal_resolution(ring, module, length, engine).betti


def syzygy_module(module: GradedModule, n: int, engine: str = "auto") -> GradedModule:
    """The n-th syzygy of the module (0th syzygy is the module itself)."""
    if n < 0:
        raise ValueError("syzygy index must be >= 0")
    if n == 0:
        return module
    ring = module.ring
    res = minimal_resolution(ring, module, n + 1, engine)
    if res.betti[n] == 0:
        from .cimodule import zero_module

        return zero_module(ring)
    return GradedModule(ring, res.differential(n + 1), normalize=False)


# ---------------------------------------------------------------------------
# validation helpers (used heavily by the test suite)


def check_complex(res: FreeResolution):
    """d_i . d_{i+1} = 0 over the ring, entry-exact."""
    ring = res.ring
    for i in range(1, res.length):
        prod = res.differential(i).mul(res.differential(i + 1), reduce=lambda q: ring_nf(ring, q))
        if not prod.is_zero():
            raise AssertionError(f"complex identity fails at step {i}")
    return True


def check_minimal(res: FreeResolution):
    for i in range(1, res.length + 1):
        mat = res.differential(i)
        for row in mat.entries:
            for e in row:
                if not e.is_zero() and e.degree() == 0:
                    raise AssertionError(f"unit entry in differential {i}")
    return True


def check_exactness(res: FreeResolution, spots=None):
    """Kernel = image at interior spots, each containment checked separately."""
    from .cimodule import submodule_igb, column_to_vec

    ring = res.ring
    spots = spots if spots is not None else range(1, res.length)
    for i in spots:
        d_i = res.differential(i)
        d_next = res.differential(i + 1)
        image_igb = submodule_igb(ring, d_i.col_twists, d_next.columns())
        syz = syzygy_matrix(ring, d_i)
        for col in syz.columns():
            if not image_igb.contains(column_to_vec(col)):
                raise AssertionError(f"kernel not covered by image at spot {i}")
        kernel_igb = submodule_igb(ring, d_i.col_twists, syz.columns())
        for col in d_next.columns():
            if not kernel_igb.contains(column_to_vec(col)):
                raise AssertionError(f"image not inside kernel at spot {i}")
    return True


class BettiTable:
    """Ranks by homological degree, with internal degrees on request."""

    def __init__(self, ranks, by_degree):
        self.ranks = list(ranks)
        self.by_degree = [dict(d) for d in by_degree]
        if any(r < 0 for r in self.ranks):
            raise ValueError("ranks must be non-negative")

    @property
    def minimal_generators(self) -> int:
        return self.ranks[0]

    def __getitem__(self, i):
        return self.ranks[i]

    def __len__(self):
        return len(self.ranks)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and other.ranks == self.ranks

    def __repr__(self):
        return f"BettiTable({self.ranks})"


def betti_table(res: FreeResolution) -> BettiTable:
    return BettiTable(res.betti, res.betti_by_degree())
