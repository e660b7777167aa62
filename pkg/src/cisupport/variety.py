"""Cohomological support varieties, computed two independent ways.

The membership oracle follows the hypersurface-section definition: a nonzero
direction a in k^c determines f = sum a_i f_i, and a lies in the variety of
(M, N) iff Ext over Q/(f) is nonzero in infinitely many degrees.  Over a
hypersurface that is decidable: resolutions are eventually 2-periodic, so two
consecutive vanishing Exts past dim Q/(f) + 2 certify eventual vanishing.

The annihilator route computes the ideal of forms in k[chi] killing the
graded action on Ext(M, k) over a finite window, with an explicit
stabilization flag since no effective generation bound is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import modlinalg
from .cimodule import (
    CIRing,
    GradedModule,
    base_change_module,
    base_change_ring,
    is_residue_field,
    restrict_to_ring,
)
from .field import ExtField
from .groebner import Ideal, buchberger, equal_up_to_radical, normal_form
from .homology import ext_k_dims, ext_vanishes
from .operators import ExtKModule, chi_action
from .poly import Poly, PolyRing, mono_mul


@dataclass
class SupportVariety:
    """A cone in the chi coordinates, with provenance of the computation."""

    ring: CIRing
    ideal: Ideal
    window_used: int
    stabilized: bool
    degree_bound: int = 0
    note: str = ""

    def dimension(self) -> int:
        return self.ideal.dimension()


class Subspace:
    """A full-row-rank r x c matrix over k; row j spans g_j = sum_i A[j][i] f_i."""

    def __init__(self, ring: CIRing, rows):
        self.ring = ring
        self.rows = tuple(tuple(int(x) % ring.field.p for x in row) for row in rows)
        self.r = len(self.rows)
        self.c = ring.c
        for row in self.rows:
            if len(row) != self.c:
                raise ValueError("subspace row length must equal the codimension")
        a = np.array([list(r) for r in self.rows], dtype=np.int64)
        if self.r == 0 or modlinalg.rank(a, ring.field.p) != self.r:
            raise ValueError("subspace matrix must have full row rank")

    def forms(self):
        """The elements g_j = sum_i A[j][i] f_i of the ambient ring."""
        amb = self.ring.ambient
        out = []
        for row in self.rows:
            g = amb.zero()
            for i, coef in enumerate(row):
                if coef:
                    g = g + self.ring.fs[i].scale(coef)
            out.append(g)
        return out

    def intermediate_ring(self) -> CIRing:
        return CIRing(self.ring.ambient, self.forms())


@dataclass
class PointK:
    """A point of k^c (or of a small extension, for sampling)."""

    coords: tuple
    field: object = None

    def is_zero(self, fld) -> bool:
        zero = fld.zero
        return all(c == zero for c in self.coords)


def _as_point(ring: CIRing, a):
    if isinstance(a, PointK):
        fld = a.field if a.field is not None else ring.field
        return tuple(a.coords), fld
    return tuple(a), ring.field


def evaluate_at_point(poly: Poly, coords, fld):
    """Evaluate with coefficients pushed into the point's field."""
    base = poly.ring.field
    if fld is base:
        return poly.evaluate(coords)
    total = fld.zero
    for m, c in poly.terms:
        v = fld.embed(c) if isinstance(fld, ExtField) else fld.from_int(c)
        for e, av in zip(m, coords):
            for _ in range(e):
                v = fld.mul(v, av)
        total = fld.add(total, v)
    return total


def vanishes_at(ideal: Ideal, coords, fld) -> bool:
    zero = fld.zero
    return all(evaluate_at_point(g, coords, fld) == zero for g in ideal.gens)


# ---------------------------------------------------------------------------
# membership oracle (hypersurface sections)


def membership(ring: CIRing, module: GradedModule, other: GradedModule, a, engine: str = "auto") -> bool:
    """Is the direction a in the support variety of the pair (module, other)?

    The zero direction is always inside.  Otherwise f = sum a_i f_i cuts a
    hypersurface A = Q/(f); with s = dim A + 2, eventual nonvanishing of Ext
    over A is equivalent to Ext^s or Ext^{s+1} being nonzero.
    """
    coords, fld = _as_point(ring, a)
    if len(coords) != ring.c:
        raise ValueError("point length must equal the codimension")
    zero = fld.zero
    if all(c == zero for c in coords):
        return True
    degs = {ring.fs[i].degree() for i, c in enumerate(coords) if c != zero}
    if len(degs) > 1:
        raise ValueError(
            "mixed-degree directions are outside the graded model; "
            "combine forms of one degree at a time"
        )
    if isinstance(fld, ExtField):
        ring_ext = base_change_ring(ring, fld)
        module = base_change_module(module, ring_ext)
        other = base_change_module(other, ring_ext)
        amb = ring_ext.ambient
        f = amb.zero()
        for i, c in enumerate(coords):
            if c != zero:
                f = f + ring_ext.fs[i].scale(c)
        work_ring = ring_ext
    else:
        amb = ring.ambient
        f = amb.zero()
        for i, c in enumerate(coords):
            if c != zero:
                f = f + ring.fs[i].scale(c)
        work_ring = ring
    hyper = CIRing(amb, [f], validate=False)
    m_a = restrict_to_ring(module, hyper)
    s = hyper.dim + 2
    if is_residue_field(other):
        dims = ext_k_dims(hyper, m_a, s + 1)
        return not (dims[s] == 0 and dims[s + 1] == 0)
    n_a = restrict_to_ring(other, hyper)
    van_s = ext_vanishes(hyper, m_a, n_a, s, engine)
    van_s1 = ext_vanishes(hyper, m_a, n_a, s + 1, engine)
    return not (van_s and van_s1)


# ---------------------------------------------------------------------------
# annihilator route


def annihilator_ideal(ext_module: ExtKModule, degree_bound: int) -> Ideal:
    """Forms of chi-degree <= degree_bound annihilating the windowed action.

    For each degree the annihilating forms are the nullspace of the stacked
    entries of all monomial action matrices; redundant generators are
    filtered out degree by degree.
    """
    ring = ext_module.ring
    chi = ring.chi_ring()
    p = ring.field.p
    window = ext_module.window
    if window < 2 * degree_bound + 2:
        raise ValueError("window must exceed twice the degree bound plus slack")
    kept = []
    for d in range(1, degree_bound + 1):
        monos = chi.monomials_of_degree(d)
        rows = []
        top = window - 2 * d
        for n in range(0, top + 1):
            if ext_module.dims[n] == 0:
                continue
            mats = [ext_module.monomial_action(alpha, n) for alpha in monos]
            if mats[0].size == 0:
                continue
            flat = np.stack([m.reshape(-1) for m in mats], axis=1)
            rows.append(flat)
        if rows:
            a = np.concatenate(rows, axis=0)
            basis = modlinalg.nullspace(a, p)
        else:
            basis = np.eye(len(monos), dtype=np.int64)
        gb_kept = buchberger(kept) if kept else []
        for col in range(basis.shape[1]):
            q = chi.from_terms(
                (monos[t], int(basis[t, col]) % p) for t in range(len(monos))
            )
            if q.is_zero():
                continue
            if gb_kept and normal_form(q, gb_kept).is_zero():
                continue
            kept.append(q.monic())
            gb_kept = buchberger(kept)
    return Ideal(chi, kept)


def default_window(ring: CIRing) -> int:
    return 2 * (ring.ambient.n + ring.c) + 4


def default_degree_bound(ring: CIRing) -> int:
    return ring.ambient.n + ring.c


def variety_of(
    ring: CIRing,
    module: GradedModule,
    window: int = None,
    degree_bound: int = None,
    engine: str = "auto",
) -> SupportVariety:
    """Support variety of a module via the annihilator of the chi action.

    The ideal is recomputed at window + 2; if the two agree up to radical the
    result is flagged stabilized, otherwise it is returned flagged unstable,
    never silently.
    """
    w = window if window is not None else default_window(ring)
    d = degree_bound if degree_bound is not None else default_degree_bound(ring)
    w = max(w, 2 * d + 2, 2)
    e1 = chi_action(ring, module, w, engine)
    i1 = annihilator_ideal(e1, d)
    e2 = chi_action(ring, module, w + 2, engine)
    i2 = annihilator_ideal(e2, d)
    stabilized = equal_up_to_radical(i1, i2)
    return SupportVariety(ring, i2, w + 2, stabilized, d)


def variety_of_pair(
    ring: CIRing,
    module: GradedModule,
    other: GradedModule,
    window: int = None,
    degree_bound: int = None,
    engine: str = "auto",
    cross_check_points: int = 3,
    seed: int = 11,
) -> SupportVariety:
    """Support variety of a pair, as the intersection of the two varieties.

    Pairs reduce to single-module varieties (the pair variety is the
    intersection); when the second argument is k or the module itself the
    single variety is returned directly.  Sampled directions are always
    cross-validated against the membership oracle.
    """
    if is_residue_field(other) or other.content_key() == module.content_key():
        v = variety_of(ring, module, window, degree_bound, engine)
    else:
        v1 = variety_of(ring, module, window, degree_bound, engine)
        v2 = variety_of(ring, other, window, degree_bound, engine)
        v = SupportVariety(
            ring,
            v1.ideal.sum(v2.ideal),
            min(v1.window_used, v2.window_used),
            v1.stabilized and v2.stabilized,
            v1.degree_bound,
            note="intersection of single-module varieties",
        )
    for coords in sample_points(ring, cross_check_points, seed):
        oracle = membership(ring, module, other, coords, engine)
        annih = vanishes_at(v.ideal, coords, ring.field)
        if oracle != annih:
            raise AssertionError(
                f"membership oracle disagrees with annihilator ideal at {coords}"
            )
    return v


def sample_points(ring: CIRing, count: int, seed: int = 11):
    """Deterministic sample of directions in k^c (zero point excluded)."""
    p = ring.field.p
    c = ring.c
    out = []
    state = seed
    seen = set()
    total = p**c - 1
    while len(out) < min(count, total):
        state = (state * 75 + 74) % 65537
        code = state % (p**c)
        coords = []
        t = code
        for _ in range(c):
            coords.append(t % p)
            t //= p
        coords = tuple(coords)
        if coords in seen or all(x == 0 for x in coords):
            continue
        seen.add(coords)
        out.append(coords)
    return out


def union_variety(v1: SupportVariety, v2: SupportVariety) -> SupportVariety:
    """Union of zero sets: the product ideal (radical-level construction)."""
    if v1.ring.key() != v2.ring.key():
        raise ValueError("varieties over different rings")
    return SupportVariety(
        v1.ring,
        v1.ideal.product(v2.ideal),
        min(v1.window_used, v2.window_used),
        v1.stabilized and v2.stabilized,
        max(v1.degree_bound, v2.degree_bound),
        note="radical-level union",
    )


def intersection_variety(v1: SupportVariety, v2: SupportVariety) -> SupportVariety:
    """Intersection of zero sets: the ideal sum (radical-level construction)."""
    if v1.ring.key() != v2.ring.key():
        raise ValueError("varieties over different rings")
    return SupportVariety(
        v1.ring,
        v1.ideal.sum(v2.ideal),
        min(v1.window_used, v2.window_used),
        v1.stabilized and v2.stabilized,
        max(v1.degree_bound, v2.degree_bound),
        note="radical-level intersection",
    )


# ---------------------------------------------------------------------------
# restriction to intermediate complete intersections


def restrict_to_subspace(vty: SupportVariety, w: Subspace) -> Ideal:
    """Ideal of the variety's trace on W, in the s-coordinates of W.

    Implemented as the linear substitution chi_i -> sum_j s_j A[j][i]
    applied to every generator.
    """
    ring = vty.ring
    sring = ring.s_ring(w.r)
    return substitute_linear(vty.ideal, w.rows, sring)


def substitute_linear(ideal: Ideal, rows, target_ring: PolyRing) -> Ideal:
    """Apply chi_i -> sum_j rows[j][i] * s_j to every generator."""
    c = len(rows[0]) if rows else 0
    images = []
    for i in range(c):
        lin = target_ring.zero()
        for j, row in enumerate(rows):
            if row[i]:
                lin = lin + target_ring.var_poly(j).scale(row[i])
        images.append(lin)
    gens = []
    for g in ideal.gens:
        acc = target_ring.zero()
        for mono, coeff in g.terms:
            term = target_ring.const(coeff)
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = term * images[i]
            acc = acc + term
        if not acc.is_zero():
            gens.append(acc)
    return Ideal(target_ring, gens)


# ---------------------------------------------------------------------------
# dimension, complexity, irreducibility


def dimension(vty: SupportVariety) -> int:
    return vty.ideal.dimension()


@dataclass
class ComplexityEstimate:
    value: int
    reliable: bool
    note: str = ""

    def __int__(self):
        return self.value


def _stabilization_order(seq, min_zeros: int = 3):
    """Smallest finite-difference order whose sequence ends in zeros."""
    cur = list(seq)
    for j in range(len(seq)):
        tail = cur[-min_zeros:] if len(cur) >= min_zeros else cur
        if tail and all(x == 0 for x in tail) and len(cur) >= min_zeros:
            return j
        if len(cur) < 2:
            return None
        cur = [b - a for a, b in zip(cur, cur[1:])]
    return None


def complexity_estimate(betti, window: int = None) -> ComplexityEstimate:
    """Polynomial growth order of the betti sequence, by finite differences.

    The complexity is the difference order at which the (tail of the)
    sequence stabilizes to zero; an even/odd split is tried before flagging
    the estimate unreliable.
    """
    seq = list(betti if window is None else betti[: window + 1])
    if len(seq) < 6:
        raise ValueError("need a betti window of length >= 6")
    drop = min(2, len(seq) - 6)
    tail = seq[drop:]
    j = _stabilization_order(tail)
    if j is not None:
        return ComplexityEstimate(j, True)
    je = _stabilization_order(tail[0::2], min_zeros=2)
    jo = _stabilization_order(tail[1::2], min_zeros=2)
    if je is not None and jo is not None:
        return ComplexityEstimate(max(je, jo), True, "even/odd split fit")
    return ComplexityEstimate(len(tail), False, "no polynomial fit in the window")


@dataclass
class IrreducibleVerdict:
    verdict: str  # "yes" | "no" | "unknown"
    note: str = ""


def _monic_candidates(ring: PolyRing, degree: int):
    """All monic homogeneous polynomials of the given degree, leading first."""
    monos = ring.monomials_of_degree(degree)
    p = ring.field.p
    for lead in range(len(monos)):
        tail_count = len(monos) - lead - 1
        for code in range(p**tail_count):
            coeffs = [0] * len(monos)
            coeffs[lead] = 1
            t = code
            for k in range(lead + 1, len(monos)):
                coeffs[k] = t % p
                t //= p
            yield ring.from_terms(
                (monos[k], coeffs[k]) for k in range(len(monos)) if coeffs[k]
            )


def _exact_divide(f: Poly, g: Poly):
    """h with f = g*h (both homogeneous), or None; solved by linear algebra."""
    ring = f.ring
    p = ring.field.p
    dh = f.degree() - g.degree()
    if dh < 0:
        return None
    monos_h = ring.monomials_of_degree(dh)
    monos_f = ring.monomials_of_degree(f.degree())
    idx = {m: i for i, m in enumerate(monos_f)}
    a = np.zeros((len(monos_f), len(monos_h)), dtype=np.int64)
    for j, mh in enumerate(monos_h):
        for mg, cg in g.terms:
            a[idx[mono_mul(mg, mh)], j] = cg
    b = np.zeros(len(monos_f), dtype=np.int64)
    for m, c in f.terms:
        b[idx[m]] = c
    sol = modlinalg.solve(a, b, p)
    if sol is None:
        return None
    h = ring.from_terms((monos_h[j], int(sol[j]) % p) for j in range(len(monos_h)))
    if (g * h - f).is_zero():
        return h
    return None


class _Budget:
    def __init__(self, limit):
        self.left = limit

    def spend(self, k=1):
        self.left -= k
        if self.left < 0:
            raise _BudgetExceeded()


class _BudgetExceeded(Exception):
    pass


def _distinct_irreducible_factors(f: Poly, budget: _Budget):
    """Count distinct monic irreducible factors of a homogeneous polynomial."""
    work = f.monic()
    found = []
    while work.degree() and work.degree() >= 1:
        hit = None
        for e in range(1, work.degree() // 2 + 1):
            for g in _monic_candidates(work.ring, e):
                budget.spend()
                h = _exact_divide(work, g)
                if h is not None:
                    hit = (g, h)
                    break
            if hit:
                break
        if hit is None:
            found.append(work)
            break
        g, h = hit
        found.append(g)
        work = h.monic()
        while True:
            h2 = _exact_divide(work, g)
            if h2 is None or work.degree() == 0:
                break
            work = h2.monic()
    uniq = {tuple(q.terms) for q in found if q.degree() and q.degree() >= 1}
    return len(uniq)


def irreducible_principal(vty: SupportVariety, budget_limit: int = 200_000) -> IrreducibleVerdict:
    """Principal-case irreducibility of the variety over the base field.

    Only the principal case is decided: a single reduced Groebner generator
    is factored by a bounded search for monic divisors.  One irreducible
    factor (possibly powered) gives "yes" over the base field (absolute
    irreducibility is not decided); several distinct factors give "no";
    everything else is "unknown".
    """
    gb = vty.ideal.groebner
    if not gb:
        return IrreducibleVerdict("yes", "zero ideal: the whole space")
    if len(gb) != 1:
        return IrreducibleVerdict("unknown", "radical not presented by one polynomial")
    g = gb[0]
    if g.degree() == 0:
        return IrreducibleVerdict("unknown", "unit ideal")
    try:
        n = _distinct_irreducible_factors(g, _Budget(budget_limit))
    except _BudgetExceeded:
        return IrreducibleVerdict("unknown", "factor search budget exceeded")
    if n <= 1:
        return IrreducibleVerdict("yes", "irreducible over the base field; closure not decided")
    return IrreducibleVerdict("no", f"{n} distinct factors")


def rename_ideal(ideal: Ideal, target_ring: PolyRing) -> Ideal:
    """Transport an ideal along the positional variable identification."""
    if ideal.ring.n != target_ring.n:
        raise ValueError("variable counts differ")
    gens = [target_ring.from_terms(g.terms) for g in ideal.gens]
    return Ideal(target_ring, gens)
