"""Buchberger engine over free modules with witness tracking.

One engine covers ideals (single component) and column modules of graded
matrices.  Vectors are dicts mapping (component, monomial) to a coefficient;
the module order is degree-first (twisted), then grevlex on the monomial,
then component.  S-pairs are processed in increasing degree (normal
strategy) so runs are deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .poly import Poly, PolyRing, mono_div, mono_divides, mono_lcm, mono_mul


class ModuleCtx:
    """Order data for a free module with given component twists."""

    def __init__(self, ring: PolyRing, twists):
        self.ring = ring
        self.twists = tuple(twists)
        self.field = ring.field

    def key(self, term):
        comp, mono = term
        return (
            self.ring.wdeg(mono) + self.twists[comp],
            tuple(-e for e in reversed(mono)),
            -comp,
        )

    def term_degree(self, term):
        return self.ring.wdeg(term[1]) + self.twists[term[0]]


def vp_lead(ctx: ModuleCtx, v: dict):
    return max(v, key=ctx.key)


def vp_axpy(field, dst: dict, src: dict, mono, coeff):
    """dst += coeff * x^mono * src, in place."""
    zero = field.zero
    for (comp, m), c in src.items():
        t = (comp, mono_mul(m, mono))
        nc = field.add(dst.get(t, zero), field.mul(c, coeff))
        if nc == zero:
            dst.pop(t, None)
        else:
            dst[t] = nc


def vp_scale(field, v: dict, c) -> dict:
    return {t: field.mul(cc, c) for t, cc in v.items()}


def poly_to_vec(poly: Poly, comp: int = 0) -> dict:
    return {(comp, m): c for m, c in poly.terms}


def vec_component(ctx: ModuleCtx, v: dict, comp: int) -> Poly:
    return ctx.ring.from_terms((m, c) for (cc, m), c in v.items() if cc == comp)


class GroebnerBasis:
    """Module Groebner basis with optional traces back to the input vectors."""

    def __init__(self, ctx: ModuleCtx, elements, traces=None):
        self.ctx = ctx
        self.elements = elements  # list of dict vectors, each monic
        self.traces = traces  # parallel list of dicts over input indices, or None
        self._by_comp = {}
        for i, v in enumerate(elements):
            lt = vp_lead(ctx, v)
            self._by_comp.setdefault(lt[0], []).append((lt[1], i))

    def lead(self, i):
        return vp_lead(self.ctx, self.elements[i])

    def find_reducer(self, term):
        comp, mono = term
        for lm, i in self._by_comp.get(comp, ()):
            if mono_divides(lm, mono):
                return i
        return None

    def reduce(self, v: dict, track: bool = False):
        """Full normal form of v; with track=True also the division quotients.

        Quotients come back as a dict {basis index: quotient dict of
        (mono, coeff)} such that v = sum(q_i * g_i) + remainder.
        """
        field = self.ctx.field
        work = dict(v)
        rem = {}
        quots = {} if track else None
        while work:
            t = vp_lead(self.ctx, work)
            c = work[t]
            i = self.find_reducer(t)
            if i is None:
                rem[t] = c
                del work[t]
                continue
            g = self.elements[i]
            lt = vp_lead(self.ctx, g)
            qm = mono_div(t[1], lt[1])
            qc = c  # basis elements are monic
            vp_axpy(field, work, g, qm, field.neg(qc))
            if track:
                qd = quots.setdefault(i, {})
                nc = field.add(qd.get(qm, field.zero), qc)
                if nc == field.zero:
                    qd.pop(qm, None)
                else:
                    qd[qm] = nc
        if track:
            return rem, quots
        return rem

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)


def _spair_data(ctx, va, vb, la, lb):
    lcm = mono_lcm(la[1], lb[1])
    ma = mono_div(lcm, la[1])
    mb = mono_div(lcm, lb[1])
    deg = ctx.ring.wdeg(lcm) + ctx.twists[la[0]]
    return lcm, ma, mb, deg


def module_groebner(ring: PolyRing, twists, vectors, track: bool = False) -> GroebnerBasis:
    """Groebner basis of the submodule generated by the given vectors.

    vectors: list of dict {(comp, mono): coeff}; zero vectors are allowed and
    skipped (their indices still count for traces).
    """
    ctx = ModuleCtx(ring, twists)
    field = ring.field
    basis = []
    traces = [] if track else None
    by_comp = {}

    def add_element(v, tr):
        lt = vp_lead(ctx, v)
        inv = field.inv(v[lt])
        v = vp_scale(field, v, inv)
        idx = len(basis)
        basis.append(v)
        if track:
            traces.append(vp_scale(field, tr, inv))
        by_comp.setdefault(lt[0], []).append((lt[1], idx))
        return idx, lt

    def find_reducer(term):
        comp, mono = term
        for lm, i in by_comp.get(comp, ()):
            if mono_divides(lm, mono):
                return i
        return None

    def reduce_with_trace(work, tr):
        rem = {}
        while work:
            t = vp_lead(ctx, work)
            c = work[t]
            i = find_reducer(t)
            if i is None:
                rem[t] = c
                del work[t]
                continue
            g = basis[i]
            lt = vp_lead(ctx, g)
            qm = mono_div(t[1], lt[1])
            vp_axpy(field, work, g, qm, field.neg(c))
            if tr is not None:
                vp_axpy(field, tr, traces[i], qm, field.neg(c))
        return rem

    pairs = []  # heap of (degree, i, j)
    leads = []

    for j, v in enumerate(vectors):
        if not v:
            continue
        tr = {(j, ring.zero_mono): field.one} if track else None
        rem = reduce_with_trace(dict(v), tr)
        if not rem:
            continue
        idx, lt = add_element(rem, tr)
        leads.append(lt)
        for i in range(idx):
            li = vp_lead(ctx, basis[i])
            if li[0] == lt[0]:
                _, _, _, deg = _spair_data(ctx, basis[i], basis[idx], li, lt)
                heapq.heappush(pairs, (deg, i, idx))

    while pairs:
        _, a, b = heapq.heappop(pairs)
        ga, gb = basis[a], basis[b]
        la, lb = vp_lead(ctx, ga), vp_lead(ctx, gb)
        lcm, ma, mb, _ = _spair_data(ctx, ga, gb, la, lb)
        work = {}
        vp_axpy(field, work, ga, ma, field.one)
        vp_axpy(field, work, gb, mb, field.neg(field.one))
        tr = None
        if track:
            tr = {}
            vp_axpy(field, tr, traces[a], ma, field.one)
            vp_axpy(field, tr, traces[b], mb, field.neg(field.one))
        rem = reduce_with_trace(work, tr)
        if rem:
            idx, lt = add_element(rem, tr)
            for i in range(idx):
                li = vp_lead(ctx, basis[i])
                if li[0] == lt[0]:
                    _, _, _, deg = _spair_data(ctx, basis[i], basis[idx], li, lt)
                    heapq.heappush(pairs, (deg, i, idx))

    return GroebnerBasis(ctx, basis, traces)


def module_syzygies(ring: PolyRing, twists, vectors):
    """Generators of the syzygy module of the given vectors over the free ring.

    Returns a list of dicts over components 0..len(vectors)-1 (coefficients of
    the input vectors).  Standard two-pass construction: a tracked Groebner
    basis, then one syzygy per S-pair of basis elements plus the relations
    expressing each input through the basis.
    """
    ctx = ModuleCtx(ring, twists)
    field = ring.field
    gb = module_groebner(ring, twists, vectors, track=True)
    syzygies = []

    # inputs that reduce to zero against the basis contribute e_j - sum q_t tr_t
    for j, v in enumerate(vectors):
        if not v:
            syzygies.append({(j, ring.zero_mono): field.one})
            continue
        rem, quots = gb.reduce(dict(v), track=True)
        if rem:
            raise AssertionError("generator does not reduce against its own basis")
        syz = {(j, ring.zero_mono): field.one}
        for t, qd in quots.items():
            for qm, qc in qd.items():
                vp_axpy(field, syz, gb.traces[t], qm, field.neg(qc))
        if syz:
            syzygies.append(syz)

    n = len(gb.elements)
    pair_list = []
    for b in range(n):
        lb = gb.lead(b)
        for a in range(b):
            la = gb.lead(a)
            if la[0] == lb[0]:
                lcm = mono_lcm(la[1], lb[1])
                deg = ring.wdeg(lcm) + ctx.twists[la[0]]
                pair_list.append((deg, a, b))
    pair_list.sort()
    for _, a, b in pair_list:
        ga, gb_ = gb.elements[a], gb.elements[b]
        la, lb = gb.lead(a), gb.lead(b)
        lcm = mono_lcm(la[1], lb[1])
        ma = mono_div(lcm, la[1])
        mb = mono_div(lcm, lb[1])
        work = {}
        vp_axpy(field, work, ga, ma, field.one)
        vp_axpy(field, work, gb_, mb, field.neg(field.one))
        rem, quots = gb.reduce(work, track=True)
        if rem:
            raise AssertionError("S-pair of a Groebner basis did not reduce to zero")
        syz = {}
        vp_axpy(field, syz, gb.traces[a], ma, field.one)
        vp_axpy(field, syz, gb.traces[b], mb, field.neg(field.one))
        for t, qd in quots.items():
            for qm, qc in qd.items():
                vp_axpy(field, syz, gb.traces[t], qm, field.neg(qc))
        if syz:
            syzygies.append(syz)
    return syzygies


class IncrementalGB:
    """Groebner basis that accepts elements one at a time.

    Used for greedy minimal-generator selection and membership filters; no
    traces.
    """

    def __init__(self, ring: PolyRing, twists):
        self.ctx = ModuleCtx(ring, twists)
        self.field = ring.field
        self.basis = []
        self._by_comp = {}

    def _find_reducer(self, term):
        comp, mono = term
        for lm, i in self._by_comp.get(comp, ()):
            if mono_divides(lm, mono):
                return i
        return None

    def normal_form(self, v: dict) -> dict:
        field = self.field
        work = dict(v)
        rem = {}
        while work:
            t = vp_lead(self.ctx, work)
            c = work[t]
            i = self._find_reducer(t)
            if i is None:
                rem[t] = c
                del work[t]
                continue
            g = self.basis[i]
            lt = vp_lead(self.ctx, g)
            vp_axpy(field, work, g, mono_div(t[1], lt[1]), field.neg(c))
        return rem

    def contains(self, v: dict) -> bool:
        return not self.normal_form(v)

    def _insert(self, v):
        lt = vp_lead(self.ctx, v)
        v = vp_scale(self.field, v, self.field.inv(v[lt]))
        idx = len(self.basis)
        self.basis.append(v)
        self._by_comp.setdefault(lt[0], []).append((lt[1], idx))
        return idx, lt

    def add(self, v: dict) -> bool:
        """Add a vector; returns True if it enlarged the module."""
        rem = self.normal_form(v)
        if not rem:
            return False
        pending = [rem]
        enlarged = False
        while pending:
            w = self.normal_form(pending.pop())
            if not w:
                continue
            enlarged = True
            idx, lt = self._insert(w)
            for i in range(idx):
                li = vp_lead(self.ctx, self.basis[i])
                if li[0] == lt[0]:
                    lcm = mono_lcm(li[1], lt[1])
                    s = {}
                    vp_axpy(self.field, s, self.basis[i], mono_div(lcm, li[1]), self.field.one)
                    vp_axpy(
                        self.field,
                        s,
                        self.basis[idx],
                        mono_div(lcm, lt[1]),
                        self.field.neg(self.field.one),
                    )
                    if s:
                        pending.append(s)
        return enlarged


# ---------------------------------------------------------------------------
# ideal-level operations


def buchberger(gens) -> list:
    """The unique reduced Groebner basis of the ideal generated by gens.

    All generators must live in one ring; the global grevlex order of that
    ring is used.  Generators are returned monic, sorted by increasing
    leading term.
    """
    gens = [g for g in gens]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring.key() != ring.key():
            raise ValueError("mixed-ring generators")
    vectors = [poly_to_vec(g) for g in gens if not g.is_zero()]
    gb = module_groebner(ring, (0,), vectors)
    polys = [
        ring.from_terms((m, c) for (_, m), c in v.items()) for v in gb.elements
    ]
    return _interreduce(ring, polys)


def _interreduce(ring: PolyRing, polys) -> list:
    polys = [p for p in polys if not p.is_zero()]
    # drop any element whose leading monomial is divisible by another's
    polys.sort(key=lambda q: ring.mono_key(q.lm()))
    kept = []
    for i, p in enumerate(polys):
        lm = p.lm()
        redundant = False
        for j, q in enumerate(polys):
            if i != j and mono_divides(q.lm(), lm):
                if ring.mono_key(q.lm()) != ring.mono_key(lm) or j < i:
                    redundant = True
                    break
        if not redundant:
            kept.append(p)
    # fully reduce each tail against the others
    out = []
    for i, p in enumerate(kept):
        others = [q for j, q in enumerate(kept) if j != i]
        out.append(normal_form(p, others) if others else p.monic())
    out = [p.monic() for p in out if not p.is_zero()]
    out.sort(key=lambda q: ring.mono_key(q.lm()))
    return out


def normal_form(f: Poly, basis) -> Poly:
    """Remainder of multivariate division of f by the basis (full reduction)."""
    ring = f.ring
    field = ring.field
    work = dict(f.terms)
    rem = {}
    lookup = [(g.lm(), g.lc(), g) for g in basis if not g.is_zero()]
    while work:
        mono = max(work, key=ring.mono_key)
        c = work[mono]
        hit = None
        for lm, lc, g in lookup:
            if mono_divides(lm, mono):
                hit = (lm, lc, g)
                break
        if hit is None:
            rem[mono] = c
            del work[mono]
            continue
        lm, lc, g = hit
        qm = mono_div(mono, lm)
        qc = field.mul(c, field.inv(lc))
        for m2, c2 in g.terms:
            t = mono_mul(m2, qm)
            nc = field.sub(work.get(t, field.zero), field.mul(c2, qc))
            if nc == field.zero:
                work.pop(t, None)
            else:
                work[t] = nc
    return ring.from_terms(rem.items())


def member_witness(f: Poly, gens):
    """Coefficients (c_1, ..., c_r) with f = sum c_i * gens[i], or None.

    The witness is the division-trace one: divide f by the tracked Groebner
    basis of gens and push the quotients back through the traces.  It is
    deterministic for a fixed generator order; permuting gens may give a
    different (equally valid) witness.
    """
    ring = f.ring
    field = ring.field
    vectors = [poly_to_vec(g) for g in gens]
    gb = module_groebner(ring, (0,), vectors, track=True)
    rem, quots = gb.reduce(poly_to_vec(f), track=True)
    if rem:
        return None
    coeffs = [ring.zero() for _ in gens]
    for t, qd in quots.items():
        trace = gb.traces[t]
        for (j, m), c in trace.items():
            add = ring.from_terms(
                (mono_mul(m, qm), field.mul(c, qc)) for qm, qc in qd.items()
            )
            coeffs[j] = coeffs[j] + add
    return coeffs


def radical_member(f: Poly, ideal_gens) -> bool:
    """Does f vanish on the zero set of the ideal (over the closure)?

    Decided by the adjoined-variable trick: f is in the radical iff 1 lies in
    ideal + (1 - t*f) after adjoining a fresh variable t.
    """
    if f.is_zero():
        return True
    ring = f.ring
    fresh = "t_"
    while fresh in ring.variables:
        fresh += "_"
    ext = ring.extend([fresh])
    lift = lambda q: ext.from_terms((m + (0,), c) for m, c in q.terms)
    t_poly = ext.var_poly(ext.n - 1)
    one = ext.one()
    gens = [lift(g) for g in ideal_gens if not g.is_zero()]
    gens.append(one - t_poly * lift(f))
    gb = buchberger(gens)
    return any(g.lm() == ext.zero_mono for g in gb)


def leading_term_ideal(gb) -> list:
    return [g.lm() for g in gb if not g.is_zero()]


def krull_dimension_of_gb(ring: PolyRing, gb) -> int:
    """Krull dimension of ring/I from the leading terms of a reduced GB.

    The dimension is the largest number of variables spanning a coordinate
    subspace that meets no leading-term support.  Returns -1 for the unit
    ideal.
    """
    lts = leading_term_ideal(gb)
    if any(m == ring.zero_mono for m in lts):
        return -1
    if not lts:
        return ring.n
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lts]
    best = 0
    for mask in range(1 << ring.n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        subset = {i for i in range(ring.n) if mask >> i & 1}
        if all(not s <= subset for s in supports):
            best = size
    return best


def krull_dimension(ideal_gens, ring: PolyRing = None) -> int:
    gens = [g for g in ideal_gens if not g.is_zero()]
    if ring is None:
        if not gens:
            raise ValueError("need a ring for the empty ideal")
        ring = gens[0].ring
    gb = buchberger(gens) if gens else []
    return krull_dimension_of_gb(ring, gb)


@dataclass
class RegSeqResult:
    ok: bool
    length: int
    independent: bool
    note: str = ""

    def __bool__(self):
        return self.ok


def is_regular_sequence(fs, ring: PolyRing = None) -> RegSeqResult:
    """Check that fs is a regular sequence of forms of degree >= 2.

    Homogeneous f_1, ..., f_c are a regular sequence iff the quotient by them
    has dimension n - c; the degree condition keeps them inside the square of
    the irrelevant ideal.  With non-unit variable weights the degree >= 2
    reading of that condition is flagged in the note rather than silently
    assumed.
    """
    fs = list(fs)
    if ring is None:
        if not fs:
            raise ValueError("need a ring for the empty sequence")
        ring = fs[0].ring
    for f in fs:
        if not f.is_homogeneous():
            raise ValueError("regular-sequence candidates must be homogeneous")
    if not fs:
        return RegSeqResult(True, 0, True)
    note = ""
    if not ring._std_weights:
        note = "non-unit weights: degree >= 2 test is a convention here"
    if any(f.is_zero() or f.degree() < 2 for f in fs):
        return RegSeqResult(False, len(fs), False, note)
    c = len(fs)
    if c > ring.n:
        return RegSeqResult(False, c, False, note)
    dim = krull_dimension(fs, ring)
    ok = dim == ring.n - c
    # for a genuine regular sequence the images are independent in I/mI:
    # a dependence would let c-1 elements cut the same ideal, dropping height
    return RegSeqResult(ok, c, ok, note)


class Ideal:
    """An ideal with a lazily cached reduced Groebner basis."""

    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        self.gens = tuple(g for g in gens if not g.is_zero())
        for g in self.gens:
            if g.ring.key() != ring.key():
                raise ValueError("generator from a different ring")
        self._gb = None

    @property
    def groebner(self):
        if self._gb is None:
            self._gb = buchberger(list(self.gens)) if self.gens else []
        return self._gb

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self.groebner).is_zero()

    def radical_contains(self, f: Poly) -> bool:
        return radical_member(f, list(self.gens))

    def dimension(self) -> int:
        return krull_dimension_of_gb(self.ring, self.groebner)

    def is_zero(self) -> bool:
        return not self.gens

    def sum(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, list(self.gens) + list(other.gens))

    def product(self, other: "Ideal") -> "Ideal":
        if self.is_zero() or other.is_zero():
            return Ideal(self.ring, [])
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def key(self):
        return ("ideal", self.ring.key(), tuple(tuple(g.terms) for g in self.gens))

    def __repr__(self):
        from .poly import render_poly

        return "Ideal(" + ", ".join(render_poly(g) for g in self.gens) + ")"


def equal_up_to_radical(i1: Ideal, i2: Ideal) -> bool:
    """Do the two ideals cut out the same zero set?

    Checked by radical membership of each generator in the other ideal.
    """
    if i1.ring.key() != i2.ring.key():
        raise ValueError("ideals live in different rings")
    for g in i1.gens:
        if not i2.radical_contains(g):
            return False
    for g in i2.gens:
        if not i1.radical_contains(g):
            return False
    return True
