"""Built-in catalog of test rings and modules for the property suites."""

from __future__ import annotations

from .cimodule import (
    CIRing,
    cyclic_module,
    free_module,
    residue_module,
    submodule_and_quotient,
)
from .field import PrimeField
from .poly import PolyRing, parse_poly
from .realize import ConeSpec, mapping_cone_module, realize_cone
from .resolution import syzygy_module

_RING_CACHE: dict = {}
_MODULE_CACHE: dict = {}


def two_var_ring(p: int) -> CIRing:
    """k[x,y]/(x^2, y^2) over F_p."""
    key = ("2var", p)
    if key not in _RING_CACHE:
        q = PolyRing(["x", "y"], field=PrimeField(p))
        _RING_CACHE[key] = CIRing(q, [parse_poly(q, "x^2"), parse_poly(q, "y^2")])
    return _RING_CACHE[key]


def three_var_ring(p: int) -> CIRing:
    """k[x,y,z]/(x^2, y^2, z^2) over F_p."""
    key = ("3var", p)
    if key not in _RING_CACHE:
        q = PolyRing(["x", "y", "z"], field=PrimeField(p))
        _RING_CACHE[key] = CIRing(
            q, [parse_poly(q, s) for s in ("x^2", "y^2", "z^2")]
        )
    return _RING_CACHE[key]


def dim2_hypersurface_ring(p: int) -> CIRing:
    """k[x,y,z]/(x^2): a non-artinian quotient for regular-element properties."""
    key = ("dim2", p)
    if key not in _RING_CACHE:
        q = PolyRing(["x", "y", "z"], field=PrimeField(p))
        _RING_CACHE[key] = CIRing(q, [parse_poly(q, "x^2")])
    return _RING_CACHE[key]


def catalog_modules(ring: CIRing) -> dict:
    """Named catalog modules over a quadric complete intersection."""
    key = ring.key()
    if key in _MODULE_CACHE:
        return _MODULE_CACHE[key]
    amb = ring.ambient
    chi = ring.chi_ring()
    mods = {
        "k": residue_module(ring),
        "R": free_module(ring),
        "R/(x)": cyclic_module(ring, [amb.var_poly(0)]),
        "R/(y)": cyclic_module(ring, [amb.var_poly(1)]),
    }
    mods["syz1(k)"] = syzygy_module(mods["k"], 1)
    if ring.c == 2:
        mods["cone(chi1*chi2)"] = realize_cone(
            ring, ConeSpec([parse_poly(chi, "chi1*chi2")])
        )
        mods["cone(origin)"] = realize_cone(
            ring, ConeSpec([parse_poly(chi, "chi1"), parse_poly(chi, "chi2")])
        )
    elif ring.c == 3:
        mods["K_quadric"] = realize_cone(
            ring, ConeSpec([parse_poly(chi, "chi1*chi2 - chi3^2")])
        )
        mods["cone(chi1)"] = realize_cone(ring, ConeSpec([parse_poly(chi, "chi1")]))
        mods["cone(origin)"] = realize_cone(
            ring,
            ConeSpec([parse_poly(chi, v) for v in ("chi1", "chi2", "chi3")]),
        )
    _MODULE_CACHE[key] = mods
    return mods


def catalog_ses(ring: CIRing):
    """Short exact sequences over the ring: a submodule split and a cone."""
    amb = ring.ambient
    out = []
    sub, quot, _ = submodule_and_quotient(free_module(ring), [[amb.var_poly(0)]])
    out.append(("xR < R", sub, free_module(ring), quot))
    chi = ring.chi_ring()
    cone = mapping_cone_module(ring, residue_module(ring), parse_poly(chi, "chi1"))
    out.append(("k < K_chi1", cone.base_module, cone.module, cone.quotient_part))
    return out


def acceptance_rings():
    """The ring instances the acceptance criteria quantify over."""
    return {
        "2var_p3": two_var_ring(3),
        "2var_p5": two_var_ring(5),
        "3var_p2": three_var_ring(2),
        "3var_p3": three_var_ring(3),
    }
