"""Smoke coverage for the property battery the `check` subcommand runs."""

from cisupport.checksuite import (
    check_cone_section,
    check_oracle_agreement,
    check_scaling_invariance,
    check_syzygy_ring_independence,
    check_tensor_split,
)
from cisupport.catalog import catalog_modules, catalog_ses, two_var_ring


def test_catalog_contents():
    ring = two_var_ring(3)
    mods = catalog_modules(ring)
    assert set(mods) == {
        "k",
        "R",
        "R/(x)",
        "R/(y)",
        "syz1(k)",
        "cone(chi1*chi2)",
        "cone(origin)",
    }
    ses = catalog_ses(ring)
    assert len(ses) == 2


def test_cone_section_property():
    assert check_cone_section([two_var_ring(3)])["passed"]


def test_syzygy_ring_independence_property():
    assert check_syzygy_ring_independence(3)["passed"]


def test_tensor_split_property():
    assert check_tensor_split(3)["passed"]


def test_sampled_oracle_and_scaling():
    ring = two_var_ring(3)
    assert check_oracle_agreement(ring, exhaustive=False, sample=4)["passed"]
    assert check_scaling_invariance(ring)["passed"]
