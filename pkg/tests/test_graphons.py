"""Kernel containers: grids, expressions, bands, families."""

import numpy as np
import pytest

from esdlab.errors import NumericError, ValidationError
from esdlab.graphons import (
    Graphon,
    GraphonFamily,
    as_graphon,
    band_indicator,
    band_indicator_values,
)


def test_constant_kernel():
    g = Graphon.constant(2.5)
    assert g.eval(0.1, 0.9) == 2.5
    x = np.linspace(0, 1, 5)
    assert np.all(g.eval(x, x[::-1]) == 2.5)
    assert g.bound >= 2.5
    assert g.smooth


def test_grid_kernel_cell_lookup():
    g = Graphon.from_grid([0.0, 0.25, 1.0], [[1.0, 2.0], [2.0, 3.0]])
    assert g.eval(0.1, 0.1) == 1.0
    assert g.eval(0.1, 0.5) == 2.0
    assert g.eval(0.9, 0.9) == 3.0
    # boundary points fall into the right-hand cell, endpoint clipped
    assert g.eval(0.25, 0.25) == 3.0
    assert g.eval(1.0, 1.0) == 3.0
    assert not g.smooth


def test_grid_validation():
    with pytest.raises(ValidationError):
        Graphon.from_grid([0.0, 1.0], [[1.0, 2.0], [2.0, 1.0]])  # shape mismatch
    with pytest.raises(ValidationError):
        Graphon.from_grid([0.0, 0.5, 1.0], [[1.0, 2.0], [3.0, 1.0]])  # asymmetric
    with pytest.raises(ValidationError):
        Graphon.from_grid([0.5, 0.2, 1.0], [[1.0, 0.0], [0.0, 1.0]])  # not increasing
    with pytest.raises(NumericError):
        Graphon.from_grid([0.0, 0.5, 1.0], [[np.nan, 0.0], [0.0, 1.0]])


def test_expression_kernel_requires_symmetry():
    g = Graphon.from_expression("x + y")
    assert g.eval(0.25, 0.5) == 0.75
    with pytest.raises(ValidationError):
        Graphon.from_expression("x - y")


def test_callable_kernel_and_bound_estimate():
    g = Graphon.from_callable(lambda x, y: 4 * x * y)
    assert g.eval(0.5, 0.5) == pytest.approx(1.0)
    assert g.bound >= 4.0 - 1e-6


def test_band_indicator_geometry():
    open_vals = band_indicator_values(
        np.array([0.0, 0.5, 0.9]), np.array([0.9, 0.6, 0.0]), 0.25, periodic=False
    )
    assert list(open_vals) == [0.0, 1.0, 0.0]
    wrapped = band_indicator_values(
        np.array([0.0, 0.5]), np.array([0.9, 0.9]), 0.25, periodic=True
    )
    # wrap-around distance 0.1 is inside the periodic band
    assert list(wrapped) == [1.0, 0.0]
    g = band_indicator(0.25, periodic=True)
    assert g.eval(0.05, 0.95) == 1.0
    assert not g.smooth


def test_banded_wrapper_multiplies():
    g = Graphon.constant(3.0).banded(0.2, periodic=True)
    assert g.eval(0.5, 0.55) == 3.0
    assert g.eval(0.05, 0.9) == 3.0  # wraps around
    assert g.eval(0.1, 0.5) == 0.0
    with pytest.raises(ValidationError):
        Graphon.constant(1.0).banded(0.0, periodic=True)
    with pytest.raises(ValidationError):
        Graphon.constant(1.0).banded(0.75, periodic=False)


def test_power_scale_preserves_exact_kinds():
    c = Graphon.constant(2.0).power_scale(4, 0.5)
    assert c.kind == "constant"
    assert c.eval(0.2, 0.2) == pytest.approx(2.0**4 * 0.5)
    grid = Graphon.from_grid([0.0, 0.5, 1.0], [[1.0, 2.0], [2.0, 3.0]])
    squared = grid.power_scale(2, 1.0)
    assert squared.kind == "grid"
    assert squared.eval(0.9, 0.9) == pytest.approx(9.0)
    smooth = Graphon.from_expression("4*x*y").power_scale(2, 2.0)
    assert smooth.eval(0.5, 0.5) == pytest.approx(2.0)
    assert smooth.smooth


def test_as_graphon_coercion():
    assert as_graphon(2.0).eval(0.5, 0.5) == 2.0
    assert as_graphon("x*y").eval(0.5, 0.5) == 0.25
    g = Graphon.constant(1.0)
    assert as_graphon(g) is g
    with pytest.raises(ValidationError):
        as_graphon([1, 2, 3])


def test_family_entries_and_rule():
    fam = GraphonFamily(entries={2: Graphon.constant(1.0)})
    assert fam.g(2).eval(0.5, 0.5) == 1.0
    assert fam.g(4) is None
    assert fam.bound(2) >= 1.0

    ruled = GraphonFamily.from_constant_rule(lambda order: 2.0 / order)
    assert ruled.g(6).eval(0.1, 0.1) == pytest.approx(1 / 3)

    with pytest.raises(ValidationError):
        GraphonFamily(entries={3: Graphon.constant(1.0)})


def test_family_banded_composes():
    fam = GraphonFamily(entries={2: Graphon.constant(2.0)}).banded(0.2, periodic=True)
    g = fam.g(2)
    assert g.eval(0.5, 0.55) == 2.0
    assert g.eval(0.1, 0.6) == 0.0
    assert fam.g(4) is None
