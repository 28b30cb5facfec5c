import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from semitoric import COUPLED_ANGULAR_MOMENTA, SPIN_OSCILLATOR, ModelSpec
from semitoric.errors import EdgeFitFailure
from semitoric.invariants import (
    hausdorff,
    polygon_recover,
    reference_polygon_slice,
    reference_polygon_vertices,
    sample_polygon_region,
)


def test_hausdorff_identical():
    a = np.random.default_rng(0).normal(size=(40, 2))
    d, _ = hausdorff(a, a)
    assert d == 0.0


def test_hausdorff_shifted_squares():
    sq = np.array([(x, y) for x in np.linspace(0, 1, 21) for y in np.linspace(0, 1, 21)])
    d, _ = hausdorff(sq + [0.1, 0.0], sq)
    assert d == pytest.approx(0.1, abs=1e-12)
    d_opt, shift = hausdorff(sq + [0.1, 0.0], sq, optimize_translation=True)
    assert d_opt < 1e-3
    assert shift[0] == pytest.approx(-0.1, abs=1e-3)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_hausdorff_symmetry(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(15, 2))
    b = rng.normal(size=(12, 2))
    assert hausdorff(a, b)[0] == pytest.approx(hausdorff(b, a)[0], rel=1e-12)


def polygon_grid_cloud(k, slice_fn, strip):
    """Exact grid labels of a polygonal region: ideal cartographic cloud."""
    h = 1.0 / k
    pts, labels = [], []
    for j in range(int(strip[0] / h), int(strip[1] / h) + 1):
        lo, hi = slice_fn(j * h)
        for l in range(int(np.ceil(lo / h)), int(np.floor(hi / h)) + 1):
            pts.append((j * h, l * h))
            labels.append((j, l))
    return np.array(pts), np.array(labels)


def test_polygon_recover_exact_cloud():
    model = ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.5, t=0.5)
    k = 40
    strip = (-3.3, 3.1)
    pts, labels = polygon_grid_cloud(k, lambda x: reference_polygon_slice(model, x), strip)
    est = polygon_recover(pts, labels, 1.0 / k, [-1.5, 1.5], strip)
    verts = np.asarray(reference_polygon_vertices(model), dtype=float)
    assert len(est.fitted_vertices) == 4
    for v in est.fitted_vertices:
        err = min(np.hypot(v[0] - a, v[1] - b) for a, b in verts)
        assert err < 1.5 / k   # discretization only


def test_polygon_recover_needs_columns():
    pts = np.array([[0.0, 0.0], [0.1, 0.0]])
    labels = np.array([[0, 0], [1, 0]])
    with pytest.raises(EdgeFitFailure):
        polygon_recover(pts, labels, 0.1, [], (0.0, 0.1))


def test_reference_slices_consistent_with_vertices():
    for model in (ModelSpec(SPIN_OSCILLATOR),
                  ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.5, t=0.5)):
        for (vx, vy) in reference_polygon_vertices(model):
            lo, hi = reference_polygon_slice(model, vx)
            assert lo - 1e-12 <= vy <= hi + 1e-12


def test_sample_polygon_region_inside():
    model = ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.5, t=0.5)
    pts = sample_polygon_region(model, (-3.0, 3.0), 0.1)
    for x, y in pts[::7]:
        lo, hi = reference_polygon_slice(model, x)
        assert lo - 1e-9 <= y <= hi + 1e-9
