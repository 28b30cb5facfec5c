import json

import numpy as np
import pytest

from semitoric import (
    COUPLED_ANGULAR_MOMENTA,
    SPIN_OSCILLATOR,
    ModelSpec,
    Rect,
    build_blocks,
    dense_oracle_spectrum,
    joint_spectrum,
    spectrum_to_csv,
    spectrum_to_json,
)
from semitoric.errors import DimensionMismatch, EmptyWindow

SPIN = ModelSpec(SPIN_OSCILLATOR)
COUPLED = ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.5, t=0.5)


def test_spin_k1_single_block():
    blocks = build_blocks(SPIN, 1, (0.9, 1.1))
    assert len(blocks) == 1
    b = blocks[0]
    assert b.size == 2 and b.j_value == pytest.approx(1.0)
    # chain (n=0,l=0),(n=1,l=1): coupling 1/(2 sqrt 2)
    assert b.offdiag == pytest.approx([1 / (2 * np.sqrt(2))])
    assert b.eigenvalues() == pytest.approx([-0.3535533905932738, 0.3535533905932738])


def test_coupled_t0_is_diagonal():
    model = ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.5, t=0.0)
    for b in build_blocks(model, 2, (-3.5, 3.5)):
        assert np.all(b.offdiag == 0.0)


def test_coupled_t0_constant_lines():
    # H = (1-t) z1 term only: eigenvalues take at most 2*k*r1 distinct values
    model = ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.5, t=0.0)
    spec = joint_spectrum(model, 2)
    ys = np.unique(np.round([p.y for p in spec.points], 12))
    assert len(ys) <= round(2 * 2 * model.r1)


def test_coupled_total_dimension():
    blocks = build_blocks(COUPLED, 10, (-3.6, 3.6))
    assert sum(b.size for b in blocks) == 20 * 50


def test_coupled_spectrum_bounds():
    spec = joint_spectrum(COUPLED, 10)
    pts = spec.as_array()
    assert np.all(np.abs(pts[:, 0]) <= 3.5)
    assert np.all(np.abs(pts[:, 1]) <= 1.0 + 2.0 / 10)


def test_spin_k15_window():
    spec = joint_spectrum(SPIN, 15, Rect(-1, 2, -1.2, 1.2))
    pts = spec.as_array()
    assert len(pts) > 300
    assert pts[:, 0].min() >= -1 and pts[:, 0].max() <= 2
    # y -> -y symmetry of the model
    ys = np.sort(pts[:, 1])
    assert np.allclose(ys, -ys[::-1], atol=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_oracle_equivalence_coupled(k):
    spec = joint_spectrum(COUPLED, k)
    oracle = dense_oracle_spectrum(COUPLED, k)
    a, b = spec.columns(), oracle.columns()
    assert set(a) == set(b)
    err = max(np.abs(a[i] - b[i]).max() for i in a)
    assert err < 1e-10


@pytest.mark.parametrize("k", [1, 2])
def test_oracle_equivalence_spin(k):
    n_max = 40
    spec = joint_spectrum(SPIN, k, Rect(0.0, 1 + (n_max - 2 * k) / k, -3, 3))
    oracle = dense_oracle_spectrum(SPIN, k, n_max=n_max)
    a, b = spec.columns(), oracle.columns()
    for m in a:
        if m <= n_max - 2 * k:   # untouched by the Bargmann truncation
            assert np.abs(a[m] - b[m]).max() < 1e-9


def test_block_enumeration_order_independent():
    s1 = joint_spectrum(COUPLED, 3).as_array()
    s2 = joint_spectrum(COUPLED, 3).as_array()
    assert np.array_equal(s1, s2)
    blocks = build_blocks(COUPLED, 3, (-3.6, 3.6))
    ev_fwd = np.sort(np.concatenate([b.eigenvalues() for b in blocks]))
    ev_rev = np.sort(np.concatenate([b.eigenvalues() for b in blocks[::-1]]))
    assert np.abs(ev_fwd - ev_rev).max() < 1e-12


def test_blocks_monotone_simple():
    for b in build_blocks(COUPLED, 5, (-3.0, 3.0)):
        ev = b.eigenvalues()
        if len(ev) > 1:
            assert np.all(np.diff(ev) > 0)


def test_dimension_mismatch():
    bad = ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=1.0, r2=2.3, t=0.5)
    with pytest.raises(DimensionMismatch):
        build_blocks(bad, 2, (-3, 3))


def test_empty_window():
    with pytest.raises(EmptyWindow):
        build_blocks(COUPLED, 2, (10.0, 11.0))


def test_model_validation():
    with pytest.raises(ValueError):
        ModelSpec(COUPLED_ANGULAR_MOMENTA, r1=2.5, r2=1.0)
    with pytest.raises(ValueError):
        ModelSpec("pendulum")


def test_exports():
    spec = joint_spectrum(COUPLED, 2)
    csv = spectrum_to_csv(spec)
    lines = csv.strip().split("\n")
    assert lines[0] == "k,x,y,block,idx"
    assert len(lines) == len(spec) + 1
    data = json.loads(spectrum_to_json(spec))
    assert data["k"] == 2 and len(data["points"]) == len(spec)
    # round trip at full precision
    x0 = float(lines[1].split(",")[1])
    assert x0 == spec.points[0].x
