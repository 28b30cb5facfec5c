import math

import numpy as np
import pytest

from semitoric.errors import MissingNeighbor, SignError
from semitoric.lattice import Labelling, PointCloud
from semitoric.invariants import (
    FrJet,
    LabelledSpectrum,
    recover_S01,
    recover_fr_gradient,
    recover_sigma1,
    spacings_to_a1a2,
    twisting_and_privileged,
)


def grid_spectrum(k, alpha, beta, x_range=(-0.4, 0.4), y_range=(-0.4, 0.4)):
    """Labelled lattice with chart G0(xi) = (xi1, alpha xi1 + beta xi2):
    the inverse Jacobian has a1 = -alpha/beta, a2 = 1/beta."""
    h = 1.0 / k
    pts, lab = [], {}
    i = 0
    for j in range(int(x_range[0] / h), int(x_range[1] / h) + 1):
        for l in range(int(y_range[0] / h), int(y_range[1] / h) + 1):
            pts.append((h * j, alpha * h * j + beta * h * l))
            lab[i] = (j, l)
            i += 1
    cloud = PointCloud(k, np.array(pts))
    return LabelledSpectrum(cloud, Labelling(lab))


def test_identity_chart_a1_a2():
    ls = grid_spectrum(20, 0.0, 1.0)
    s = spacings_to_a1a2(ls, (0, 0))
    assert s.a1 == pytest.approx(0.0, abs=1e-12)
    assert s.a2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha,beta", [(0.7, 1.3), (-0.4, 0.8)])
def test_linear_chart_inverse_jacobian(alpha, beta):
    ls = grid_spectrum(50, alpha, beta)
    s = spacings_to_a1a2(ls, (2, -1))
    assert s.a2 == pytest.approx(1.0 / beta, rel=1e-9)
    assert s.a1 == pytest.approx(-alpha / beta, rel=1e-9)
    si = ls.a1a2_interpolated((2.5 / 50, 0.01))
    assert si.a2 == pytest.approx(1.0 / beta, rel=1e-8)
    assert si.a1 == pytest.approx(-alpha / beta, rel=1e-6, abs=1e-9)


def test_missing_neighbor():
    ls = grid_spectrum(10, 0.0, 1.0)
    top = max(l for _, l in ls.labelling.assignment.values())
    with pytest.raises(MissingNeighbor):
        spacings_to_a1a2(ls, (0, top))


# -- manufactured spectra with a prescribed normal form ----------------------

class ManufacturedFamily(dict):
    """Family stub whose spacing functionals follow the smooth-extension
    model exactly: a2 = (sigma2 - ln|w|/2pi) dy f_r, a1 = sigma1
    - arg(w)/2pi + (same) dx f_r, with w = x + i f_r(x, y)."""

    def __init__(self, jet: FrJet, s10, s01, ks):
        super().__init__()
        self.jet = jet
        self.s10, self.s01 = s10, s01
        for k in ks:
            self[k] = _ManufacturedSpectrum(self, k)


class _ManufacturedSpectrum:
    def __init__(self, fam, k):
        self.fam = fam
        self.k = k
        self.origin = (0.0, 0.0)

    def a1a2_interpolated(self, c):
        x, y = c
        jet = self.fam.jet
        fr = sum(v * x ** a * y ** b / (math.factorial(a) * math.factorial(b))
                 for (a, b), v in jet.derivs.items())
        dxf = sum(v * a * x ** (a - 1) * y ** b / (math.factorial(a) * math.factorial(b))
                  for (a, b), v in jet.derivs.items() if a >= 1)
        dyf = sum(v * b * x ** a * y ** (b - 1) / (math.factorial(a) * math.factorial(b))
                  for (a, b), v in jet.derivs.items() if b >= 1)
        w = x + 1j * fr
        tau2 = self.fam.s01 - np.log(abs(w)) / (2 * np.pi)
        tau1 = self.fam.s10 - np.angle(w) / (2 * np.pi)
        a2 = tau2 * dyf
        a1 = tau1 + tau2 * dxf
        # O(hbar) imperfection so the extrapolation has work to do
        a1 += 0.3 / self.k
        a2 -= 0.2 / self.k
        from semitoric.invariants.spacings import A1A2Sample
        return A1A2Sample(c, self.k, a1 / a2 if a2 else 0.0, a2, a1)


JET01 = FrJet({(1, 0): 0.0, (0, 1): 1.0})


def test_manufactured_gradient_01():
    fam = ManufacturedFamily(JET01, s10=0.25, s01=0.4, ks=[100, 200, 300, 400])
    dx, dy = recover_fr_gradient(fam, (0.0, 0.0), 0.01, mu=2.0)
    assert dx == pytest.approx(0.0, abs=2e-3)
    assert dy == pytest.approx(1.0, abs=5e-3)


def test_manufactured_gradient_generic():
    jet = FrJet({(1, 0): -0.5, (0, 1): 2.5})
    fam = ManufacturedFamily(jet, s10=0.1, s01=0.7, ks=[100, 200, 300, 400])
    dx, dy = recover_fr_gradient(fam, (0.0, 0.0), 0.01, mu=2.0)
    assert dx == pytest.approx(-0.5, abs=2e-2)
    assert dy == pytest.approx(2.5, abs=2e-2)


def test_manufactured_sigma1_and_s01():
    jet = FrJet({(1, 0): -0.5, (0, 1): 2.5})
    fam = ManufacturedFamily(jet, s10=0.3, s01=0.65, ks=[100, 200, 300, 400])
    s0 = jet.slope_s0
    sig, _ = recover_sigma1(fam, (0.0, 0.0), s0, [0.04, 0.03, 0.02, 0.01])
    assert sig == pytest.approx(0.3, abs=5e-3)
    s01, _ = recover_S01(fam, (0.0, 0.0), s0, 2.5, [0.04, 0.03, 0.02, 0.01])
    assert s01 == pytest.approx(0.65, abs=5e-3)


def test_gradient_sign_error():
    jet = FrJet({(1, 0): 0.0, (0, 1): 1.0})

    class FlippedSpectrum(_ManufacturedSpectrum):
        def a1a2_interpolated(self, c):
            s = super().a1a2_interpolated(c)
            from semitoric.invariants.spacings import A1A2Sample
            # wrong-sign logarithm: recovered dy f_r comes out negative
            a2 = 2 * self.fam.s01 - s.a2
            return A1A2Sample(s.c, s.k, s.a1 / a2, a2, s.a1)

    base = ManufacturedFamily(jet, s10=0.0, s01=0.5, ks=[100, 200])
    fam = {k: FlippedSpectrum(base, k) for k in (100, 200)}
    with pytest.raises(SignError):
        recover_fr_gradient(fam, (0.0, 0.0), 0.01, mu=2.0)


def test_frjet_orientation():
    with pytest.raises(SignError):
        FrJet({(0, 1): -1.0})


def test_twisting_floor_arithmetic():
    lab = Labelling({0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (2, 3)})
    p, priv = twisting_and_privileged(2.3, lab)
    assert p == 2
    assert priv.assignment[3] == (2, 3 - 2 * 2)
    p, priv = twisting_and_privileged(-0.4, lab)
    assert p == -1 and (-0.4 - p) == pytest.approx(0.6)
    p, same = twisting_and_privileged(0.1536, lab)
    assert p == 0 and same.assignment == lab.assignment


def test_relabelling_covariance_manufactured():
    # shifting l -> l + n*j multiplies the action by a unipotent and shifts
    # sigma1 by exactly -n
    jet = FrJet({(1, 0): 0.0, (0, 1): 1.0})
    base = ManufacturedFamily(jet, s10=0.4, s01=0.6, ks=[100, 200, 300])

    class Sheared(_ManufacturedSpectrum):
        def __init__(self, fam, k, n):
            super().__init__(fam, k)
            self.n = n

        def a1a2_interpolated(self, c):
            s = super().a1a2_interpolated(c)
            from semitoric.invariants.spacings import A1A2Sample
            a1 = s.a1 - self.n
            return A1A2Sample(s.c, s.k, a1 / s.a2, s.a2, a1)

    for n in (-2, -1, 1, 2):
        fam = {k: Sheared(base, k, n) for k in (100, 200, 300)}
        sig, _ = recover_sigma1(fam, (0.0, 0.0), 0.0, [0.02, 0.01])
        assert sig == pytest.approx(0.4 - n, abs=5e-3)


def test_taylor_invariant_bundle():
    from semitoric.invariants import TaylorInvariant

    t = TaylorInvariant(2.3, 2, {(0, 1): 0.5, (0, 0): 1.0})
    assert t.sigma1_privileged == pytest.approx(0.3)
    assert t.sigma2_0 == 0.5
    with pytest.raises(ValueError):
        TaylorInvariant(2.3, 1, {})
