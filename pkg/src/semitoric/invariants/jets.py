"""First-order invariants: gradient of the normal-form function, the
rotation coefficient sigma1(0), the twisting number, and S_{0,1}.

All recoveries follow the same pattern: evaluate spacing functionals at
probes offset by (x, ...) from the focus-focus value, extrapolate hbar -> 0
over the k family, then send x -> 0 along the schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ActionDiscontinuity, SignError
from ..lattice import Labelling
from .extrap import hbar_limit, x_limit
from .spacings import LabelledSpectrum

__all__ = [
    "FrJet",
    "TaylorInvariant",
    "recover_fr_gradient",
    "recover_sigma1",
    "twisting_and_privileged",
    "recover_S01",
]


@dataclass
class FrJet:
    """Partial derivatives of the Eliasson function f_r at the critical value,
    keyed by multi-index (i, j) = (d/dx power, d/dy power), orders >= 1."""

    derivs: dict[tuple[int, int], float]

    def __post_init__(self):
        if self.dy <= 0:
            raise SignError(f"dy f_r(0) = {self.dy} <= 0 violates the orientation convention")

    @property
    def dx(self) -> float:
        return self.derivs.get((1, 0), 0.0)

    @property
    def dy(self) -> float:
        return self.derivs.get((0, 1), 0.0)

    @property
    def slope_s0(self) -> float:
        """Tangent slope of the radial curve: -dx f_r / dy f_r."""
        return -self.dx / self.dy

    def directional(self, mu: float, order: int) -> float:
        """d^order/dx^order of f_r(x, mu x) at 0, divided by order!."""
        return sum(
            self.derivs.get((a, order - a), 0.0) * mu ** (order - a)
            / (math.factorial(a) * math.factorial(order - a))
            for a in range(order + 1)
        )


@dataclass
class TaylorInvariant:
    """sigma1(0) with its twisting number and the Taylor coefficients,
    S_{0,0} being the height and S_{1,0} the privileged fractional part."""

    sigma1_0: float
    twisting_p: int
    s_coeffs: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.sigma1_0 - self.twisting_p < 1.0:
            raise ValueError("twisting_p must be the integer part of sigma1_0")

    @property
    def sigma1_privileged(self) -> float:
        return self.sigma1_0 - self.twisting_p

    @property
    def sigma2_0(self) -> float:
        return self.s_coeffs.get((0, 1), float("nan"))


def _origin_of(spec: LabelledSpectrum, fallback) -> tuple[float, float]:
    return spec.origin if getattr(spec, "origin", None) is not None else fallback


def recover_fr_gradient(family: dict[int, LabelledSpectrum], origin, x,
                        mu: float = 2.0, with_info: bool = False):
    """(dx f_r(0), dy f_r(0)) from probes at horizontal offsets x and mu*x.

    dx f_r(0) ~ 2*pi*(a1(x,0) - a1(mu*x,0)) / ln(mu), same for dy with a2;
    the error budget is O(x ln x) + O(hbar).  x may be a schedule, in which
    case the O(x ln x) bias is fitted out.  with_info appends a diagnostics
    dict carrying the empirical hbar-convergence slopes.
    """
    ks = sorted(family)
    xs = [float(x)] if np.isscalar(x) else sorted(x, reverse=True)
    scale = 2 * np.pi / np.log(mu)
    per_x_1, per_x_2 = [], []
    slopes = {}
    for xx in xs:
        d1, d2 = [], []
        for k in ks:
            x0, y0 = _origin_of(family[k], origin)
            near = family[k].a1a2_interpolated((x0 + xx, y0))
            far = family[k].a1a2_interpolated((x0 + mu * xx, y0))
            d1.append(near.a1 - far.a1)
            d2.append(near.a2 - far.a2)
        lim1, info1 = hbar_limit(ks, d1)
        lim2, info2 = hbar_limit(ks, d2)
        per_x_1.append(scale * lim1)
        per_x_2.append(scale * lim2)
        slopes[xx] = (info1["slope"], info2["slope"])
    dxfr = x_limit(xs, per_x_1)[0]
    dyfr = x_limit(xs, per_x_2)[0]
    if dyfr <= 0:
        raise SignError(f"recovered dy f_r(0) = {dyfr:.4f} <= 0")
    if with_info:
        return dxfr, dyfr, {"hbar_slopes": slopes, "per_x": dict(zip(xs, zip(per_x_1, per_x_2)))}
    return dxfr, dyfr


def _sigma_tilde(family, origin, s0, x):
    """hbar->0 limit of a1 + s0*a2 along the radial direction at offset x,
    with detection (and unipotent correction) of integer action jumps."""
    ks = sorted(family)
    vals = []
    for k in ks:
        x0, y0 = _origin_of(family[k], origin)
        s = family[k].a1a2_interpolated((x0 + x, y0 + s0 * x))
        vals.append(s.a1 + s0 * s.a2)
    vals = np.array(vals)
    med = np.median(vals)
    jumps = np.round(vals - med)
    if np.any(jumps != 0):
        vals = vals - jumps  # composition with (j,l) -> (j, l+n*j) on the odd k out
    lim, info = hbar_limit(ks, vals)
    return lim, info["slope"]


def recover_sigma1(family: dict[int, LabelledSpectrum], origin, s0: float,
                   x_schedule) -> tuple[float, dict]:
    """sigma1(0) for the action variable selected by the labelling.

    sigma_tilde_1(x) = (E_(j,l)-E_(j+1,l))/(E_(j,l+1)-E_(j,l))
                       + hbar*s0/(E_(j,l+1)-E_(j,l))  at c = (x, s0*x),
    extrapolated hbar -> 0 and then x -> 0.
    """
    xs = sorted(x_schedule, reverse=True)
    per_x = []
    slopes = []
    for x in xs:
        val, info = _sigma_tilde(family, origin, s0, x)
        per_x.append(val)
        slopes.append(info)
    per_x = np.array(per_x)
    # a jump of ~ an integer across the schedule means the action changed chart
    steps = np.diff(per_x)
    if np.any(np.abs(steps) > 0.5):
        raise ActionDiscontinuity(
            f"sigma1 probes jump by {steps[np.argmax(np.abs(steps))]:+.2f} across the x schedule"
        )
    val, info = x_limit(xs, per_x)
    info["per_x"] = dict(zip(xs, per_x))
    info["hbar_slopes"] = dict(zip(xs, slopes))
    return val, info


def twisting_and_privileged(sigma1_0: float, labelling: Labelling) -> tuple[int, Labelling]:
    """p = floor(sigma1(0)); the privileged relabelling is (j,l) -> (j, l - p*j)."""
    p = math.floor(sigma1_0)
    if p == 0:
        return 0, labelling
    priv = labelling.compose_affine([[1, 0], [-p, 1]], (0, 0))
    return p, priv


def recover_S01(family: dict[int, LabelledSpectrum], origin, s0: float,
                dy_fr: float, x_schedule) -> tuple[float, dict]:
    """S_{0,1} = lim lim ( hbar / (dy f_r(0) (E_(j,l+1)-E_(j,l))) + ln(x)/2pi )."""
    if dy_fr <= 0:
        raise SignError("dy f_r(0) must be positive")
    ks = sorted(family)
    xs = sorted(x_schedule, reverse=True)
    per_x = []
    slopes = {}
    for x in xs:
        vals = []
        for k in ks:
            x0, y0 = _origin_of(family[k], origin)
            s = family[k].a1a2_interpolated((x0 + x, y0 + s0 * x))
            vals.append(s.a2 / dy_fr + np.log(x) / (2 * np.pi))
        lim, inf = hbar_limit(ks, vals)
        per_x.append(lim)
        slopes[x] = inf["slope"]
    val, info = x_limit(xs, np.array(per_x))
    info["per_x"] = dict(zip(xs, per_x))
    info["hbar_slopes"] = slopes
    return val, info
