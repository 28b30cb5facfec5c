"""Counting-based invariants: height, Duistermaat-Heckman profile, and
location of the focus-focus critical value.

Weyl-type counting in vertical strips of width ~ hbar^delta recovers the
reduced symplectic volume: with N_hbar(x, delta, c) the number of joint
eigenvalues in [x - c hbar^delta, x + c hbar^delta] x R,

    (hbar^(2-delta) / 2c) N_hbar(x, delta, c)  ->  rho_J(x),

the Duistermaat-Heckman density.  Counting only below the focus-focus
ordinate and centering at its abscissa gives the height invariant S_{0,0},
the sub-critical reduced volume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NoPeak, WindowTooNarrow

__all__ = [
    "CloudCounter",
    "DHProfile",
    "height_invariant",
    "dh_profile",
    "detect_kinks",
    "locate_focus_focus",
]


class CloudCounter:
    """Counter backed by explicit point arrays {k: (n,2) array}."""

    def __init__(self, clouds: dict[int, np.ndarray]):
        self.clouds = {k: np.asarray(p, dtype=float) for k, p in clouds.items()}
        self.ks = sorted(clouds)

    def count(self, k, xlo, xhi, ylo=-np.inf, yhi=np.inf) -> int:
        p = self.clouds[k]
        return int(np.sum((p[:, 0] >= xlo) & (p[:, 0] <= xhi)
                          & (p[:, 1] >= ylo) & (p[:, 1] <= yhi)))


@dataclass
class DHProfile:
    samples: np.ndarray          # (n, 2): abscissa, scaled count
    delta: float
    c_width: float
    k: int

    def value(self, x: float) -> float:
        return float(np.interp(x, self.samples[:, 0], self.samples[:, 1]))


def height_invariant(counter, x0: float, y0: float, delta: float = 0.4,
                     c_width: float = 1.0, ks=None) -> tuple[float, dict]:
    """S_{0,0} = lim (hbar^(2-delta) / 2c) #{spectrum in strip, y <= y0},
    extrapolated over the k family with the known hbar^delta error shape."""
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    ks = list(counter.ks if ks is None else ks)
    raw = []
    for k in ks:
        hb = 1.0 / k
        w = c_width * hb ** delta
        n = counter.count(k, x0 - w, x0 + w, -np.inf, y0)
        if n < 10:
            raise WindowTooNarrow(f"k={k}: strip contains only {n} points")
        raw.append(hb ** (2 - delta) / (2 * c_width) * n)
    hb = 1.0 / np.asarray(ks, dtype=float)
    A = np.vstack([np.ones_like(hb), hb ** delta]).T
    coef, *_ = np.linalg.lstsq(A, np.asarray(raw), rcond=None)
    rate = _fit_rate(ks, np.abs(np.asarray(raw) - coef[0]))
    return float(coef[0]), {"raw": dict(zip(ks, raw)), "rate": rate}


def _fit_rate(ks, errs):
    keep = np.asarray(errs) > 0
    if keep.sum() < 2:
        return float("nan")
    return float(-np.polyfit(np.log(np.asarray(ks, float)[keep]),
                             np.log(np.asarray(errs)[keep]), 1)[0])


def dh_profile(counter, k: int, delta: float, c_width: float, x_grid) -> DHProfile:
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    hb = 1.0 / k
    w = c_width * hb ** delta
    vals = [hb ** (2 - delta) / (2 * c_width) * counter.count(k, x - w, x + w)
            for x in x_grid]
    return DHProfile(np.column_stack([x_grid, vals]), delta, c_width, k)


def detect_kinks(profile: DHProfile, half_window: float = 0.35,
                 min_jump: float = 0.3) -> list[float]:
    """Abscissae where the piecewise-linear profile changes slope: two-sided
    line fits, local maxima of the slope jump above min_jump."""
    xg, rho = profile.samples[:, 0], profile.samples[:, 1]
    jumps = []
    for x in xg:
        left = (xg >= x - half_window) & (xg < x)
        right = (xg > x) & (xg <= x + half_window)
        if left.sum() < 3 or right.sum() < 3:
            jumps.append(0.0)
            continue
        sl = np.polyfit(xg[left], rho[left], 1)[0]
        sr = np.polyfit(xg[right], rho[right], 1)[0]
        jumps.append(abs(sr - sl))
    jumps = np.asarray(jumps)
    hits = [i for i in range(1, len(xg) - 1)
            if jumps[i] > min_jump and jumps[i] >= jumps[i - 1] and jumps[i] >= jumps[i + 1]]
    merged: list[list[float]] = []
    step = xg[1] - xg[0] if len(xg) > 1 else 1.0
    for i in hits:
        if merged and abs(xg[i] - merged[-1][-1]) < 2.5 * step:
            merged[-1].append(xg[i])
        else:
            merged.append([xg[i]])
    return [float(np.mean(c)) for c in merged]


def locate_focus_focus(ladder_provider, k: int, x_candidates,
                       peak_factor: float = 1.8,
                       refine_steps: int = 4) -> list[tuple[float, float]]:
    """Classify candidate abscissae by the log-divergence of inverse level
    spacings in the vertical line above them.

    ladder_provider(k, x) must return (x_actual, ascending eigenvalue array)
    for the spectral column nearest x.  A focus-focus value shows an interior
    peak of hbar/spacing growing like -C ln|y - y0|; elliptic candidates do
    not.  Kink candidates are only accurate to the profile resolution, so
    the refine_steps neighboring columns are scanned for the strongest peak.
    Returns the located values; raises NoPeak if none qualifies.
    """
    hb = 1.0 / k
    found = []
    for xc in x_candidates:
        best = None
        # nearest columns first so ties keep the candidate abscissa
        for step in sorted(range(-refine_steps, refine_steps + 1), key=abs):
            x_act, ev = ladder_provider(k, xc + step * hb)
            if len(ev) < 8:
                continue
            mids = 0.5 * (ev[1:] + ev[:-1])
            inv = hb / np.diff(ev)
            i = int(np.argmax(inv))
            span = ev[-1] - ev[0]
            if not (ev[0] + 0.05 * span < mids[i] < ev[-1] - 0.05 * span):
                continue
            score = inv[i] / np.median(inv)
            if score < peak_factor:
                continue
            if best is None or score > best[0]:
                best = (score, x_act, _refine_peak(mids, inv, i))
        if best is not None:
            found.append((float(best[1]), float(best[2])))
    if not found:
        raise NoPeak("no interior spacing peak among the candidates")
    return found


def _refine_peak(mids, inv, i):
    """Least-squares fit of inv ~ -C ln|y - y0| + D, scanning y0 inside the
    minimal gap around the raw peak."""
    lo, hi = max(0, i - 8), min(len(mids), i + 9)
    y, v = mids[lo:hi], inv[lo:hi]
    gap_lo = mids[i - 1] if i - 1 >= 0 else mids[i]
    gap_hi = mids[i + 1] if i + 1 < len(mids) else mids[i]
    best = (np.inf, mids[i])
    for y0 in np.linspace(gap_lo, gap_hi, 41):
        r = np.abs(y - y0)
        keep = r > 1e-12
        if keep.sum() < 4:
            continue
        A = np.vstack([np.log(r[keep]), np.ones(int(keep.sum()))]).T
        coef, res, *_ = np.linalg.lstsq(A, v[keep], rcond=None)
        if coef[0] < 0 and len(res) and res[0] < best[0]:
            best = (float(res[0]), float(y0))
    return best[1]
