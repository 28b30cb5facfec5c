"""Limit extraction helpers for the double limits hbar -> 0 then x -> 0.

The hbar limit at fixed probe is a least-squares fit in powers of hbar over
the k schedule; the x limit fits the known error shape A + B*x*ln(x) + C*x.
Every extraction reports an empirical convergence slope alongside the value.
"""

from __future__ import annotations

import numpy as np

from ..errors import IllConditioned
from ..config import TOL

__all__ = ["hbar_limit", "x_limit", "loglog_slope", "circle_distance"]


def hbar_limit(ks, vals, order: int = 2):
    """Fit vals ~ a0 + a1*hbar + ... + a_order*hbar^order; return (a0, info).

    info carries the fit residual and the empirical convergence order (the
    log-log regression slope of |val_k - limit| against k)."""
    ks = np.asarray(ks, dtype=float)
    vals = np.asarray(vals, dtype=float)
    order = min(order, len(ks) - 1)
    hb = 1.0 / ks
    A = np.vstack([hb ** i for i in range(order + 1)]).T
    coef, res, *_ = np.linalg.lstsq(A, vals, rcond=None)
    rms = float(np.sqrt(res[0] / len(ks))) if len(res) else 0.0
    slope = loglog_slope(ks, vals - coef[0])
    return float(coef[0]), {"coeffs": coef, "rms": rms, "slope": slope}


def x_limit(xs, vals, with_linear: bool = True):
    """Fit vals ~ a + b*x*ln(x) (+ c*x); return (a, info). Falls back to the
    smallest-x value when the schedule is too short to fit."""
    xs = np.asarray(xs, dtype=float)
    vals = np.asarray(vals, dtype=float)
    ncol = 3 if with_linear else 2
    if len(xs) < ncol:
        return float(vals[np.argmin(xs)]), {"fit": None}
    cols = [np.ones_like(xs), xs * np.log(xs)]
    if with_linear:
        cols.append(xs)
    A = np.vstack(cols).T
    cond = np.linalg.cond(A)
    if cond > TOL.max_condition:
        raise IllConditioned(f"x-limit design matrix condition {cond:.2e}")
    coef, *_ = np.linalg.lstsq(A, vals, rcond=None)
    return float(coef[0]), {"coeffs": coef, "cond": float(cond)}


def loglog_slope(ks, errs):
    """Regression slope of ln|err| against ln k (empirical convergence order)."""
    ks = np.asarray(ks, dtype=float)
    errs = np.abs(np.asarray(errs, dtype=float))
    keep = errs > 0
    if keep.sum() < 2:
        return -np.inf
    return float(np.polyfit(np.log(ks[keep]), np.log(errs[keep]), 1)[0])


def circle_distance(a: float, b: float) -> float:
    """Distance between a and b in R/Z."""
    return abs((a - b + 0.5) % 1.0 - 0.5)
