"""Higher-order Taylor coefficients from the log-expansion of g_mu.

Along the ray c = (x, mu*x) off the critical value, the combination

    g_mu(x) = a1(x, mu*x) + mu * a2(x, mu*x)

expands as sum_n x^n (c_n(mu) + d_n(mu) ln x).  The log coefficients carry
the jet of the normal-form function f_r,

    d_n(mu) = -(1/(2 pi n!)) sum_l binom(n+1, l) mu^(n+1-l)
              d_x^l d_y^(n+1-l) f_r(0),

and, once the jet and lower-order coefficients are known, the power
coefficients determine the order-(n+1) Taylor invariants through

    c_n(mu) - c~_n(mu) = (n+1) sum_l A^(n+1-l) S_{l, n+1-l},
    A = d_x f_r(0) + mu d_y f_r(0),

a scaled Vandermonde system in A.  The known part c~_n(mu) is assembled
here by explicit series bookkeeping of

    a2 = (sigma2 - ln(x)/2pi - ln(1+phi^2)/4pi) * d_y f_r,
    a1 = sigma1 - arctan(phi)/2pi + (same bracket) * d_x f_r,

with phi = f_r(x, mu x)/x and sigma1, sigma2 the smooth extensions whose
values are read through the composite (x, y) -> (x, f_r(x, y)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import TOL
from ..errors import DuplicateMu, IllConditioned
from .extrap import hbar_limit
from .jets import FrJet
from .spacings import LabelledSpectrum

__all__ = [
    "GMuExpansion",
    "g_mu_sample",
    "expansion_along_ray",
    "d_n_from_jet",
    "fit_log_expansion",
    "solve_jet_order",
    "solve_taylor_order",
    "cross_derivative_shortcut",
    "s11_shortcut",
    "mixed_dxdy_from_d1",
    "s11_from_c1",
]


# -- truncated power series helpers (ascending coefficients, fixed length) --

def _pmul(a, b, n):
    return np.convolve(a, b)[:n]

def _ppow(a, p, n):
    out = np.zeros(n)
    out[0] = 1.0
    for _ in range(p):
        out = _pmul(out, a, n)
    return out

def _plog1p(w, n):
    """ln(1 + w) for a series with w[0] = 0."""
    out = np.zeros(n)
    term = np.array(w, dtype=float)
    for m in range(1, n):
        out += ((-1) ** (m + 1) / m) * term
        term = _pmul(term, w, n)
    return out

def _pinv1p(w, n):
    """1/(1 + w) for a series with w[0] = 0."""
    out = np.zeros(n)
    term = np.zeros(n)
    term[0] = 1.0
    for _ in range(n):
        out += term
        term = -_pmul(term, w, n)
    return out


def _partial_series(jet: FrJet, mu: float, dx_extra: int, dy_extra: int, n: int):
    """Series of (d_x^dx_extra d_y^dy_extra f_r)(x, mu x)."""
    out = np.zeros(n)
    for (a, b), v in jet.derivs.items():
        aa, bb = a - dx_extra, b - dy_extra
        if aa < 0 or bb < 0 or aa + bb >= n:
            continue
        out[aa + bb] += v * mu ** bb / (math.factorial(aa) * math.factorial(bb))
    return out


def expansion_along_ray(jet: FrJet, s_coeffs: dict, mu: float, n_orders: int):
    """(c_0..c_{n-1}, d_0..d_{n-1}) of g_mu assembled from a jet and Taylor
    coefficients.  Coefficients of total order m enter c_n only for m <= n+1,
    so passing S only up to order n yields the known part c~_n in slot n.
    """
    n = n_orders
    ndeep = n + 2
    f = _partial_series(jet, mu, 0, 0, ndeep)          # f_r(x, mu x), f[0] = 0
    phi = np.zeros(ndeep)
    phi[:-1] = f[1:]                                   # f/x
    dxf = _partial_series(jet, mu, 1, 0, ndeep)
    dyf = _partial_series(jet, mu, 0, 1, ndeep)
    sig1 = np.zeros(ndeep)
    sig2 = np.zeros(ndeep)
    for (p, q), s in s_coeffs.items():
        if p >= 1:
            t = _pmul(_monomial(p - 1, ndeep), _ppow(f, q, ndeep), ndeep)
            sig1 += p * s * t
        if q >= 1:
            t = _pmul(_monomial(p, ndeep), _ppow(f, q - 1, ndeep), ndeep)
            sig2 += q * s * t
    A = phi[0]
    # ln(1 + phi^2) = ln(1+A^2) + log1p((phi^2 - A^2)/(1+A^2))
    phi2 = _pmul(phi, phi, ndeep)
    w = phi2.copy()
    w[0] = 0.0
    w = w / (1.0 + A * A)
    log_term = _plog1p(w, ndeep)
    log_term[0] = np.log(1.0 + A * A)
    # arctan(phi) = arctan(A) + integral of phi' / (1 + phi^2)
    dphi = np.array([(m + 1) * phi[m + 1] for m in range(ndeep - 1)] + [0.0])
    integrand = _pmul(dphi, _pinv1p(w, ndeep), ndeep) / (1.0 + A * A)
    atan = np.zeros(ndeep)
    atan[0] = np.arctan(A)
    atan[1:] = integrand[:-1] / np.arange(1, ndeep)
    tau2_poly = sig2 - log_term / (4 * np.pi)
    direction = dxf + mu * dyf
    P = sig1 - atan / (2 * np.pi) + _pmul(tau2_poly, direction, ndeep)
    Q = -direction / (2 * np.pi)
    return P[:n], Q[:n]


def _monomial(p, n):
    out = np.zeros(n)
    if p < n:
        out[p] = 1.0
    return out


def d_n_from_jet(jet: FrJet, mu: float, n: int) -> float:
    """Closed form of the x^n ln x coefficient of g_mu."""
    total = sum(
        math.comb(n + 1, l) * mu ** (n + 1 - l) * jet.derivs.get((l, n + 1 - l), 0.0)
        for l in range(n + 2)
    )
    return -total / (2 * np.pi * math.factorial(n))


# -- sampling and fitting ---------------------------------------------------

@dataclass
class GMuExpansion:
    mu: float
    x_samples: list                        # [(x, g value after hbar limit)]
    c: list = field(default_factory=list)  # recovered c_0, c_1, ...
    d: list = field(default_factory=list)


def g_mu_sample(family: dict[int, LabelledSpectrum], origin, mu: float,
                x_schedule) -> GMuExpansion:
    """g_mu(x) = a1(x, mu x) + mu a2(x, mu x), hbar -> 0 per x."""
    ks = sorted(family)
    samples = []
    for x in sorted(x_schedule, reverse=True):
        vals = []
        for k in ks:
            spec = family[k]
            x0, y0 = spec.origin if getattr(spec, "origin", None) is not None else origin
            s = spec.a1a2_interpolated((x0 + x, y0 + mu * x))
            vals.append(s.a1 + mu * s.a2)
        samples.append((x, hbar_limit(ks, vals)[0]))
    return GMuExpansion(mu, samples)


def fit_log_expansion(exp: GMuExpansion, n: int, c_known, d_known):
    """Recover (c_n, d_n) given all lower coefficients.

    d_n = lim (g - sum_{l<n} x^l (c_l + d_l ln x)) / (x^n ln x), then c_n;
    realized as one weighted least-squares fit on the residual with basis
    {ln x, 1, x ln x, x} (the two extra columns absorb the next order).
    """
    xs = np.array([x for x, _ in exp.x_samples])
    g = np.array([v for _, v in exp.x_samples])
    resid = g.copy()
    for l in range(n):
        resid -= xs ** l * (c_known[l] + d_known[l] * np.log(xs))
    resid /= xs ** n
    cols = [np.log(xs), np.ones_like(xs)]
    if len(xs) >= 5:
        cols += [xs * np.log(xs), xs]
    A = np.vstack(cols).T
    W = np.diag(xs ** n)      # downweight small x where hbar residue blows up
    cond = np.linalg.cond(W @ A)
    if cond > TOL.max_condition:
        raise IllConditioned(f"log-basis fit condition {cond:.2e}")
    coef, *_ = np.linalg.lstsq(W @ A, W @ resid, rcond=None)
    d_n, c_n = float(coef[0]), float(coef[1])
    return c_n, d_n, {"cond": float(cond)}


def solve_jet_order(n: int, mus, d_values) -> dict[tuple[int, int], float]:
    """Order-(n+1) derivatives of f_r from d_n at n+2 distinct mu values:
    invert (binom(n+1, j) mu_i^(n+1-j)) v = -2 pi n! d."""
    mus = np.asarray(mus, dtype=float)
    if len(set(mus.tolist())) != len(mus):
        raise DuplicateMu("mu values must be pairwise distinct")
    if len(mus) != n + 2:
        raise ValueError(f"need exactly {n + 2} mu values for order {n}")
    D = np.array([[math.comb(n + 1, j) * m ** (n + 1 - j) for j in range(n + 2)]
                  for m in mus])
    cond = np.linalg.cond(D)
    if cond > TOL.max_condition:
        raise IllConditioned(f"jet system condition {cond:.2e}")
    rhs = -2 * np.pi * math.factorial(n) * np.asarray(d_values, dtype=float)
    v = np.linalg.solve(D, rhs)
    return {(j, n + 1 - j): float(v[j]) for j in range(n + 2)}


def solve_taylor_order(n: int, mus, c_values, jet: FrJet,
                       s_known: dict) -> dict[tuple[int, int], float]:
    """Order-(n+1) Taylor coefficients from c_n at n+2 distinct mu values.

    The unknowns enter linearly with matrix (n+1) * A_i^(n+1-l), a scaled
    Vandermonde in A_i = dx f_r(0) + mu_i dy f_r(0) with determinant
    (n+1)^(n+2) * (dy f_r(0))^((n+1)(n+2)/2) * prod_(i>j) (mu_i - mu_j),
    used as the conditioning check.
    """
    mus = np.asarray(mus, dtype=float)
    if len(set(mus.tolist())) != len(mus):
        raise DuplicateMu("mu values must be pairwise distinct")
    if len(mus) != n + 2:
        raise ValueError(f"need exactly {n + 2} mu values for order {n}")
    Avals = jet.dx + mus * jet.dy
    M = np.array([[(n + 1) * a ** (n + 1 - l) for l in range(n + 2)] for a in Avals])
    cond = np.linalg.cond(M)
    if cond > TOL.max_condition:
        raise IllConditioned(f"Taylor system condition {cond:.2e}")
    rhs = []
    for m, c in zip(mus, c_values):
        c_tilde = expansion_along_ray(jet, s_known, m, n + 1)[0][n]
        rhs.append(c - c_tilde)
    v = np.linalg.solve(M, np.asarray(rhs))
    return {(l, n + 1 - l): float(v[l]) for l in range(n + 2)}


def taylor_system_determinant(n: int, mus, dy_fr: float) -> float:
    """Closed form of det of the solve_taylor_order matrix."""
    mus = np.asarray(mus, dtype=float)
    vdm = 1.0
    for i in range(len(mus)):
        for j in range(i):
            vdm *= mus[i] - mus[j]
    return (n + 1) ** (n + 2) * dy_fr ** ((n + 1) * (n + 2) // 2) * vdm


# -- pure-mixed-jet route (exact for the spin-oscillator) -------------------

def mixed_dxdy_from_d1(d1: float, mu: float) -> float:
    """dxdy f_r(0) from a fitted d_1 when dx^2 f_r(0) = dy^2 f_r(0) = 0:
    d_1 = -mu dxdy f_r(0) / pi."""
    return -np.pi * d1 / mu


def s11_from_c1(c1: float, mu: float, jet1: FrJet, s01: float,
                dxdy: float) -> float:
    """S_{1,1} from a fitted c_1 when S_{2,0} = S_{0,2} = 0 and the quadratic
    jet is purely mixed: c_1 - c~_1 = 2 A S_{1,1}, A = dx f_r + mu dy f_r,
    c~_1 = mu dxdy f_r(0) (2 S_{0,1} - (1 + ln(1 + A^2)) / 2 pi)."""
    A = jet1.dx + mu * jet1.dy
    c1_tilde = mu * dxdy * (2 * s01 - (1 + np.log(1 + A * A)) / (2 * np.pi))
    return (c1 - c1_tilde) / (2 * A)


# -- spin-oscillator style shortcuts (pure mixed quadratic jet) -------------

def cross_derivative_shortcut(exp: GMuExpansion, s10: float, s01: float,
                              jet1: FrJet) -> tuple[float, dict]:
    """dxdy f_r(0) when the quadratic jet is known to be purely mixed
    (dx^2 f_r(0) = dy^2 f_r(0) = 0): then d_1 = -mu dxdy f_r(0) / pi and

        dxdy f_r(0) = lim lim -pi (g - c_0 - d_0 ln x) / (mu x ln x),

    with (c_0, d_0) assembled from the linear invariants. Convergence is
    O(1/ln x), so expect slow decay in x.
    """
    mu = exp.mu
    A = jet1.dx + mu * jet1.dy
    c0 = s10 - np.arctan(A) / (2 * np.pi) + (s01 - np.log(1 + A * A) / (4 * np.pi)) * A
    d0 = -A / (2 * np.pi)
    xs = np.array([x for x, _ in exp.x_samples])
    g = np.array([v for _, v in exp.x_samples])
    per_x = -np.pi * (g - c0 - d0 * np.log(xs)) / (mu * xs * np.log(xs))
    # residual is c_1-driven: per_x = e12 + const/ln(x); extrapolate in 1/ln x
    Amat = np.vstack([np.ones_like(xs), 1.0 / np.log(xs)]).T
    coef, *_ = np.linalg.lstsq(Amat, per_x, rcond=None)
    return float(coef[0]), {"per_x": dict(zip(xs, per_x)), "c0": float(c0)}


def s11_shortcut(exp: GMuExpansion, s10: float, s01: float, jet1: FrJet,
                 dxdy: float) -> tuple[float, dict]:
    """S_{1,1} when S_{2,0} = S_{0,2} = 0 and the quadratic jet is purely
    mixed: c_1 - c~_1 = 2 A S_{1,1} with A = dx f_r + mu dy f_r and
    c~_1 = mu dxdy f_r(0) (2 S_{0,1} - (1 + ln(1+A^2)) / 2 pi)."""
    mu = exp.mu
    A = jet1.dx + mu * jet1.dy
    c0 = s10 - np.arctan(A) / (2 * np.pi) + (s01 - np.log(1 + A * A) / (4 * np.pi)) * A
    d0 = -A / (2 * np.pi)
    d1 = -mu * dxdy / np.pi
    xs = np.array([x for x, _ in exp.x_samples])
    g = np.array([v for _, v in exp.x_samples])
    c1_per_x = (g - c0 - d0 * np.log(xs) - d1 * xs * np.log(xs)) / xs
    Amat = np.vstack([np.ones_like(xs), xs * np.log(xs)]).T
    coef, *_ = np.linalg.lstsq(Amat, c1_per_x, rcond=None)
    c1 = float(coef[0])
    b = mu * dxdy
    c1_tilde = b * (2 * s01 - (1 + np.log(1 + A * A)) / (2 * np.pi))
    s11 = (c1 - c1_tilde) / (2 * A)
    return s11, {"c1": c1, "c1_tilde": float(c1_tilde)}
