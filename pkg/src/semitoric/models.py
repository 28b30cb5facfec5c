"""The two quantum semitoric model systems and their joint spectra.

Both systems carry an S^1 symmetry: the first operator J is diagonal in
the natural product basis and constant on finite chains that the second
operator H preserves, so H block-diagonalizes into real symmetric
tridiagonal matrices indexed by a conserved integer.

Spin-oscillator on R^2 x S^2 (hbar = 1/k):
    J = (u^2+v^2)/2 + z,   H = (ux + vy)/2.
Basis f_n ⊗ e_l, with f_n the normalized Bargmann monomials
(w f_n = sqrt((n+1)/k) f_{n+1}, k^{-1} d/dw f_n = sqrt(n/k) f_{n-1})
and e_l the sphere basis of dimension 2k.  J eigenvalue on f_n ⊗ e_l is
1 + (n-l)/k, so blocks are chains of constant m = n - l.

Coupled angular momenta on S^2 x S^2 (r2 > r1 > 0 half-integers):
    J = r1 z1 + r2 z2,   H = (1-t) z1 + t (x1 x2 + y1 y2 + z1 z2).
Product basis e_{l1} ⊗ e_{l2} of dimension N1*N2, Ni = 2*k*ri.  J is
quantized as r1*Z⊗I + r2*I⊗Z, which makes its eigenvalue
r1 + r2 - (1+s)/k a function of s = l1 + l2 alone and the pair commute
exactly (the coupling only moves (l1,l2) -> (l1±1, l2∓1)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import CommutatorViolation, DimensionMismatch, EmptyWindow
from .geometry import Rect
from .tridiag import eigs_in_window, eigs_sym_tridiagonal

SPIN_OSCILLATOR = "spin-oscillator"
COUPLED_ANGULAR_MOMENTA = "coupled-angular-momenta"

__all__ = [
    "SPIN_OSCILLATOR",
    "COUPLED_ANGULAR_MOMENTA",
    "ModelSpec",
    "TridiagonalBlock",
    "JointPoint",
    "JointSpectrum",
    "build_blocks",
    "joint_spectrum",
    "dense_oracle_spectrum",
    "spectrum_to_csv",
    "spectrum_to_json",
]


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    r1: float = 1.0
    r2: float = 2.5
    t: float = 0.5

    def __post_init__(self):
        if self.kind not in (SPIN_OSCILLATOR, COUPLED_ANGULAR_MOMENTA):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == COUPLED_ANGULAR_MOMENTA:
            if not (self.r2 > self.r1 > 0):
                raise ValueError("coupled angular momenta require r2 > r1 > 0")
            if not 0.0 <= self.t <= 1.0:
                raise ValueError("coupling parameter t must lie in [0, 1]")

    def check_dimensions(self, k: int) -> None:
        if k < 1:
            raise DimensionMismatch("k must be a positive integer")
        if self.kind == COUPLED_ANGULAR_MOMENTA:
            for r in (self.r1, self.r2):
                if abs(2 * k * r - round(2 * k * r)) > 1e-9:
                    raise DimensionMismatch(f"2*k*r = {2 * k * r} is not an integer")

    def focus_focus_value(self) -> tuple[float, float]:
        """Known critical value, for reference output only (the recovery
        pipeline estimates its own)."""
        if self.kind == SPIN_OSCILLATOR:
            return (1.0, 0.0)
        return (self.r1 - self.r2, 0.0)


@dataclass(frozen=True)
class TridiagonalBlock:
    block_id: int
    j_value: float
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag length mismatch")
        if not (np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.offdiag))):
            raise ValueError("non-finite block entries")

    @property
    def size(self) -> int:
        return len(self.diag)

    def eigenvalues(self, y_window=None) -> np.ndarray:
        if y_window is None:
            return eigs_sym_tridiagonal(self.diag, self.offdiag)
        return eigs_in_window(self.diag, self.offdiag, y_window[0], y_window[1])


@dataclass(frozen=True)
class JointPoint:
    x: float
    y: float
    block_id: int
    index_in_block: int


@dataclass(frozen=True)
class JointSpectrum:
    k: int
    points: tuple
    window: Rect | None = None

    def as_array(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.points], dtype=float).reshape(-1, 2)

    def columns(self) -> dict[int, np.ndarray]:
        """block_id -> ascending eigenvalue array (one exact-x column each)."""
        cols: dict[int, list] = {}
        for p in self.points:
            cols.setdefault(p.block_id, []).append(p.y)
        return {b: np.array(sorted(ys)) for b, ys in cols.items()}

    def __len__(self) -> int:
        return len(self.points)


# ---------------------------------------------------------------------------
# block construction

def _spin_block(k: int, m: int) -> TridiagonalBlock:
    lmin = max(0, -m)
    ls = np.arange(lmin, 2 * k)
    diag = np.zeros(len(ls))
    off = np.sqrt((ls[:-1] + m + 1) / k) * np.sqrt(
        (ls[:-1] + 1) * (2 * k - 1 - ls[:-1])
    ) / (2 * np.sqrt(2) * k)
    return TridiagonalBlock(m, 1.0 + m / k, diag, off)


def _coupled_block(model: ModelSpec, k: int, s: int) -> TridiagonalBlock:
    n1 = round(2 * k * model.r1)
    n2 = round(2 * k * model.r2)
    l1 = np.arange(max(0, s - (n2 - 1)), min(n1 - 1, s) + 1)
    l2 = s - l1
    t = model.t
    pref = t * (1 + n1) * (1 + n2) / (n1 * n2)
    diag = ((1 - t) * (1 + n1) / n1) * (n1 - 1 - 2 * l1) / n1 \
        + pref * (n1 - 1 - 2 * l1) * (n2 - 1 - 2 * l2) / (n1 * n2)
    off = pref * 2.0 / (n1 * n2) * np.sqrt(
        (l1[:-1] + 1) * (n1 - 1 - l1[:-1]) * l2[:-1] * (n2 - l2[:-1])
    )
    return TridiagonalBlock(s, model.r1 + model.r2 - (1 + s) / k, diag, off)


def _block_id_range(model: ModelSpec, k: int, j_window) -> range:
    xlo, xhi = j_window
    if xhi < xlo:
        raise EmptyWindow("empty j_window")
    if model.kind == SPIN_OSCILLATOR:
        lo = max(int(np.ceil((xlo - 1) * k - 1e-9)), -(2 * k - 1))
        hi = int(np.floor((xhi - 1) * k + 1e-9))
        return range(lo, hi + 1)
    smax = round(2 * k * model.r1) + round(2 * k * model.r2) - 2
    rsum = model.r1 + model.r2
    lo = max(int(np.ceil((rsum - xhi) * k - 1 - 1e-9)), 0)
    hi = min(int(np.floor((rsum - xlo) * k - 1 + 1e-9)), smax)
    return range(lo, hi + 1)


def build_blocks(model: ModelSpec, k: int, j_window) -> list[TridiagonalBlock]:
    """Every J-eigenspace block whose j_value lies in [j_window[0], j_window[1]]."""
    model.check_dimensions(k)
    ids = _block_id_range(model, k, j_window)
    if len(ids) == 0:
        raise EmptyWindow(f"no block intersects j_window {j_window}")
    if model.kind == SPIN_OSCILLATOR:
        blocks = [_spin_block(k, m) for m in ids]
    else:
        blocks = [_coupled_block(model, k, s) for s in ids]
        _check_block_j_consistency(model, k, blocks)
    return blocks


def _check_block_j_consistency(model: ModelSpec, k: int, blocks) -> None:
    """All basis states of a block must share one J eigenvalue (to 1e-12 rel).

    Recomputed from the per-factor Z eigenvalues, not from the block label.
    """
    n1 = round(2 * k * model.r1)
    n2 = round(2 * k * model.r2)
    scale = model.r1 + model.r2
    for b in blocks:
        s = b.block_id
        l1 = np.arange(max(0, s - (n2 - 1)), min(n1 - 1, s) + 1)
        jv = model.r1 * (n1 - 1 - 2 * l1) / n1 + model.r2 * (n2 - 1 - 2 * (s - l1)) / n2
        if np.max(np.abs(jv - b.j_value)) > TOL.block_j_rel * scale:
            raise CommutatorViolation(
                f"block {s}: J eigenvalue spread {np.max(np.abs(jv - b.j_value)):.3e}"
            )


def joint_spectrum(model: ModelSpec, k: int, window: Rect | None = None) -> JointSpectrum:
    """All joint eigenvalues (x, y) with x in the window's x-range; y filtered
    to the window's y-range but indexed by position in the full block spectrum."""
    if window is None:
        if model.kind == SPIN_OSCILLATOR:
            raise EmptyWindow("spin-oscillator needs a finite window (J unbounded)")
        rsum = model.r1 + model.r2
        window = Rect(-rsum, rsum, -2.0, 2.0)
    blocks = build_blocks(model, k, (window.xmin, window.xmax))
    pts = []
    for b in blocks:
        ev = b.eigenvalues()
        if np.any(np.diff(ev) <= 0):
            raise CommutatorViolation(f"non-simple spectrum in block {b.block_id}")
        for i, y in enumerate(ev):
            if window.ymin <= y <= window.ymax:
                pts.append(JointPoint(b.j_value, float(y), b.block_id, i))
    pts.sort(key=lambda p: (p.block_id, p.index_in_block))
    return JointSpectrum(k, tuple(pts), window)


# ---------------------------------------------------------------------------
# dense verification oracle

def _spin_dense(k: int, n_max: int):
    nb, ns = n_max + 1, 2 * k
    W = np.zeros((nb, nb))
    D = np.zeros((nb, nb))
    for n in range(nb - 1):
        W[n + 1, n] = np.sqrt((n + 1) / k)
        D[n, n + 1] = np.sqrt((n + 1) / k)
    Nop = np.diag([(n + 0.5) / k for n in range(nb)])
    X = np.zeros((ns, ns))
    Y = np.zeros((ns, ns), dtype=complex)
    Z = np.zeros((ns, ns))
    for l in range(ns):
        Z[l, l] = (2 * (k - l) - 1) / (2 * k)
        if l >= 1:
            X[l - 1, l] += np.sqrt(l * (2 * k - l)) / (2 * k)
            Y[l - 1, l] += 1j * np.sqrt(l * (2 * k - l)) / (2 * k)
        if l <= ns - 2:
            X[l + 1, l] += np.sqrt((l + 1) * (2 * k - 1 - l)) / (2 * k)
            Y[l + 1, l] += -1j * np.sqrt((l + 1) * (2 * k - 1 - l)) / (2 * k)
    J = np.kron(Nop, np.eye(ns)) + np.kron(np.eye(nb), Z)
    H = (np.kron(W + D, X) + (1j * np.kron(W - D, Y)).real) / (2 * np.sqrt(2))
    interior = np.array([n <= n_max - 2 for n in range(nb) for _ in range(ns)])
    return J, H, interior


def _sphere_ops_dense(n: int):
    X = np.zeros((n, n))
    Y = np.zeros((n, n), dtype=complex)
    Z = np.zeros((n, n))
    for l in range(n):
        Z[l, l] = (n - 1 - 2 * l) / n
        if l >= 1:
            X[l - 1, l] += np.sqrt(l * (n - l)) / n
            Y[l - 1, l] += 1j * np.sqrt(l * (n - l)) / n
        if l <= n - 2:
            X[l + 1, l] += np.sqrt((l + 1) * (n - 1 - l)) / n
            Y[l + 1, l] += -1j * np.sqrt((l + 1) * (n - 1 - l)) / n
    return X, Y, Z


def _coupled_dense(model: ModelSpec, k: int):
    n1 = round(2 * k * model.r1)
    n2 = round(2 * k * model.r2)
    X1, Y1, Z1 = _sphere_ops_dense(n1)
    X2, Y2, Z2 = _sphere_ops_dense(n2)
    I1, I2 = np.eye(n1), np.eye(n2)
    t = model.t
    J = model.r1 * np.kron(Z1, I2) + model.r2 * np.kron(I1, Z2)
    H = ((1 - t) * (1 + n1) / n1) * np.kron(Z1, I2) + t * (1 + n1) * (1 + n2) / (n1 * n2) * (
        np.kron(X1, X2) + np.kron(Y1, Y2).real + np.kron(Z1, Z2)
    )
    interior = np.ones(n1 * n2, dtype=bool)
    return J, H, interior


def dense_oracle_spectrum(model: ModelSpec, k: int, n_max: int = 60) -> JointSpectrum:
    """Independent route: dense J and H on the (truncated) product basis,
    commutator check, then H diagonalized on each numerically-clustered
    J eigenspace. Intended for small k only."""
    model.check_dimensions(k)
    if model.kind == SPIN_OSCILLATOR:
        J, H, interior = _spin_dense(k, n_max)
    else:
        J, H, interior = _coupled_dense(model, k)
    comm = J @ H - H @ J
    bound = np.abs(comm[np.ix_(interior, interior)]).max()
    if bound > TOL.commutator:
        raise CommutatorViolation(f"interior commutator norm {bound:.3e}")
    w, V = np.linalg.eigh(J)
    # cluster J eigenvalues
    pts = []
    splits = np.where(np.diff(w) > 1e-8)[0] + 1
    groups = np.split(np.arange(len(w)), splits)
    for g in groups:
        jv = float(np.mean(w[g]))
        block_id = _nearest_block_id(model, k, jv)
        Hs = V[:, g].T @ H @ V[:, g]
        ev = np.sort(np.linalg.eigvalsh(Hs))
        for i, y in enumerate(ev):
            pts.append(JointPoint(jv, float(y), block_id, i))
    pts.sort(key=lambda p: (p.block_id, p.index_in_block))
    return JointSpectrum(k, tuple(pts), None)


def _nearest_block_id(model: ModelSpec, k: int, jv: float) -> int:
    if model.kind == SPIN_OSCILLATOR:
        return round((jv - 1.0) * k)
    return round((model.r1 + model.r2 - jv) * k - 1)


# ---------------------------------------------------------------------------
# export

def spectrum_to_csv(spec: JointSpectrum) -> str:
    lines = ["k,x,y,block,idx"]
    for p in spec.points:
        lines.append(f"{spec.k},{p.x:.17g},{p.y:.17g},{p.block_id},{p.index_in_block}")
    return "\n".join(lines) + "\n"


def spectrum_to_json(spec: JointSpectrum) -> str:
    return json.dumps(
        {
            "k": spec.k,
            "points": [
                {"x": p.x, "y": p.y, "block": p.block_id, "idx": p.index_in_block}
                for p in spec.points
            ],
        },
        indent=2,
    )
