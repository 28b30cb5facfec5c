"""Detection, labelling and gluing of asymptotic lattices and half-lattices.

A point cloud that is hbar-close to the image of hbar*Z^2 under a smooth
chart gets integer labels by discrete parallel transport: starting from an
affine basis (three points realizing the lattice steps), neighbors are
searched where the locally transported step vectors predict them.  Labels
are unique up to one orientation-preserving integer affine map GA+(2,Z),
which is exactly the freedom of the unknown chart.

Two transport engines are provided:

* ``label_regular`` - generic breadth-first transport with per-point frame
  refresh; works for arbitrary charts.
* ``label_semitoric`` - for clouds whose first coordinate is already an
  hbar-grid (joint spectra of systems with an S^1 symmetry): clusters exact
  columns and chains their integer offsets with a drift-carried row match.
  This is the "label vertically" strategy natural to the semitoric case.

Half-lattices (hbar * (Z x N), spectra near an elliptic-transverse value)
get the dedicated bottom-anchored algorithm ``label_half_lattice``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .config import TOL
from .errors import (
    AmbiguousNeighbor,
    CocycleViolation,
    Disconnected,
    EmptyStrip,
    Inconsistent,
    InjectivityFailure,
    NonSimplyConnected,
    TooSparse,
)
from .geometry import Rect

__all__ = [
    "PointCloud",
    "ChartSpec",
    "AffineBasis",
    "Labelling",
    "ChartTransition",
    "GlobalLabelling",
    "synth_lattice",
    "select_affine_basis",
    "label_regular",
    "label_semitoric",
    "label_half_lattice",
    "detect_boundary",
    "transition",
    "glue_global",
    "lagrange_reduce",
]

REGULAR = "regular"
HALF_LATTICE = "half-lattice"


@dataclass(frozen=True)
class PointCloud:
    k: int
    points: np.ndarray                    # (n, 2)
    region: Rect | None = None
    true_labels: np.ndarray | None = None  # (n, 2) int; synthetic ground truth only

    @property
    def hbar(self) -> float:
        return 1.0 / self.k

    def min_separation(self) -> float:
        if len(self.points) < 2:
            return np.inf
        d, _ = cKDTree(self.points).query(self.points, k=2)
        return float(d[:, 1].min())

    def check_separation(self) -> float:
        sep = self.min_separation()
        floor = TOL.separation_eps0 * self.hbar ** TOL.separation_n0
        if sep < floor:
            raise InjectivityFailure(
                f"min pairwise separation {sep:.3e} below {floor:.3e}"
            )
        return sep

    def restrict(self, region: Rect) -> "PointCloud":
        m = region.contains(self.points)
        tl = self.true_labels[m] if self.true_labels is not None else None
        return PointCloud(self.k, self.points[m], region, tl)


@dataclass(frozen=True)
class ChartSpec:
    """Synthetic ground-truth chart G_hbar = g0 + hbar*g1 on a rectangle."""

    g0: object                  # callable (2,) -> (2,)
    g1: object
    domain: Rect
    half: bool = False

    def check_injective(self, grid: int = 25) -> None:
        xs = np.linspace(self.domain.xmin, self.domain.xmax, grid)
        ys = np.linspace(self.domain.ymin, self.domain.ymax, grid)
        pts = np.array([self.g0(np.array([x, y])) for x in xs for y in ys])
        d, _ = cKDTree(pts).query(pts, k=2)
        cell = max(
            (self.domain.xmax - self.domain.xmin) / (grid - 1),
            (self.domain.ymax - self.domain.ymin) / (grid - 1),
        )
        if d[:, 1].min() < 1e-3 * cell:
            raise InjectivityFailure("g0 is not injective on the domain grid")


def synth_lattice(chart: ChartSpec, k: int) -> PointCloud:
    """Image of hbar*Z^2 (or hbar*(Z x N) if half) under g0 + hbar*g1.

    True labels are retained on the cloud for test assertions.
    """
    h = 1.0 / k
    dom = chart.domain
    b_lo = int(np.floor(dom.ymin / h))
    if chart.half:
        b_lo = max(b_lo, 0)
    labels, pts = [], []
    for a in range(int(np.floor(dom.xmin / h)), int(np.ceil(dom.xmax / h)) + 1):
        for b in range(b_lo, int(np.ceil(dom.ymax / h)) + 1):
            xi = np.array([a * h, b * h])
            if dom.contains(xi)[0]:
                labels.append((a, b))
                pts.append(np.asarray(chart.g0(xi), float) + h * np.asarray(chart.g1(xi), float))
    cloud = PointCloud(k, np.array(pts), None, np.array(labels, dtype=int))
    cloud.check_separation()
    return cloud


# ---------------------------------------------------------------------------
# affine basis

@dataclass(frozen=True)
class AffineBasis:
    lam00: int
    lam10: int
    lam01: int
    v1: np.ndarray
    v2: np.ndarray


def lagrange_reduce(v1, v2):
    """Shortest positively-oriented basis of the lattice spanned by v1, v2."""
    a = np.asarray(v1, float).copy()
    b = np.asarray(v2, float).copy()
    if a @ a > b @ b:
        a, b = b, a
    while True:
        m = round((a @ b) / (a @ a))
        b = b - m * a
        if b @ b >= a @ a:
            break
        a, b = b, a
    if a[0] * b[1] - a[1] * b[0] < 0:
        b = -b
    return a, b


def select_affine_basis(cloud: PointCloud, c) -> AffineBasis:
    """Three points realizing an affine basis of the lattice near c.

    Nearest-point seeding, shortest independent difference vectors among
    neighbors, then Lagrange reduction and positive orientation.
    """
    pts = cloud.points
    if len(pts) < 3:
        raise TooSparse("need at least 3 points")
    tree = cKDTree(pts)
    i0 = int(tree.query(np.asarray(c, float))[1])
    kq = min(len(pts), 13)
    _, nbr = tree.query(pts[i0], k=kq)
    vecs = [(pts[j] - pts[i0], j) for j in np.atleast_1d(nbr)[1:]]
    vecs.sort(key=lambda t: t[0] @ t[0])
    if not vecs:
        raise TooSparse("no neighbors near seed")
    v1 = vecs[0][0]
    v2 = None
    for v, _ in vecs[1:]:
        cross = v1[0] * v[1] - v1[1] * v[0]
        if abs(cross) > 0.1 * np.linalg.norm(v1) * np.linalg.norm(v):
            v2 = v
            break
    if v2 is None:
        raise TooSparse("neighbors of seed are collinear")
    v1, v2 = lagrange_reduce(v1, v2)
    i10 = int(tree.query(pts[i0] + v1)[1])
    i01 = int(tree.query(pts[i0] + v2)[1])
    if len({i0, i10, i01}) < 3:
        raise TooSparse("degenerate affine basis")
    return AffineBasis(i0, i10, i01, v1, v2)


# ---------------------------------------------------------------------------
# labelling containers

@dataclass
class Labelling:
    assignment: dict[int, tuple[int, int]]
    kind: str = REGULAR

    def __post_init__(self):
        labs = list(self.assignment.values())
        if len(set(labs)) != len(labs):
            raise Inconsistent("labelling is not injective")
        if self.kind == HALF_LATTICE and any(l < 0 for _, l in labs):
            raise Inconsistent("half-lattice labels must have ell >= 0")

    def by_label(self) -> dict[tuple[int, int], int]:
        return {lab: i for i, lab in self.assignment.items()}

    def arrays(self, cloud: PointCloud):
        idx = np.fromiter(self.assignment.keys(), dtype=int)
        lab = np.array([self.assignment[i] for i in idx], dtype=int)
        return cloud.points[idx], lab, idx

    def compose_affine(self, a_matrix, kappa) -> "Labelling":
        A = np.asarray(a_matrix, dtype=int)
        kap = np.asarray(kappa, dtype=int)
        out = {i: tuple(A @ np.array(l) + kap) for i, l in self.assignment.items()}
        return Labelling(out, self.kind)

    def __len__(self):
        return len(self.assignment)


# ---------------------------------------------------------------------------
# generic breadth-first parallel transport

def label_regular(cloud: PointCloud, basis: AffineBasis, region: Rect | None = None,
                  strict: bool = True) -> Labelling:
    """Label by discrete parallel transport from the affine basis.

    To assign (n+1, m) the search looks within a fraction of the shortest
    local step of lambda_(n,m) + (lambda_(n,m) - lambda_(n-1,m)); frames are
    refreshed from already-labelled neighbors so curvature is tracked.
    """
    pts = cloud.points
    inside = region.contains(pts) if region is not None else np.ones(len(pts), bool)
    if inside.sum() < TOL.min_region_points:
        raise TooSparse(f"only {int(inside.sum())} points in region")
    tree = cKDTree(pts)
    labels: dict[int, tuple[int, int]] = {}
    by_label: dict[tuple[int, int], int] = {}
    frames: dict[int, np.ndarray] = {}

    def put(i, lab, frame):
        labels[i] = lab
        by_label[lab] = i
        frames[i] = frame

    f0 = np.array([basis.v1, basis.v2], float)
    put(basis.lam00, (0, 0), f0)
    if inside[basis.lam10]:
        put(basis.lam10, (1, 0), f0)
    if inside[basis.lam01]:
        put(basis.lam01, (0, 1), f0)
    q = deque(i for i in (basis.lam00, basis.lam10, basis.lam01) if i in labels)
    ambiguous = 0
    while q:
        i = q.popleft()
        p = pts[i]
        f = frames[i]
        lab = labels[i]
        radius = TOL.search_radius * min(np.linalg.norm(f[0]), np.linalg.norm(f[1]))
        for d, vec in (((1, 0), f[0]), ((-1, 0), -f[0]), ((0, 1), f[1]), ((0, -1), -f[1])):
            nl = (lab[0] + d[0], lab[1] + d[1])
            target = p + vec
            if nl in by_label:
                if np.linalg.norm(pts[by_label[nl]] - target) > 2.5 * radius:
                    raise AmbiguousNeighbor(
                        f"transport inconsistency at label {nl} (hbar too large?)"
                    )
                continue
            cand = [c for c in tree.query_ball_point(target, radius)
                    if c not in labels and inside[c]]
            if not cand:
                continue
            ranked = sorted((np.linalg.norm(pts[c] - target), c) for c in cand)
            if len(ranked) > 1 and ranked[1][0] < TOL.ambiguity_ratio * ranked[0][0]:
                ambiguous += 1
                continue
            j = ranked[0][1]
            nf = f.copy()
            if d[0]:
                nf[0] = (pts[j] - p) * d[0]
                prev = by_label.get((nl[0], nl[1] - 1))
                if prev is not None:
                    nf[1] = pts[j] - pts[prev]
            else:
                nf[1] = (pts[j] - p) * d[1]
                prev = by_label.get((nl[0] - 1, nl[1]))
                if prev is not None:
                    nf[0] = pts[j] - pts[prev]
            put(j, nl, nf)
            q.append(j)
    missed = int(inside.sum()) - len(labels)
    if strict and missed > 0:
        raise Disconnected(f"{missed} points unreachable ({ambiguous} ambiguous searches)")
    return Labelling(dict(labels), REGULAR)


# ---------------------------------------------------------------------------
# semitoric column transport

def _columns(pts: np.ndarray, h: float):
    """Cluster points into x-columns (gap threshold a fraction of hbar)."""
    order = np.argsort(pts[:, 0], kind="stable")
    xs = pts[order, 0]
    starts = [0]
    for i in range(1, len(xs)):
        if xs[i] - xs[i - 1] > TOL.column_gap * h:
            starts.append(i)
    bounds = starts + [len(xs)]
    cols = []
    for c in range(len(starts)):
        idx = order[bounds[c]:bounds[c + 1]]
        idx = idx[np.argsort(pts[idx, 1])]
        cols.append(idx)
    colx = np.array([pts[c, 0].mean() for c in cols])
    return cols, colx


def _match_columns(A: np.ndarray, B: np.ndarray, drift):
    """Integer offset o with B[i+o] ~ A[i] + drift(y).

    Candidate offsets come from nearest-to-prediction votes; the winner is
    the one whose matched-row deviations from the carried drift stay small
    (a wrong offset is off by a full level spacing somewhere).  Returns
    (offset, drift table for the next pair, confidence in [0,1]).
    """
    if len(A) < 2 or len(B) < 2:
        return None, drift, 0.0
    n = len(A)
    i0, i1 = int(0.12 * n), max(int(np.ceil(0.88 * n)), int(0.12 * n) + 1)
    ia = np.arange(i0, min(i1, n))
    pred = A[ia] + (np.interp(A[ia], drift[0], drift[1]) if drift is not None else 0.0)
    ib = np.clip(np.searchsorted(B, pred), 1, len(B) - 1)
    ib = np.where(np.abs(B[ib] - pred) < np.abs(B[ib - 1] - pred), ib, ib - 1)
    candidates = np.unique(np.concatenate([ib - ia, ib - ia + 1, ib - ia - 1]))
    spacing = float(np.median(np.diff(A)))

    def residual(o):
        ii = np.arange(max(i0, -o), min(min(i1, n), len(B) - o))
        if len(ii) < 2:
            return np.inf
        d = B[ii + o] - A[ii]
        ref = np.interp(A[ii], drift[0], drift[1]) if drift is not None else 0.0
        return float(np.median(np.abs(d - ref)))

    scored = sorted((residual(int(o)), int(o)) for o in candidates)
    best_r, o = scored[0]
    if drift is None:
        # no transported reference yet: the minimal-row-step choice fixes the
        # (equally valid) action chart, so it is accepted as is
        confidence = 1.0
    else:
        margin = scored[1][0] / max(best_r, 1e-12) if len(scored) > 1 else np.inf
        confidence = 1.0 if (best_r < 0.35 * spacing and margin > 1.5) else 0.0
    ii = np.arange(max(0, -o), min(len(A), len(B) - o))
    table = (A[ii], B[ii + o] - A[ii]) if len(ii) else None
    return o, table, confidence


def label_semitoric(cloud: PointCloud, seed_x: float | None = None,
                    min_vote: float = 0.6) -> Labelling:
    """Column-sweep transport for semitoric clouds (x already on an hbar grid).

    j counts columns, ell counts within a column; the ell anchor of each
    column is chained from its neighbor through a drift-carried row match,
    which is parallel transport done one column at a time.
    """
    pts = cloud.points
    if len(pts) < TOL.min_region_points:
        raise TooSparse(f"only {len(pts)} points")
    h = cloud.hbar
    cols, colx = _columns(pts, h)
    ncol = len(cols)
    gaps = np.diff(colx)
    if np.any(gaps > 1.6 * h):
        raise Disconnected("column chain has a gap wider than 1.6*hbar")
    ys = [pts[c, 1] for c in cols]
    c0 = ncol - 1 if seed_x is None else int(np.argmin(np.abs(colx - seed_x)))
    anchor = np.zeros(ncol, dtype=int)
    for step in (+1, -1):
        drift = None
        c = c0
        while 0 <= c + step < ncol:
            cn = c + step
            o, drift, frac = _match_columns(ys[c], ys[cn], drift)
            if o is None:
                anchor[cn] = anchor[c]
            else:
                if frac < min_vote:
                    raise AmbiguousNeighbor(
                        f"row match between columns {c} and {cn} got only "
                        f"{frac:.0%} agreement"
                    )
                anchor[cn] = anchor[c] - o
            c = cn
    out: dict[int, tuple[int, int]] = {}
    for c in range(ncol):
        for rank, i in enumerate(cols[c]):
            out[int(i)] = (c - c0, rank + int(anchor[c]))
    return Labelling(out, REGULAR)


# ---------------------------------------------------------------------------
# half-lattice labelling

def label_half_lattice(cloud: PointCloud, c, b0: Rect | None = None) -> Labelling:
    """Bottom-anchored labelling near a transversally elliptic value.

    Steps: nearest point mu to c (ties broken lexicographically); the lowest
    point of the hbar^(3/2)-wide vertical strip through mu is lambda_(0,0);
    the next one up is lambda_(0,1); the lowest point of the strip shifted by
    (hbar, 0) is lambda_(1,0); then transport restricted to ell >= 0.
    """
    pts = cloud.points if b0 is None else cloud.points[b0.contains(cloud.points)]
    if len(pts) < TOL.min_region_points:
        raise TooSparse(f"only {len(pts)} points")
    h = cloud.hbar
    cpt = np.asarray(c, float)
    d2 = np.sum((pts - cpt) ** 2, axis=1)
    near = np.where(d2 <= d2.min() + 1e-18)[0]
    mu_i = near[np.lexsort((pts[near, 1], pts[near, 0]))[0]]
    mu = pts[mu_i]
    w = 0.5 * h ** 1.5
    s0 = np.where(np.abs(pts[:, 0] - mu[0]) <= w)[0]
    if len(s0) == 0:
        raise EmptyStrip("strip S0 empty")
    s0 = s0[np.argsort(pts[s0, 1])]
    lam00 = s0[0]
    if len(s0) < 2:
        raise EmptyStrip("strip S0 has no point above lambda_(0,0)")
    s1 = np.where(np.abs(pts[:, 0] - (mu[0] + h)) <= w)[0]
    if len(s1) == 0:
        raise EmptyStrip("strip S1 empty")

    cols, colx = _columns(pts, h)
    col_of = np.empty(len(pts), dtype=int)
    for ci, idx in enumerate(cols):
        col_of[idx] = ci
    c00 = int(col_of[lam00])
    if cols[c00][0] != lam00:
        raise EmptyStrip("lambda_(0,0) is not the lowest point of its column")
    # admissibility cross-check: in transport coordinates the bottom row must
    # be a straight lattice line (affine in the column index); a kink means
    # the domain crosses a corner
    sub = PointCloud(cloud.k, pts)
    trans = label_semitoric(sub, seed_x=float(mu[0]))
    lmin: dict[int, int] = {}
    for i, (j, l) in trans.assignment.items():
        lmin[j] = min(lmin.get(j, l), l)
    js = sorted(lmin)
    steps = {lmin[b] - lmin[a] for a, b in zip(js, js[1:])}
    if len(steps) > 1:
        raise Disconnected("bottom row is not a lattice line (domain not admissible)")
    # map back to original indices when restricted
    if b0 is None:
        orig = np.arange(len(pts))
    else:
        orig = np.where(b0.contains(cloud.points))[0]
    out: dict[int, tuple[int, int]] = {}
    for ci, idx in enumerate(cols):
        for rank, i in enumerate(idx):
            out[int(orig[i])] = (ci - c00, rank)
    return Labelling(out, HALF_LATTICE)


def detect_boundary(clouds: dict[int, PointCloud], side: str = "lower") -> np.ndarray:
    """Accumulation-set boundary estimate: per-column extremal points of the
    largest-k cloud, as a polyline sorted by x."""
    k = max(clouds)
    cloud = clouds[k]
    cols, colx = _columns(cloud.points, cloud.hbar)
    out = []
    for ci, idx in enumerate(cols):
        yy = cloud.points[idx, 1]
        out.append((colx[ci], yy.min() if side == "lower" else yy.max()))
    return np.array(out)


# ---------------------------------------------------------------------------
# transitions and gluing

@dataclass(frozen=True)
class ChartTransition:
    a_matrix: np.ndarray              # 2x2 int, det +1
    kappa: tuple[int, int]

    def __post_init__(self):
        A = np.asarray(self.a_matrix)
        if round(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]) != 1:
            raise Inconsistent("transition matrix must have determinant +1")

    def apply(self, lab: Labelling) -> Labelling:
        return lab.compose_affine(self.a_matrix, self.kappa)

    def compose(self, other: "ChartTransition") -> "ChartTransition":
        A = np.asarray(self.a_matrix) @ np.asarray(other.a_matrix)
        kap = np.asarray(self.a_matrix) @ np.array(other.kappa) + np.array(self.kappa)
        return ChartTransition(A.astype(int), (int(kap[0]), int(kap[1])))

    def is_identity(self) -> bool:
        return (
            np.array_equal(np.asarray(self.a_matrix), np.eye(2, dtype=int))
            and tuple(self.kappa) == (0, 0)
        )


def transition(lab1: Labelling, lab2: Labelling, cloud: PointCloud,
               overlap: Rect | None = None) -> ChartTransition:
    """The unique (A, kappa), A in SL(2,Z), with lab2 = A∘lab1 + kappa on the
    overlap. Exact integer arithmetic; verified on every common point."""
    common = sorted(set(lab1.assignment) & set(lab2.assignment))
    if overlap is not None:
        inside = overlap.contains(cloud.points)
        common = [i for i in common if inside[i]]
    if len(common) < 3:
        raise Inconsistent("need at least 3 common points")
    L1 = np.array([lab1.assignment[i] for i in common], dtype=np.int64)
    L2 = np.array([lab2.assignment[i] for i in common], dtype=np.int64)
    d1 = L1 - L1[0]
    A = None
    for i in range(1, len(common)):
        for j in range(i + 1, min(i + 50, len(common))):
            det = d1[i, 0] * d1[j, 1] - d1[i, 1] * d1[j, 0]
            if det != 0:
                D1 = np.array([d1[i], d1[j]]).T
                D2 = np.array([L2[i] - L2[0], L2[j] - L2[0]]).T
                adj = np.array([[D1[1, 1], -D1[0, 1]], [-D1[1, 0], D1[0, 0]]])
                num = D2 @ adj
                if np.any(num % det != 0):
                    raise Inconsistent("no integer matrix fits the label differences")
                A = num // det
                break
        if A is not None:
            break
    if A is None:
        raise Inconsistent("common points are collinear in label space")
    kap = L2[0] - A @ L1[0]
    if np.any((L1 @ A.T) + kap != L2):
        raise Inconsistent("affine map fails on some common point")
    return ChartTransition(A.astype(int), (int(kap[0]), int(kap[1])))


@dataclass
class GlobalLabelling:
    charts: list                                 # (Rect, Labelling) after gluing
    transitions: dict                            # (i, j) -> ChartTransition
    merged: Labelling
    cloud: PointCloud
    nu_freedom: bool = True                      # integer translation undetermined

    def phi_samples(self):
        """Sampled cartographic map: (points, hbar * labels)."""
        pts, lab, _ = self.merged.arrays(self.cloud)
        return pts, lab * self.cloud.hbar

    def to_json(self) -> str:
        import json

        charts = []
        for region, lab in self.charts:
            charts.append({
                "region": [region.xmin, region.xmax, region.ymin, region.ymax],
                "labels": [
                    {"index": i, "j": int(j), "l": int(l)}
                    for i, (j, l) in sorted(lab.assignment.items())
                ],
            })
        transitions = [
            {"pair": [i, j],
             "A": np.asarray(t.a_matrix, dtype=int).tolist(),
             "kappa": list(t.kappa)}
            for (i, j), t in sorted(self.transitions.items())
        ]
        return json.dumps({"charts": charts, "transitions": transitions}, indent=2)


def glue_global(cloud: PointCloud, charts: list[tuple[Rect, Labelling]]) -> GlobalLabelling:
    """Fix chart 0 and propagate its labelling along chains of overlaps.

    Verifies the cocycle condition on every overlap cycle; a failing cycle
    means the union is not simply connected (or a chart is mislabelled).
    """
    n = len(charts)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            ri, rj = charts[i][0], charts[j][0]
            if not ri.intersects(rj):
                continue
            try:
                edges[(i, j)] = transition(
                    charts[i][1], charts[j][1], cloud, ri.intersection(rj)
                )
            except Inconsistent:
                continue
    # BFS over the chart graph
    to_global: dict[int, ChartTransition] = {
        0: ChartTransition(np.eye(2, dtype=int), (0, 0))
    }
    q = deque([0])
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for (i, j) in edges:
        adj[i].append(j)
        adj[j].append(i)
    tree_edges = set()
    while q:
        i = q.popleft()
        for j in adj[i]:
            if j in to_global:
                continue
            t_ij = edges[(i, j)] if (i, j) in edges else _invert(edges[(j, i)])
            # labels of chart j expressed in chart i's frame, then global
            to_global[j] = to_global[i].compose(_invert(t_ij))
            tree_edges.add((min(i, j), max(i, j)))
            q.append(j)
    if len(to_global) < n:
        raise Disconnected("chart cover is not connected")
    # cocycle check on non-tree edges
    for (i, j), t in edges.items():
        if (i, j) in tree_edges:
            continue
        loop = _invert(to_global[j]).compose(to_global[i]).compose(_invert(t))
        if not loop.is_identity():
            if _nontrivial_matrix(loop):
                raise NonSimplyConnected(
                    f"cycle through charts {i},{j} has nontrivial holonomy"
                )
            raise CocycleViolation(
                f"translation mismatch on cycle through charts {i},{j}"
            )
    glued = [(r, to_global[i].apply(lab)) for i, (r, lab) in enumerate(charts)]
    merged: dict[int, tuple[int, int]] = {}
    for _, lab in glued:
        for idx, l in lab.assignment.items():
            if idx in merged and merged[idx] != l:
                raise CocycleViolation(f"point {idx} received two labels")
            merged[idx] = l
    return GlobalLabelling(glued, edges, Labelling(merged, REGULAR), cloud)


def _invert(t: ChartTransition) -> ChartTransition:
    A = np.asarray(t.a_matrix)
    Ainv = np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]], dtype=int)
    kap = -(Ainv @ np.array(t.kappa))
    return ChartTransition(Ainv, (int(kap[0]), int(kap[1])))


def _nontrivial_matrix(t: ChartTransition) -> bool:
    return not np.array_equal(np.asarray(t.a_matrix), np.eye(2, dtype=int))
