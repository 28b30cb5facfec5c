"""Plane regions used for windows, chart domains and exclusion zones."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def contains(self, pts) -> np.ndarray:
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        return (
            (p[:, 0] >= self.xmin)
            & (p[:, 0] <= self.xmax)
            & (p[:, 1] >= self.ymin)
            & (p[:, 1] <= self.ymax)
        )

    def intersects(self, other: "Rect") -> bool:
        return not (
            self.xmax < other.xmin
            or other.xmax < self.xmin
            or self.ymax < other.ymin
            or other.ymax < self.ymin
        )

    def intersection(self, other: "Rect") -> "Rect":
        return Rect(
            max(self.xmin, other.xmin),
            min(self.xmax, other.xmax),
            max(self.ymin, other.ymin),
            min(self.ymax, other.ymax),
        )

    def shrink(self, margin: float) -> "Rect":
        return Rect(
            self.xmin + margin, self.xmax - margin,
            self.ymin + margin, self.ymax - margin,
        )

    @property
    def empty(self) -> bool:
        return self.xmax <= self.xmin or self.ymax <= self.ymin


@dataclass(frozen=True)
class Ball:
    cx: float
    cy: float
    radius: float

    def contains(self, pts) -> np.ndarray:
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.hypot(p[:, 0] - self.cx, p[:, 1] - self.cy) <= self.radius
