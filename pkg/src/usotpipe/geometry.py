"""Axis-aligned box algebra: IoU, center-distance penalty, link reward, interpolation."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle (x0, y0) top-left, (x1, y1) bottom-right, in pixels.

    Coordinates are real-valued; sub-pixel corners are legal (interpolated boxes
    produce them). Degenerate boxes (zero width or height) are rejected.
    """

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate box: {(self.x0, self.y0, self.x1, self.y1)}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x0, self.y0, self.x1, self.y1)

    @classmethod
    def from_sequence(cls, coords) -> "Box":
        x0, y0, x1, y1 = coords
        return cls(float(x0), float(y0), float(x1), float(y1))


def iou(a: Box, b: Box) -> float:
    """Intersection-over-union of two boxes; 0.0 when disjoint or merely touching."""
    iw = min(a.x1, b.x1) - max(a.x0, b.x0)
    ih = min(a.y1, b.y1) - max(a.y0, b.y0)
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def diou_penalty(a: Box, b: Box) -> float:
    """Squared center distance over squared diagonal of the smallest enclosing box.

    Symmetric, in [0, 1), and 0 exactly when the centers coincide.
    """
    acx, acy = a.center
    bcx, bcy = b.center
    rho2 = (acx - bcx) ** 2 + (acy - bcy) ** 2
    ew = max(a.x1, b.x1) - min(a.x0, b.x0)
    eh = max(a.y1, b.y1) - min(a.y0, b.y0)
    return rho2 / (ew * ew + eh * eh)


def reward_dp(a: Box, b: Box, gamma: float) -> float:
    """Trajectory-link reward: IoU minus gamma times the center-distance penalty.

    gamma > 1 makes jumpy links (low overlap, far centers) strictly unattractive.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    return iou(a, b) - gamma * diou_penalty(a, b)


def lerp_boxes(b0: Box, b1: Box, t0: int, t1: int, t: int) -> Box:
    """Linearly interpolate each corner between frames t0 and t1, exact at both ends."""
    if not t0 < t1:
        raise ValueError("need t0 < t1")
    if not t0 <= t <= t1:
        raise ValueError(f"t={t} outside [{t0}, {t1}]")
    w = (t - t0) / (t1 - t0)
    u = 1.0 - w
    return Box(
        u * b0.x0 + w * b1.x0,
        u * b0.y0 + w * b1.y0,
        u * b0.x1 + w * b1.x1,
        u * b0.y1 + w * b1.y1,
    )


def flip_box(box: Box, width: float, height: float, horizontal: bool, vertical: bool) -> Box:
    """Mirror a box inside a width x height frame."""
    x0, y0, x1, y1 = box.as_tuple()
    if horizontal:
        x0, x1 = width - x1, width - x0
    if vertical:
        y0, y1 = height - y1, height - y0
    return Box(x0, y0, x1, y1)


def box_distance(a: Box, b: Box) -> float:
    """Euclidean distance between box centers."""
    acx, acy = a.center
    bcx, bcy = b.center
    return math.hypot(acx - bcx, acy - bcy)
