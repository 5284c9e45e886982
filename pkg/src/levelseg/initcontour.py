"""Initial level set construction from circle/rectangle specs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_C0 = 2.0


class InitSpecError(ValueError):
    pass


def _num(v):
    # shortest text that parses back to the same float
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not self.r > 1:
            raise InitSpecError(f"circle radius must be > 1, got {self.r}")

    def sdf(self, xx, yy):
        return np.hypot(xx - self.cx, yy - self.cy) - self.r

    def __str__(self):
        return f"circle:{_num(self.cx)},{_num(self.cy)},{_num(self.r)}"


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InitSpecError("rect needs x0 < x1 and y0 < y1")

    def sdf(self, xx, yy):
        cx, cy = 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)
        hx, hy = 0.5 * (self.x1 - self.x0), 0.5 * (self.y1 - self.y0)
        dx = np.abs(xx - cx) - hx
        dy = np.abs(yy - cy) - hy
        outside = np.hypot(np.maximum(dx, 0.0), np.maximum(dy, 0.0))
        inside = np.minimum(np.maximum(dx, dy), 0.0)
        return outside + inside

    def __str__(self):
        return "rect:" + ",".join(_num(v) for v in (self.x0, self.y0, self.x1, self.y1))


def parse_shape(text: str):
    """Parse ``circle:cx,cy,r`` or ``rect:x0,y0,x1,y1``."""
    kind, _, rest = text.strip().partition(":")
    try:
        values = [float(v) for v in rest.split(",")]
    except ValueError:
        raise InitSpecError(f"bad numbers in shape {text!r}") from None
    if kind == "circle" and len(values) == 3:
        return Circle(*values)
    if kind == "rect" and len(values) == 4:
        return Rect(*values)
    raise InitSpecError(f"cannot parse shape {text!r}")


def default_shape(width, height, fraction=0.6):
    """Centred rectangle covering the middle ``fraction`` of each axis."""
    mx = 0.5 * (1.0 - fraction) * (width - 1)
    my = 0.5 * (1.0 - fraction) * (height - 1)
    return Rect(mx, my, width - 1 - mx, height - 1 - my)


def union_sdf(shapes: Sequence, width, height):
    """Pointwise minimum of per-shape signed distances."""
    if not shapes:
        raise InitSpecError("at least one shape is required")
    yy, xx = np.mgrid[0:height, 0:width].astype(float)
    phi = None
    for shape in shapes:
        d = shape.sdf(xx, yy)
        if not (d < 0).any():
            raise InitSpecError(f"{shape} does not cover any grid point")
        phi = d if phi is None else np.minimum(phi, d)
    return phi


def init_levelset(shapes, width, height, mode="sdf", c0=DEFAULT_C0):
    """Build ``phi`` whose interior ``{phi < 0}`` is the union of ``shapes``.

    ``mode="sdf"`` gives the signed distance to the union boundary;
    ``mode="binary_step"`` gives ``-c0`` inside and ``+c0`` outside.
    """
    phi = union_sdf(list(shapes), width, height)
    if mode == "sdf":
        return phi
    if mode == "binary_step":
        if c0 <= 0:
            raise InitSpecError("c0 must be positive")
        return np.where(phi < 0, -c0, c0).astype(float)
    raise InitSpecError(f"unknown init mode {mode!r}")
