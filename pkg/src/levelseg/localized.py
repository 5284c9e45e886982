"""Localized region-based active contour with the uniform-modeling energy.

Statistics are gathered in a ball of radius ``r`` around each narrow-band
point (``|phi| <= eps``). Balls are clipped at the image border. All band
points read the same ``phi`` snapshot, so the update is Jacobi-style.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import field

DEGENERATE = 1e-9


@dataclass
class LocalizedParams:
    radius: Optional[float] = None
    # the data term sums over a whole ball, so the curvature weight is larger
    # than in the global models
    lambda_len: float = 1.0
    eps: float = field.DEFAULT_EPSILON
    cfl: float = 0.45
    reinit_every: int = 10
    reinit_steps: int = 5
    reinit_dtau: float = 0.3

    def validate(self):
        if self.radius is not None and self.radius < 2:
            raise ValueError("radius must be >= 2")
        if not 0 < self.cfl <= 0.5:
            raise ValueError("cfl must lie in (0, 0.5]")
        if self.lambda_len < 0 or self.eps <= 0:
            raise ValueError("lambda_len must be >= 0 and eps > 0")

    def resolved_radius(self, shape):
        if self.radius is not None:
            return float(self.radius)
        return float(max(5, round(0.1 * min(shape))))


def ball_mask_contains(x, y, radius):
    """True iff grid points ``x`` and ``y`` are closer than ``radius``."""
    dx = float(x[0]) - float(y[0])
    dy = float(x[1]) - float(y[1])
    return dx * dx + dy * dy < radius * radius


def ball_offsets(radius):
    """Integer ``(dy, dx)`` offsets strictly inside the ball."""
    R = int(np.ceil(radius))
    dy, dx = np.mgrid[-R:R + 1, -R:R + 1]
    keep = dx * dx + dy * dy < radius * radius
    return dy[keep], dx[keep]


class _Patches:
    """Gather ball neighbourhoods of the band points from zero-padded arrays."""

    def __init__(self, shape, band_rows, band_cols, radius):
        self.R = int(np.ceil(radius))
        oy, ox = ball_offsets(radius)
        self.rows = band_rows[:, None] + oy[None, :] + self.R
        self.cols = band_cols[:, None] + ox[None, :] + self.R
        self.inside = np.pad(np.ones(shape, dtype=bool), self.R)[self.rows, self.cols]

    def __call__(self, f):
        return np.pad(f, self.R)[self.rows, self.cols]


def _band(phi, eps):
    return np.nonzero(np.abs(phi) <= eps)


def _means(image, h, patches):
    hp = patches(h)
    ip = patches(image)
    outp = np.where(patches.inside, 1.0 - hp, 0.0)
    sum_in = hp.sum(axis=1)
    sum_out = outp.sum(axis=1)
    u = (hp * ip).sum(axis=1) / np.maximum(sum_in, DEGENERATE)
    v = (outp * ip).sum(axis=1) / np.maximum(sum_out, DEGENERATE)
    # an empty side copies the other mean, which zeroes the local force
    u_bad = sum_in < DEGENERATE
    v_bad = sum_out < DEGENERATE
    u = np.where(u_bad, v, u)
    v = np.where(v_bad, u, v)
    return u, v, hp, ip, outp


def local_stats(image, phi, params: LocalizedParams):
    """Local interior/exterior means; NaN marks points off the narrow band."""
    rows, cols = _band(phi, params.eps)
    u_loc = np.full(phi.shape, np.nan)
    v_loc = np.full(phi.shape, np.nan)
    if rows.size == 0:
        return u_loc, v_loc
    patches = _Patches(phi.shape, rows, cols, params.resolved_radius(phi.shape))
    u, v, *_ = _means(image, field.heaviside_in(phi, params.eps), patches)
    u_loc[rows, cols] = u
    v_loc[rows, cols] = v
    return u_loc, v_loc


def localized_energy(image, phi, params: LocalizedParams):
    rows, cols = _band(phi, params.eps)
    if rows.size == 0:
        return 0.0
    patches = _Patches(phi.shape, rows, cols, params.resolved_radius(phi.shape))
    u, v, hp, ip, outp = _means(image, field.heaviside_in(phi, params.eps), patches)
    inner = hp * (ip - u[:, None]) ** 2 + outp * (ip - v[:, None]) ** 2
    d = field.dirac(phi[rows, cols], params.eps)
    return float(np.sum(d * inner.sum(axis=1)))


def localized_speed(image, phi, params: LocalizedParams):
    """Band-restricted descent speed; exactly zero off the band.

    For a band point ``z`` the data force compares the point's own intensity
    with the local means of every band point ``x`` whose ball contains it::

        delta(z) * sum_x B(x, z) delta(x) [(I(z) - u_x)^2 - (I(z) - v_x)^2]

    which is the derivative of the localized energy through ``H(phi(z))``.
    The term through ``delta(phi(x))`` is dropped: it only steepens ``phi``
    and reinitialisation undoes it.
    """
    speed = np.zeros(phi.shape)
    rows, cols = _band(phi, params.eps)
    if rows.size == 0:
        return speed
    # the speed is shift invariant; shifting by a band sample makes a constant
    # image exactly zero instead of rounding noise that the step would amplify
    image = np.asarray(image, dtype=float)
    image = image - image[rows[0], cols[0]]
    patches = _Patches(phi.shape, rows, cols, params.resolved_radius(phi.shape))
    u, v, *_ = _means(image, field.heaviside_in(phi, params.eps), patches)
    d = field.dirac(phi[rows, cols], params.eps)
    # (I - u)^2 - (I - v)^2 = -2 I (u - v) + (u^2 - v^2), summed over x with weight delta(x)
    lin = np.zeros(phi.shape)
    quad = np.zeros(phi.shape)
    lin[rows, cols] = d * (u - v)
    quad[rows, cols] = d * (u * u - v * v)
    local = -2.0 * image[rows, cols] * patches(lin).sum(axis=1) + patches(quad).sum(axis=1)
    kappa = field.div(field.normalized_gradient(phi))[rows, cols]
    speed[rows, cols] = d * local + params.lambda_len * d * kappa
    return speed


def localized_step(image, phi, params: LocalizedParams):
    """Explicit step normalised so the fastest band point moves by ``cfl``."""
    speed = localized_speed(image, phi, params)
    dt = params.cfl / (np.max(np.abs(speed)) + 1e-12)
    return phi + dt * speed
