"""Numerical kernel shared by every model.

Fields are plain 2-D float64 numpy arrays indexed ``[row, col]`` = ``[y, x]``
with unit grid spacing. Vector fields are ``(vx, vy)`` tuples. Interior of a
level set is ``{phi < 0}``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

EPS_GRAD = 1e-8
DEFAULT_EPSILON = 1.5


def _pad(f):
    return np.pad(f, 1, mode="edge")


def grad_central(f):
    """Central differences with replicate-edge ghost cells.

    Returns ``(vx, vy)``; at a border the ghost equals the edge sample so
    e.g. ``vx[:, 0] = (f[:, 1] - f[:, 0]) / 2``.
    """
    p = _pad(np.asarray(f, dtype=float))
    vx = (p[1:-1, 2:] - p[1:-1, :-2]) * 0.5
    vy = (p[2:, 1:-1] - p[:-2, 1:-1]) * 0.5
    return vx, vy


def grad_magnitude(g):
    vx, vy = g
    return np.sqrt(vx * vx + vy * vy)


def div(vf):
    """Central-difference divergence of ``(vx, vy)`` with replicate ghosts."""
    vx, vy = vf
    px = _pad(np.asarray(vx, dtype=float))
    py = _pad(np.asarray(vy, dtype=float))
    return (px[1:-1, 2:] - px[1:-1, :-2]) * 0.5 + (py[2:, 1:-1] - py[:-2, 1:-1]) * 0.5


def laplacian(f):
    """Discrete Laplacian defined as ``div(grad_central(f))``.

    In the interior this is the 5-point stencil on offsets of two pixels,
    ``(f[x+2] + f[x-2] + f[y+2] + f[y-2] - 4 f) / 4``. Defining it through the
    same first-difference operators keeps ``div(grad u) == laplacian(u)`` exact
    and makes the distance-regularisation flow the true discrete gradient of
    its energy.
    """
    return div(grad_central(f))


def normalized_gradient(phi, eps_grad=EPS_GRAD):
    """``grad(phi) / |grad(phi)|`` with the regularised magnitude."""
    vx, vy = grad_central(phi)
    mag = np.sqrt(vx * vx + vy * vy + eps_grad)
    return vx / mag, vy / mag


def curvature(u, eps_grad=EPS_GRAD):
    """Mean curvature of the level lines of ``u``.

    Evaluates ``(uy^2 uxx - 2 ux uy uxy + ux^2 uyy) / (ux^2 + uy^2 + eps)^1.5``
    with central first and second differences and replicate-edge ghosts.
    """
    p = _pad(np.asarray(u, dtype=float))
    c = p[1:-1, 1:-1]
    ux = (p[1:-1, 2:] - p[1:-1, :-2]) * 0.5
    uy = (p[2:, 1:-1] - p[:-2, 1:-1]) * 0.5
    uxx = p[1:-1, 2:] - 2.0 * c + p[1:-1, :-2]
    uyy = p[2:, 1:-1] - 2.0 * c + p[:-2, 1:-1]
    uxy = (p[2:, 2:] - p[:-2, 2:] - p[2:, :-2] + p[:-2, :-2]) * 0.25
    num = uy * uy * uxx - 2.0 * ux * uy * uxy + ux * ux * uyy
    den = (ux * ux + uy * uy + eps_grad) ** 1.5
    return num / den


def gaussian_kernel(sigma):
    """Sampled Gaussian on integer offsets ``-R..R`` with ``R = ceil(3 sigma)``,
    normalised to unit sum."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = int(math.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    k /= k.sum()
    # exact mirror symmetry regardless of summation rounding
    return 0.5 * (k + k[::-1])


def gaussian_smooth(f, sigma):
    """Separable Gaussian convolution with reflective borders."""
    k = gaussian_kernel(sigma)
    out = ndimage.correlate1d(np.asarray(f, dtype=float), k, axis=1, mode="reflect")
    return ndimage.correlate1d(out, k, axis=0, mode="reflect")


def heaviside_in(phi, eps=DEFAULT_EPSILON):
    """Smoothed indicator of the interior ``{phi < 0}``.

    1 below ``-eps``, 0 above ``eps`` and
    ``0.5 * (1 - phi/eps - sin(pi phi / eps) / pi)`` in between.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    phi = np.asarray(phi, dtype=float)
    s = np.clip(phi / eps, -1.0, 1.0)
    h = 0.5 * (1.0 - s - np.sin(np.pi * s) / np.pi)
    h = np.clip(h, 0.0, 1.0)
    h = np.where(phi < -eps, 1.0, h)
    h = np.where(phi > eps, 0.0, h)
    return h if h.ndim else float(h)


def dirac(phi, eps=DEFAULT_EPSILON):
    """Smoothed delta ``(1 + cos(pi phi / eps)) / (2 eps)`` on ``|phi| <= eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    phi = np.asarray(phi, dtype=float)
    d = np.where(np.abs(phi) <= eps, (1.0 + np.cos(np.pi * phi / eps)) / (2.0 * eps), 0.0)
    return d if d.ndim else float(d)


def dirac_derivative(phi, eps=DEFAULT_EPSILON):
    """``d(dirac)/d(phi)``, zero off the band."""
    phi = np.asarray(phi, dtype=float)
    return np.where(
        np.abs(phi) <= eps,
        -np.pi * np.sin(np.pi * phi / eps) / (2.0 * eps * eps),
        0.0,
    )


def length_descent(phi, eps=DEFAULT_EPSILON, weight=None):
    """Negative gradient of the weighted length ``sum w * dirac(phi) * |grad phi|``.

    Equals ``div(w * dirac * n) - w * dirac' * |grad phi|`` with the discrete
    operators above, so away from the outermost pixel ring it is the exact
    derivative of the discrete sum. It tends to ``dirac * div(w n)`` as the
    band widens.
    """
    w = 1.0 if weight is None else weight
    vx, vy = grad_central(phi)
    nx, ny = normalized_gradient(phi)
    d = w * dirac(phi, eps)
    return div((d * nx, d * ny)) - w * dirac_derivative(phi, eps) * np.hypot(vx, vy)


def _minmod(a, b):
    return np.where(a * b > 0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def _eno_differences(phi, axis):
    """Second-order ENO backward/forward differences along ``axis``."""
    p = np.pad(phi, 2, mode="edge")
    n = phi.shape[axis]

    def sl(k):
        idx = [slice(2, -2), slice(2, -2)]
        idx[axis] = slice(2 + k, 2 + k + n)
        return p[tuple(idx)]

    m2, m1, c, p1, p2 = sl(-2), sl(-1), sl(0), sl(1), sl(2)
    back = (c - m1) + 0.5 * _minmod(c - 2 * m1 + m2, p1 - 2 * c + m1)
    fwd = (p1 - c) - 0.5 * _minmod(p1 - 2 * c + m1, p2 - 2 * p1 + c)
    return back, fwd


def _godunov_norm(phi, sign):
    a, b = _eno_differences(phi, 1)
    cm, d = _eno_differences(phi, 0)
    pos = sign > 0
    gx_pos = np.maximum(np.maximum(a, 0.0) ** 2, np.minimum(b, 0.0) ** 2)
    gy_pos = np.maximum(np.maximum(cm, 0.0) ** 2, np.minimum(d, 0.0) ** 2)
    gx_neg = np.maximum(np.minimum(a, 0.0) ** 2, np.maximum(b, 0.0) ** 2)
    gy_neg = np.maximum(np.minimum(cm, 0.0) ** 2, np.maximum(d, 0.0) ** 2)
    return np.sqrt(np.where(pos, gx_pos + gy_pos, gx_neg + gy_neg))


def sussman_reinit(phi, steps=5, dtau=0.3):
    """Relax ``phi`` toward a signed distance function.

    Iterates ``phi_t = S(phi0) (1 - |grad phi|)`` with the smoothed sign
    ``S = phi0 / sqrt(phi0^2 + 1)`` and a Godunov upwind gradient built from
    second-order ENO one-sided differences.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if not 0 < dtau <= 0.5:
        raise ValueError("dtau must be in (0, 0.5]")
    phi0 = np.asarray(phi, dtype=float)
    out = phi0.copy()
    if steps == 0:
        return out
    sign = phi0 / np.sqrt(phi0 * phi0 + 1.0)
    for _ in range(steps):
        out = out + dtau * sign * (1.0 - _godunov_norm(out, sign))
    return out
