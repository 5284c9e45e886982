"""Two-phase piecewise-constant region model (global means)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import field

DEGENERATE = 1e-9


@dataclass
class CvParams:
    lambda_len: float = 0.1
    eps: float = field.DEFAULT_EPSILON
    dt: float = 0.5
    reinit_every: int = 10
    reinit_steps: int = 5
    reinit_dtau: float = 0.3

    def validate(self):
        if self.lambda_len < 0:
            raise ValueError("lambda_len must be >= 0")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 0 < self.dt <= 0.5:
            raise ValueError("chanvese dt must lie in (0, 0.5]")
        if self.reinit_every < 0 or self.reinit_steps < 0:
            raise ValueError("reinit schedule must be non-negative")


def region_means(image, phi, eps=field.DEFAULT_EPSILON):
    """Mean intensity inside (``c1``) and outside (``c2``) the contour.

    An (almost) empty region falls back to the global image mean.
    """
    h = field.heaviside_in(phi, eps)
    w_in = h.sum()
    w_out = (1.0 - h).sum()
    g = float(image.mean())
    c1 = float((image * h).sum() / w_in) if w_in >= DEGENERATE else g
    c2 = float((image * (1.0 - h)).sum() / w_out) if w_out >= DEGENERATE else g
    return c1, c2


def length_term(phi, eps=field.DEFAULT_EPSILON):
    """Discrete contour length ``sum delta(phi) |grad phi|``."""
    mag = field.grad_magnitude(field.grad_central(phi))
    return float(np.sum(field.dirac(phi, eps) * mag))


def cv_energy(image, phi, means=None, lambda_len=0.1, eps=field.DEFAULT_EPSILON):
    if means is None:
        means = region_means(image, phi, eps)
    c1, c2 = means
    h = field.heaviside_in(phi, eps)
    fit = np.sum((image - c1) ** 2 * h) + np.sum((image - c2) ** 2 * (1.0 - h))
    return float(fit + lambda_len * length_term(phi, eps))


def cv_force(image, phi, params: CvParams):
    """Descent direction ``-dE/dphi`` (before multiplying by ``dt``)."""
    image = np.asarray(image, dtype=float)
    image = image - image.flat[0]  # exact zero force on a flat image
    c1, c2 = region_means(image, phi, params.eps)
    data = field.dirac(phi, params.eps) * ((image - c1) ** 2 - (image - c2) ** 2)
    return data + params.lambda_len * field.length_descent(phi, params.eps)


def cv_step(image, phi, params: CvParams):
    return phi + params.dt * cv_force(image, phi, params)
