"""Evolution driver shared by all models."""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Any, List, Optional

import numpy as np

from . import chanvese, contour, drlse, edgebase, field, localized, rsf

ALGORITHMS = ("edgeflow", "chanvese", "drlse", "rsf", "localized")

DEFAULT_MAX_ITERS = {
    "edgeflow": 500,
    "chanvese": 500,
    "drlse": 1000,
    "rsf": 400,
    "localized": 1000,
}

PARAM_TYPES = {
    "edgeflow": edgebase.EdgeflowParams,
    "chanvese": chanvese.CvParams,
    "drlse": drlse.DrlseParams,
    "rsf": rsf.RsfParams,
    "localized": localized.LocalizedParams,
}

# initial level set mode each model expects by default
INIT_MODE = {
    "edgeflow": "sdf",
    "chanvese": "sdf",
    "drlse": "binary_step",
    "rsf": "sdf",
    "localized": "sdf",
}


class InputError(ValueError):
    pass


class NumericalError(RuntimeError):
    def __init__(self, iteration, message="non-finite values in phi"):
        super().__init__(f"{message} at iteration {iteration}")
        self.iteration = iteration


@dataclass
class AlgorithmParams:
    algo: str = "chanvese"
    model: Any = None
    max_iters: Optional[int] = None
    check_every: int = 10
    converge_patience: int = 3
    enable_convergence: bool = True

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}")
        if self.model is None:
            self.model = PARAM_TYPES[self.algo]()
        if self.max_iters is None:
            self.max_iters = DEFAULT_MAX_ITERS[self.algo]

    def validate(self):
        if not isinstance(self.model, PARAM_TYPES[self.algo]):
            raise ValueError(f"{self.algo} needs {PARAM_TYPES[self.algo].__name__}")
        self.model.validate()
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.check_every < 1 or self.converge_patience < 1:
            raise ValueError("check_every and converge_patience must be >= 1")
        if self.check_every > self.max_iters:
            raise ValueError("check_every must not exceed max_iters")


@dataclass
class SegmentationResult:
    phi_final: np.ndarray
    contours: list
    iterations_run: int
    wall_ms: float
    energy_trace: List[tuple] = dc_field(default_factory=list)
    converged: bool = False
    reinit_calls: int = 0

    @property
    def mask(self):
        return self.phi_final < 0


class _Model:
    """Binds one algorithm's step/energy to a fixed image."""

    def __init__(self, algo, image, p):
        self.algo, self.image, self.p = algo, image, p
        self.g = None
        self.consts = None
        if algo in ("edgeflow", "drlse"):
            self.g = edgebase.edge_indicator(image, p.sigma, p.edge_scale)
        elif algo == "rsf":
            self.consts = rsf.rsf_constants(image, p.sigma_k)

    def step(self, phi):
        a, p = self.algo, self.p
        if a == "edgeflow":
            return edgebase.edgeflow_step(phi, self.g, p.dt)
        if a == "chanvese":
            return chanvese.cv_step(self.image, phi, p)
        if a == "drlse":
            return drlse.drlse_step(phi, self.g, p)
        if a == "rsf":
            return rsf.rsf_step(self.image, phi, p, self.consts)
        return localized.localized_step(self.image, phi, p)

    def energy(self, phi):
        a, p = self.algo, self.p
        if a == "edgeflow":
            return edgebase.edgeflow_energy(phi, self.g, p.eps)
        if a == "chanvese":
            return chanvese.cv_energy(self.image, phi, None, p.lambda_len, p.eps)
        if a == "drlse":
            return drlse.drlse_energy(phi, self.g, p)
        if a == "rsf":
            return rsf.rsf_energy(self.image, phi, p, self.consts)
        return localized.localized_energy(self.image, phi, p)

    def reinit_due(self, iteration):
        every = getattr(self.p, "reinit_every", 0)
        return bool(every) and self.p.reinit_steps > 0 and iteration % every == 0


def convergence_check(prev_sign, phi):
    """Compare the interior mask ``{phi < 0}`` with the previous snapshot."""
    new_sign = np.asarray(phi) < 0
    if prev_sign is None:
        return False, new_sign
    if prev_sign.shape != new_sign.shape:
        raise InputError("sign masks differ in shape")
    return bool(np.array_equal(prev_sign, new_sign)), new_sign


def evolve(image, phi0, params: AlgorithmParams, trace_energy=True):
    """Run ``params.algo`` from ``phi0`` until the budget or sign-pattern convergence.

    Energy and the interior mask are sampled every ``check_every`` iterations
    (including iteration 0). Wall time covers the loop only, excluding the
    energy evaluations and contour extraction.
    """
    image = np.asarray(image, dtype=float)
    phi = np.array(phi0, dtype=float)
    if image.ndim != 2 or image.shape != phi.shape:
        raise InputError(f"image {image.shape} and phi0 {phi.shape} must be equal 2-D shapes")
    if not (np.isfinite(image).all() and np.isfinite(phi).all()):
        raise InputError("image and phi0 must be finite")
    params.validate()

    t0 = time.perf_counter()
    # every model sees intensity differences only; the shift makes a flat
    # image give exactly zero data force instead of rounding noise
    model = _Model(params.algo, image - image.flat[0], params.model)
    trace = []
    energy_s = 0.0

    def record(iteration):
        nonlocal energy_s
        if trace_energy:
            te = time.perf_counter()
            trace.append((iteration, model.energy(phi)))
            energy_s += time.perf_counter() - te

    record(0)
    sign = phi < 0
    stable = 0
    converged = False
    reinits = 0
    it = 0
    while it < params.max_iters:
        phi = model.step(phi)
        it += 1
        if model.reinit_due(it):
            p = params.model
            phi = field.sussman_reinit(phi, p.reinit_steps, p.reinit_dtau)
            reinits += 1
        if not np.isfinite(phi).all():
            raise NumericalError(it)
        if it % params.check_every == 0:
            record(it)
            same, sign = convergence_check(sign, phi)
            stable = stable + 1 if same else 0
            if params.enable_convergence and stable >= params.converge_patience:
                converged = True
                break
    # energy sampling is diagnostics, not part of the evolution cost
    wall_ms = (time.perf_counter() - t0 - energy_s) * 1000.0
    return SegmentationResult(
        phi_final=phi,
        contours=contour.extract_zero_set(phi),
        iterations_run=it,
        wall_ms=wall_ms,
        energy_trace=trace,
        converged=converged,
        reinit_calls=reinits,
    )


def dice(a, b):
    """Dice overlap ``2|A & B| / (|A| + |B|)`` of two boolean masks."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    total = a.sum() + b.sum()
    if total == 0:
        return 1.0
    return float(2.0 * np.logical_and(a, b).sum() / total)
