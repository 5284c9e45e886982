import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from levelseg import raster  # noqa: E402

DISK = raster.SynthSpec(kind="disk", width=128, height=128, foreground=0.8, background=0.2,
                        noise_sigma=0.05, seed=42)
# circle four pixels outside the 32-pixel disk
DISK_INIT = "circle:64,64,36"

RAMP = raster.SynthSpec(kind="ramp", width=128, height=128, foreground=0.4, background=0.3,
                        noise_sigma=0.05, seed=42, slope=0.3)
RAMP_INIT = "circle:64,64,36"


@pytest.fixture(scope="session")
def disk_image():
    return raster.synth(DISK)


@pytest.fixture(scope="session")
def disk_truth():
    return raster.truth_mask(DISK)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# acceptance outcomes: criterion number -> list of (label, ok, detail)
ACCEPTANCE = {}


def record(criterion, label, ok, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{label}: {'ok' if ok else 'FAILED'} {d}".rstrip() for label, ok, d in parts)
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {detail}")
