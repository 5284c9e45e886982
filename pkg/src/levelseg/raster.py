"""Netpbm I/O, grayscale conversion, rescaling and synthetic test images."""
from __future__ import annotations

import os
import re
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

DEFAULT_MAX_DIM = 256
LUMA = (0.299, 0.587, 0.114)


class PnmError(ValueError):
    """Base class for Netpbm decoding problems."""


class PnmFormatError(PnmError):
    pass


class PnmParseError(PnmError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class PnmTruncatedError(PnmError):
    pass


class SynthSpecError(ValueError):
    pass


@dataclass
class RasterImage:
    """Integer raster; ``samples`` has shape ``(height, width, channels)``.

    Flattening ``samples`` gives the row-major, channel-interleaved order of
    the file payload.
    """

    samples: np.ndarray
    maxval: int = 255
    comments: list = field(default_factory=list)

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim == 2:
            s = s[:, :, None]
        if s.ndim != 3 or s.shape[2] not in (1, 3):
            raise ValueError(f"samples must be (h, w, 1|3), got {s.shape}")
        if not 1 <= int(self.maxval) <= 65535:
            raise ValueError(f"maxval out of range: {self.maxval}")
        if s.size and (s.min() < 0 or s.max() > self.maxval):
            raise ValueError("sample outside [0, maxval]")
        self.samples = s.astype(np.uint16 if self.maxval > 255 else np.uint8)
        self.maxval = int(self.maxval)

    @property
    def height(self):
        return self.samples.shape[0]

    @property
    def width(self):
        return self.samples.shape[1]

    @property
    def channels(self):
        return self.samples.shape[2]


_MAGIC = {b"P2": (1, False), b"P3": (3, False), b"P5": (1, True), b"P6": (3, True)}
_WS = b" \t\r\n\v\f"


class _HeaderReader:
    def __init__(self, data):
        self.data = data
        self.pos = 2
        self.comments = []

    def skip(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos:self.pos + 1]
            if ch in _WS:
                self.pos += 1
            elif ch == b"#":
                end = data.find(b"\n", self.pos)
                end = len(data) if end < 0 else end
                self.comments.append(data[self.pos + 1:end].decode("latin-1").strip())
                self.pos = end
            else:
                break

    def integer(self, what):
        self.skip()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if start >= len(self.data):
                raise PnmTruncatedError(f"file ends before {what}")
            raise PnmParseError(f"expected integer for {what}", start)
        return int(self.data[start:self.pos]), start


def parse_pnm(data: bytes) -> RasterImage:
    magic = data[:2]
    if magic not in _MAGIC:
        raise PnmFormatError(f"unsupported magic number {magic!r}")
    channels, binary = _MAGIC[magic]
    rd = _HeaderReader(data)
    width, off = rd.integer("width")
    if width < 1:
        raise PnmParseError("width must be positive", off)
    height, off = rd.integer("height")
    if height < 1:
        raise PnmParseError("height must be positive", off)
    maxval, off = rd.integer("maxval")
    if not 1 <= maxval <= 65535:
        raise PnmParseError(f"maxval {maxval} out of range", off)
    count = width * height * channels

    if binary:
        if rd.pos >= len(data) or data[rd.pos:rd.pos + 1] not in _WS:
            raise PnmTruncatedError("missing whitespace after maxval")
        start = rd.pos + 1
        nbytes = 2 if maxval > 255 else 1
        payload = data[start:start + count * nbytes]
        if len(payload) < count * nbytes:
            raise PnmTruncatedError(
                f"payload has {len(payload)} bytes, expected {count * nbytes}")
        dtype = ">u2" if nbytes == 2 else "u1"
        samples = np.frombuffer(payload, dtype=dtype).astype(np.int64)
    else:
        body = data[rd.pos:]
        tokens = []
        for m in re.finditer(rb"#[^\n]*|\S+", body):
            tok = m.group()
            if tok.startswith(b"#"):
                continue
            if not tok.isdigit():
                raise PnmParseError(f"bad sample token {tok[:16]!r}", rd.pos + m.start())
            tokens.append(int(tok))
            if len(tokens) == count:
                break
        if len(tokens) < count:
            raise PnmTruncatedError(f"found {len(tokens)} samples, expected {count}")
        samples = np.array(tokens, dtype=np.int64)

    if samples.max(initial=0) > maxval:
        raise PnmParseError("sample exceeds maxval", rd.pos)
    return RasterImage(samples.reshape(height, width, channels), maxval, rd.comments)


def load_pnm(path) -> RasterImage:
    """Read a PGM (P2/P5) or PPM (P3/P6) file."""
    with open(path, "rb") as fh:
        return parse_pnm(fh.read())


def encode_pnm(img: RasterImage) -> bytes:
    magic = b"P6" if img.channels == 3 else b"P5"
    header = [magic]
    header += [b"# " + c.encode("latin-1") for c in img.comments]
    header.append(b"%d %d" % (img.width, img.height))
    header.append(b"%d" % img.maxval)
    dtype = ">u2" if img.maxval > 255 else "u1"
    return b"\n".join(header) + b"\n" + img.samples.astype(dtype).tobytes()


def atomic_write(path, data: bytes):
    """Write ``data`` to ``path`` through a temp file and rename."""
    path = os.fspath(path)
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_pnm(img: RasterImage, path):
    """Write binary P5/P6; samples wider than a byte go big-endian."""
    atomic_write(path, encode_pnm(img))


def to_grayscale_normalized(img: RasterImage) -> np.ndarray:
    s = img.samples.astype(float)
    if img.channels == 3:
        s = LUMA[0] * s[..., 0] + LUMA[1] * s[..., 1] + LUMA[2] * s[..., 2]
    else:
        s = s[..., 0]
    return np.clip(s / img.maxval, 0.0, 1.0)


def from_field(f, maxval=255, comments=None) -> RasterImage:
    """Quantise a [0, 1] field to a single-channel raster."""
    q = np.rint(np.clip(np.asarray(f, dtype=float), 0.0, 1.0) * maxval).astype(np.int64)
    return RasterImage(q, maxval, list(comments or []))


def rescale_max_dim(f, max_dim=DEFAULT_MAX_DIM):
    """Bilinear downscale so the longer side equals ``max_dim``.

    Fields already within the cap are returned unchanged.
    """
    if max_dim < 8:
        raise ValueError("max_dim must be >= 8")
    f = np.asarray(f, dtype=float)
    h, w = f.shape
    if max(h, w) <= max_dim:
        return f
    scale = max_dim / max(h, w)
    nh = max_dim if h >= w else max(1, int(round(h * scale)))
    nw = max_dim if w > h else max(1, int(round(w * scale)))
    # align corners: output sample i maps to input coordinate i*(n-1)/(m-1)
    ys = np.linspace(0.0, h - 1.0, nh)
    xs = np.linspace(0.0, w - 1.0, nw)
    yy, xx = np.meshgrid(ys, xs, indexing="ij")
    return ndimage.map_coordinates(f, [yy, xx], order=1, mode="nearest")


@dataclass
class SynthSpec:
    """Description of a synthetic test image.

    ``disk`` and ``ramp`` use ``center``/``radius`` (defaults: image centre,
    a quarter of the shorter side); ``ramp`` adds ``slope * col / (width - 1)``
    on top of the disk image. ``tworegion`` puts the foreground left of
    column ``split``. ``checker`` alternates squares of side ``cell``.
    """

    kind: str = "disk"
    width: int = 128
    height: int = 128
    foreground: float = 0.8
    background: float = 0.2
    noise_sigma: float = 0.0
    seed: int = 0
    center: Optional[tuple] = None
    radius: Optional[float] = None
    split: Optional[int] = None
    slope: float = 0.3
    cell: int = 16

    def validate(self):
        if self.kind not in SYNTH_KINDS:
            raise SynthSpecError(f"unknown synthetic kind {self.kind!r}")
        if self.width < 8 or self.height < 8:
            raise SynthSpecError("width and height must be >= 8")
        for name in ("foreground", "background"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise SynthSpecError(f"{name} must lie in [0, 1], got {v}")
        if self.noise_sigma < 0:
            raise SynthSpecError("noise_sigma must be >= 0")
        if self.radius is not None and self.radius <= 0:
            raise SynthSpecError("radius must be positive")
        if self.cell < 1:
            raise SynthSpecError("cell must be >= 1")

    def resolved_center(self):
        if self.center is not None:
            return float(self.center[0]), float(self.center[1])
        return self.width / 2.0, self.height / 2.0

    def resolved_radius(self):
        return float(self.radius) if self.radius is not None else min(self.width, self.height) / 4.0


SYNTH_KINDS = ("disk", "tworegion", "ramp", "checker")


def truth_mask(spec: SynthSpec) -> np.ndarray:
    """Boolean foreground mask of a synthetic image (noise-free)."""
    spec.validate()
    yy, xx = np.mgrid[0:spec.height, 0:spec.width].astype(float)
    if spec.kind in ("disk", "ramp"):
        cx, cy = spec.resolved_center()
        r = spec.resolved_radius()
        return (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    if spec.kind == "tworegion":
        split = spec.split if spec.split is not None else spec.width // 2
        return xx < split
    cell = spec.cell
    return ((xx // cell + yy // cell) % 2) == 0


def synth(spec: SynthSpec) -> np.ndarray:
    """Render ``spec``; noise comes from numpy's PCG64 seeded with ``spec.seed``."""
    mask = truth_mask(spec)
    f = np.where(mask, spec.foreground, spec.background).astype(float)
    if spec.kind == "ramp":
        cols = np.arange(spec.width, dtype=float)
        f = f + spec.slope * cols[None, :] / (spec.width - 1)
    if spec.noise_sigma > 0:
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        f = f + rng.normal(0.0, spec.noise_sigma, size=f.shape)
    return np.clip(f, 0.0, 1.0)
