"""Zero level set extraction (marching squares), filtering and export."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from .raster import RasterImage, atomic_write

DEFAULT_MIN_LEN = 30.0


@dataclass
class Contour:
    """Polyline of sub-pixel ``(x, y)`` vertices; closure is implicit."""

    vertices: np.ndarray
    closed: bool = False

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)

    def __len__(self):
        return len(self.vertices)


# corner bits: top-left 1, top-right 2, bottom-right 4, bottom-left 8
# edges: 0 top, 1 right, 2 bottom, 3 left
_SEGMENTS = {
    0: (), 15: (),
    1: ((0, 3),), 14: ((0, 3),),
    2: ((0, 1),), 13: ((0, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    8: ((2, 3),), 7: ((2, 3),),
    3: ((1, 3),), 12: ((1, 3),),
    6: ((0, 2),), 9: ((0, 2),),
}
# saddles keyed by (case, centre inside)
_SADDLES = {
    (5, True): ((0, 1), (2, 3)),
    (5, False): ((0, 3), (1, 2)),
    (10, True): ((0, 3), (1, 2)),
    (10, False): ((0, 1), (2, 3)),
}


def _edge_key(i, j, e):
    if e == 0:
        return ("h", i, j)
    if e == 2:
        return ("h", i + 1, j)
    if e == 3:
        return ("v", i, j)
    return ("v", i, j + 1)


def _edge_point(phi, key):
    kind, i, j = key
    if kind == "h":
        a, b = phi[i, j], phi[i, j + 1]
        return (j + a / (a - b), float(i))
    a, b = phi[i, j], phi[i + 1, j]
    return (float(j), i + a / (a - b))


def cell_segments(phi):
    """Marching-squares segments as pairs of edge keys, one list entry per segment."""
    phi = np.where(phi == 0, 1e-12, np.asarray(phi, dtype=float))
    inside = phi < 0
    case = (inside[:-1, :-1] * 1 + inside[:-1, 1:] * 2
            + inside[1:, 1:] * 4 + inside[1:, :-1] * 8)
    centre = (phi[:-1, :-1] + phi[:-1, 1:] + phi[1:, 1:] + phi[1:, :-1]) * 0.25
    segs = []
    for i, j in zip(*np.nonzero((case != 0) & (case != 15))):
        c = int(case[i, j])
        pairs = _SADDLES[(c, bool(centre[i, j] < 0))] if c in (5, 10) else _SEGMENTS[c]
        for e0, e1 in pairs:
            segs.append((_edge_key(i, j, e0), _edge_key(i, j, e1)))
    return phi, segs


def extract_zero_set(phi):
    """Trace the zero level set into maximal chains.

    Chains ending on the image border are open; chains that return to their
    start are closed.
    """
    phi, segs = cell_segments(phi)
    adj = {}
    for k, (a, b) in enumerate(segs):
        adj.setdefault(a, []).append(k)
        adj.setdefault(b, []).append(k)
    used = np.zeros(len(segs), dtype=bool)

    def walk(start):
        chain = [start]
        node = start
        while True:
            nxt = [k for k in adj[node] if not used[k]]
            if not nxt:
                return chain
            k = nxt[0]
            used[k] = True
            a, b = segs[k]
            node = b if a == node else a
            chain.append(node)

    contours = []
    # open chains start at degree-1 nodes (border crossings)
    for node in sorted(adj, key=lambda n: (n[1], n[2], n[0])):
        if len(adj[node]) == 1 and not used[adj[node][0]]:
            chain = walk(node)
            contours.append(Contour([_edge_point(phi, n) for n in chain], closed=False))
    for k in range(len(segs)):
        if used[k]:
            continue
        chain = walk(segs[k][0])
        closed = len(chain) > 2 and chain[-1] == chain[0]
        if closed:
            chain = chain[:-1]
        contours.append(Contour([_edge_point(phi, n) for n in chain], closed=closed))
    return contours


def contour_length(c: Contour):
    v = c.vertices
    if len(v) < 2:
        return 0.0
    if c.closed:
        v = np.vstack([v, v[:1]])
    return float(np.sum(np.hypot(*np.diff(v, axis=0).T)))


def filter_by_length(contours, min_len=DEFAULT_MIN_LEN):
    if min_len < 0:
        raise ValueError("min_len must be >= 0")
    return [c for c in contours if contour_length(c) >= min_len]


def bresenham(x0, y0, x1, y1):
    """Integer pixels on the segment from ``(x0, y0)`` to ``(x1, y1)``."""
    pts = []
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        pts.append((x0, y0))
        if x0 == x1 and y0 == y1:
            return pts
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def render_overlay(image, contours, maxval=255) -> RasterImage:
    """Grey image with contour pixels painted pure red."""
    gray = np.rint(np.clip(np.asarray(image, dtype=float), 0.0, 1.0) * maxval).astype(np.int64)
    h, w = gray.shape
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    for c in contours:
        pts = [(int(round(x)), int(round(y))) for x, y in c.vertices]
        if c.closed and len(pts) > 1:
            pts.append(pts[0])
        pixels = list(pts[:1])
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            pixels.extend(bresenham(x0, y0, x1, y1))
        for x, y in pixels:
            if 0 <= x < w and 0 <= y < h:
                rgb[y, x] = (maxval, 0, 0)
    return RasterImage(rgb, maxval)


def contours_csv(contours) -> str:
    out = io.StringIO()
    out.write("contour_id,vertex_index,x,y\n")
    for cid, c in enumerate(contours):
        for vi, (x, y) in enumerate(c.vertices):
            out.write(f"{cid},{vi},{x:.6f},{y:.6f}\n")
    return out.getvalue()


def contours_svg(contours, width, height) -> str:
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<g fill="none" stroke="red" stroke-width="0.5">',
    ]
    for c in contours:
        pts = " ".join(f"{x:.6f},{y:.6f}" for x, y in c.vertices)
        tag = "polygon" if c.closed else "polyline"
        lines.append(f'<{tag} points="{pts}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def export_contours(contours, fmt, path, width=None, height=None):
    """Write contours as ``csv`` or ``svg`` (the latter needs the image size)."""
    if fmt == "csv":
        text = contours_csv(contours)
    elif fmt == "svg":
        if width is None or height is None:
            raise ValueError("svg export needs width and height")
        text = contours_svg(contours, width, height)
    else:
        raise ValueError(f"unknown contour format {fmt!r}")
    try:
        atomic_write(path, text.encode("ascii"))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {os.fspath(path)}: {exc.strerror}") from exc
