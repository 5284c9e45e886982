"""Slow, loop-based reference implementations used to cross-check the library.

Nothing here imports the code under test; each function is written from the
mathematical definition with explicit Python loops.
"""
import math

import numpy as np


def clamp_get(f, i, j):
    h, w = f.shape
    return f[min(max(i, 0), h - 1), min(max(j, 0), w - 1)]


def grad(f):
    h, w = f.shape
    vx = np.zeros((h, w))
    vy = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            vx[i, j] = (clamp_get(f, i, j + 1) - clamp_get(f, i, j - 1)) / 2.0
            vy[i, j] = (clamp_get(f, i + 1, j) - clamp_get(f, i - 1, j)) / 2.0
    return vx, vy


def divergence(vx, vy):
    h, w = vx.shape
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = ((clamp_get(vx, i, j + 1) - clamp_get(vx, i, j - 1))
                         + (clamp_get(vy, i + 1, j) - clamp_get(vy, i - 1, j))) / 2.0
    return out


def heaviside(p, eps):
    if p < -eps:
        return 1.0
    if p > eps:
        return 0.0
    return 0.5 * (1.0 - p / eps - math.sin(math.pi * p / eps) / math.pi)


def delta(p, eps):
    if abs(p) > eps:
        return 0.0
    return (1.0 + math.cos(math.pi * p / eps)) / (2.0 * eps)


def kernel1d(sigma):
    r = math.ceil(3 * sigma)
    vals = [math.exp(-(x * x) / (2 * sigma * sigma)) for x in range(-r, r + 1)]
    s = sum(vals)
    return [v / s for v in vals]


def reflect_index(k, n):
    # scipy "reflect": (d c b a | a b c d | d c b a)
    period = 2 * n
    k = k % period
    return k if k < n else period - 1 - k


def smooth_reflect(f, sigma):
    k = kernel1d(sigma)
    r = len(k) // 2
    h, w = f.shape
    tmp = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            tmp[i, j] = sum(k[t + r] * f[i, reflect_index(j + t, w)] for t in range(-r, r + 1))
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = sum(k[t + r] * tmp[reflect_index(i + t, h), j] for t in range(-r, r + 1))
    return out


def conv_zero(f, sigma):
    """2-D kernel sum with zero padding: ``sum_y K(y - x) f(y)``."""
    k = kernel1d(sigma)
    r = len(k) // 2
    h, w = f.shape
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            s = 0.0
            for a in range(-r, r + 1):
                for b in range(-r, r + 1):
                    ii, jj = i + a, j + b
                    if 0 <= ii < h and 0 <= jj < w:
                        s += k[a + r] * k[b + r] * f[ii, jj]
            out[i, j] = s
    return out


def rsf_errors(image, f1, f2, sigma):
    """Direct double sum ``e_i(x) = sum_y K(y - x) (I(x) - f_i(y))^2``."""
    k = kernel1d(sigma)
    r = len(k) // 2
    h, w = image.shape
    e1 = np.zeros((h, w))
    e2 = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            s1 = s2 = 0.0
            for a in range(-r, r + 1):
                for b in range(-r, r + 1):
                    ii, jj = i + a, j + b
                    if 0 <= ii < h and 0 <= jj < w:
                        kk = k[a + r] * k[b + r]
                        s1 += kk * (image[i, j] - f1[ii, jj]) ** 2
                        s2 += kk * (image[i, j] - f2[ii, jj]) ** 2
            e1[i, j] = s1
            e2[i, j] = s2
    return e1, e2


def local_means(image, phi, radius, eps, i, j):
    """Ball-restricted interior/exterior means at pixel ``(i, j)``."""
    h, w = image.shape
    si = so = wi = wo = 0.0
    R = int(math.ceil(radius))
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            if a * a + b * b >= radius * radius:
                continue
            ii, jj = i + a, j + b
            if 0 <= ii < h and 0 <= jj < w:
                hv = heaviside(phi[ii, jj], eps)
                si += hv * image[ii, jj]
                wi += hv
                so += (1 - hv) * image[ii, jj]
                wo += 1 - hv
    u = si / wi if wi >= 1e-9 else None
    v = so / wo if wo >= 1e-9 else None
    if u is None:
        u = v
    if v is None:
        v = u
    return u, v


def localized_energy(image, phi, radius, eps):
    h, w = image.shape
    R = int(math.ceil(radius))
    total = 0.0
    for i in range(h):
        for j in range(w):
            if abs(phi[i, j]) > eps:
                continue
            u, v = local_means(image, phi, radius, eps, i, j)
            s = 0.0
            for a in range(-R, R + 1):
                for b in range(-R, R + 1):
                    if a * a + b * b >= radius * radius:
                        continue
                    ii, jj = i + a, j + b
                    if 0 <= ii < h and 0 <= jj < w:
                        hv = heaviside(phi[ii, jj], eps)
                        s += hv * (image[ii, jj] - u) ** 2 + (1 - hv) * (image[ii, jj] - v) ** 2
            total += delta(phi[i, j], eps) * s
    return total


def circle_sdf(w, h, cx, cy, r):
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = math.hypot(j - cx, i - cy) - r
    return out


def bresenham_pixels(x0, y0, x1, y1):
    """All pixels a unit-step line visits (textbook integer algorithm)."""
    pts = []
    steep = abs(y1 - y0) > abs(x1 - x0)
    if steep:
        x0, y0, x1, y1 = y0, x0, y1, x1
    flip = x0 > x1
    if flip:
        x0, x1, y0, y1 = x1, x0, y1, y0
    dx, dy = x1 - x0, abs(y1 - y0)
    err = dx // 2
    y = y0
    ystep = 1 if y0 < y1 else -1
    for x in range(x0, x1 + 1):
        pts.append((y, x) if steep else (x, y))
        err -= dy
        if err < 0:
            y += ystep
            err += dx
    return pts


def finite_difference_gradient(energy, phi, pixels, h=1e-4):
    out = []
    for i, j in pixels:
        p = phi.copy()
        p[i, j] += h
        ep = energy(p)
        p[i, j] -= 2 * h
        em = energy(p)
        out.append((ep - em) / (2 * h))
    return np.array(out)


def dice(a, b):
    a = np.asarray(a, bool)
    b = np.asarray(b, bool)
    return 2.0 * (a & b).sum() / (a.sum() + b.sum())
