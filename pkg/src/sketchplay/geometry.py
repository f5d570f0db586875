"""Polyline simplification and Bezier resampling for sketch synthesis."""

from __future__ import annotations

import numpy as np


def _as_points(line) -> np.ndarray:
    pts = np.asarray(line, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise ValueError(f"polyline must be (n>=2, 2), got {pts.shape}")
    return pts


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Perpendicular distance from p to the infinite line a-b (or to a when a==b)."""
    d = b - a
    n2 = float(d @ d)
    if n2 == 0.0:
        return float(np.hypot(*(p - a)))
    # Cross-product magnitude over segment length.
    return abs(float(d[0] * (a[1] - p[1]) - (a[0] - p[0]) * d[1])) / np.sqrt(n2)


def _rdp_keep(pts: np.ndarray, eps: float, lo: int, hi: int, keep: np.ndarray) -> None:
    dmax = 0.0
    idx = -1
    for i in range(lo + 1, hi):
        d = point_segment_distance(pts[i], pts[lo], pts[hi])
        if d > dmax:
            dmax = d
            idx = i
    if idx >= 0 and dmax > eps:
        keep[idx] = True
        _rdp_keep(pts, eps, lo, idx, keep)
        _rdp_keep(pts, eps, idx, hi, keep)


def rdp_simplify(line, epsilon: float) -> np.ndarray:
    """Ramer-Douglas-Peucker simplification.

    Returns the kept subsequence (always including both endpoints); every
    discarded point lies within `epsilon` of the chord spanning it. With
    epsilon == 0 the input is returned unchanged.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    pts = _as_points(line)
    if epsilon == 0.0 or len(pts) == 2:
        return pts.copy()
    keep = np.zeros(len(pts), dtype=bool)
    keep[0] = keep[-1] = True
    _rdp_keep(pts, epsilon, 0, len(pts) - 1, keep)
    return pts[keep]


def rdp_keep_mask(line, epsilon: float) -> np.ndarray:
    """Boolean keep-mask variant of `rdp_simplify` (same rule)."""
    pts = _as_points(line)
    keep = np.zeros(len(pts), dtype=bool)
    keep[0] = keep[-1] = True
    if epsilon == 0.0:
        keep[:] = True
    elif len(pts) > 2:
        _rdp_keep(pts, epsilon, 0, len(pts) - 1, keep)
    return keep


def bezier_point(control: np.ndarray, t: float) -> np.ndarray:
    """De Casteljau evaluation of the Bezier curve at parameter t."""
    pts = np.array(control, dtype=float)
    while len(pts) > 1:
        pts = (1.0 - t) * pts[:-1] + t * pts[1:]
    return pts[0]


def _bernstein_eval(control: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Curve points at parameters `ts` via the Bernstein basis."""
    n = len(control) - 1
    basis = np.zeros((len(ts), n + 1))
    basis[:, 0] = (1.0 - ts) ** n
    coeff = 1.0
    for k in range(1, n + 1):
        coeff = coeff * (n - k + 1) / k
        basis[:, k] = coeff * ts**k * (1.0 - ts) ** (n - k)
    return basis @ control


def _bezier_dense(control: np.ndarray, m: int) -> np.ndarray:
    """Curve sampled at m+1 uniformly spaced parameters."""
    return _bernstein_eval(control, np.linspace(0.0, 1.0, m + 1))


def bezier_resample(control, n: int, dense: int = 4096) -> np.ndarray:
    """Sample n points on the Bezier curve, uniformly spaced in arc length.

    The control points are the input polyline; endpoints are returned
    exactly. Arc length is measured on a dense chordal subdivision of the
    curve, and sample parameters are found by inverting the cumulative
    length with linear interpolation.
    """
    if n < 2:
        raise ValueError("need at least 2 samples")
    control = _as_points(control)
    curve = _bezier_dense(control, dense)
    seg = np.linalg.norm(np.diff(curve, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if total == 0.0:
        out = np.repeat(control[:1], n, axis=0)
        out[-1] = control[-1]
        return out
    targets = np.linspace(0.0, total, n)
    ts = np.interp(targets, cum, np.linspace(0.0, 1.0, dense + 1))
    out = _bernstein_eval(control, ts)
    out[0] = control[0]
    out[-1] = control[-1]
    return out


def polyline_length(line) -> float:
    """Total chord length of a polyline."""
    pts = np.asarray(line, dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        return 0.0
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())
