"""Path lengths and the intrinsic metric on the unit sphere of a planar norm.

The sphere of a planar norm is a closed convex curve, so the infimum over
sphere-constrained paths between two points is realized by the shorter of
the two boundary arcs.  Arc lengths are computed as suprema of inscribed
polyline lengths via dyadic refinement of the angular partition; for
piecewise-linear spheres (polygons, l1, linf) the vertex walk is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import Norm, as_vec, sphere_points, TWO_PI

DEFAULT_TOL = 1e-8
SEGMENT_CAP = 2 ** 20


class OffSphereError(ValueError):
    """Input point does not lie on the unit sphere of the norm."""


class ArcConvergenceError(RuntimeError):
    """Refinement hit the segment cap; carries the last bracket in .result."""

    def __init__(self, message: str, result: "DistanceResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class PolylinePath:
    """Ordered polyline; on_sphere marks paths meant to lie on S_X."""

    points: np.ndarray
    on_sphere: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("polyline needs at least two points of shape (n, 2)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("non-finite polyline point")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class DistanceResult:
    """Intrinsic distance with certified brackets.

    value is the best inscribed-polyline length (a rigorous lower bound);
    upper adds the last refinement increase as a gap estimate.
    """

    value: float
    lower: float
    upper: float
    segments: int
    arc_choice: str  # "ccw" or "cw"

    def to_dict(self) -> dict:
        return {"value": self.value, "lower": self.lower, "upper": self.upper,
                "segments": self.segments, "arc_choice": self.arc_choice}


def angle_of(v) -> float:
    """The theta in [0, 2*pi) with v/||v||_E = (cos theta, sin theta)."""
    v = as_vec(v)
    if v[0] == 0.0 and v[1] == 0.0:
        raise ValueError("angle of the zero vector is undefined")
    return float(np.mod(math.atan2(v[1], v[0]), TWO_PI))


def polyline_length(spec: Norm, path) -> float:
    """Sum of chord norms along the polyline, measured in the given norm."""
    if isinstance(path, PolylinePath):
        pts = path.points
        if path.on_sphere:
            norms = spec.eval_many(pts)
            if np.any(np.abs(norms - 1.0) > 1e-7):
                raise OffSphereError("polyline flagged on_sphere leaves the sphere")
    else:
        pts = np.asarray(path, dtype=float)
    return float(np.sum(spec.eval_many(np.diff(pts, axis=0))))


def euclidean_intrinsic_oracle(x, y) -> float:
    """Exact great-circle arc between two points of the Euclidean unit circle."""
    x = as_vec(x)
    y = as_vec(y)
    for p in (x, y):
        if abs(math.hypot(p[0], p[1]) - 1.0) > 1e-9:
            raise OffSphereError(f"point {p} is not on the Euclidean unit circle")
    chord = math.hypot(x[0] - y[0], x[1] - y[1])
    return 2.0 * math.asin(min(1.0, chord / 2.0))


def _arc_exact(spec: Norm, theta_a: float, theta_b: float) -> DistanceResult:
    corners = spec.corner_angles()
    ks = np.arange(math.floor((theta_a - TWO_PI) / TWO_PI),
                   math.ceil((theta_b + TWO_PI) / TWO_PI) + 1)
    shifted = (corners[None, :] + TWO_PI * ks[:, None]).ravel()
    interior = shifted[(shifted > theta_a + 1e-12) & (shifted < theta_b - 1e-12)]
    thetas = np.concatenate([[theta_a], np.sort(interior), [theta_b]])
    pts = sphere_points(spec, thetas)
    value = float(np.sum(spec.eval_many(np.diff(pts, axis=0))))
    return DistanceResult(value=value, lower=value, upper=value,
                          segments=len(thetas) - 1, arc_choice="ccw")


def arc_length(spec: Norm, theta_a: float, theta_b: float, tol: float = DEFAULT_TOL,
               max_segments: int = SEGMENT_CAP, method: str = "auto") -> DistanceResult:
    """Length of the sphere arc theta_a -> theta_b, measured in the norm.

    method "exact" walks the sphere corners (piecewise-linear spheres only);
    "refine" doubles a uniform partition until the relative increase per
    doubling drops below tol; "auto" picks exact when corners are known.

    The stopping rule of "refine" assumes the sphere is smooth between
    partition points.  On flat edges the chord sums are subdivision
    invariant, so forcing "refine" on a piecewise-linear sphere can stall
    below the true length; auto avoids this by walking the corners.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not (theta_a <= theta_b <= theta_a + TWO_PI + 1e-12):
        raise ValueError("need theta_a <= theta_b <= theta_a + 2*pi")
    if theta_b - theta_a <= 1e-15:
        return DistanceResult(0.0, 0.0, 0.0, 0, "ccw")
    if method not in ("auto", "refine", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if method != "refine" and spec.corner_angles() is not None:
        return _arc_exact(spec, theta_a, theta_b)
    if method == "exact":
        raise ValueError("exact arc walk needs a piecewise-linear sphere")

    def partition(n: int) -> np.ndarray:
        thetas = theta_a + ((theta_b - theta_a) / n) * np.arange(n + 1)
        return sphere_points(spec, thetas)

    def halve(pts: np.ndarray) -> np.ndarray:
        # Refine a dyadic partition in place of a full recompute: only the
        # new midpoint angles need projecting onto the sphere.
        n = len(pts) - 1
        mids = sphere_points(spec, theta_a + (np.arange(n) + 0.5)
                             * ((theta_b - theta_a) / n))
        out = np.empty((2 * n + 1, 2))
        out[::2] = pts
        out[1::2] = mids
        return out

    def length_of(pts: np.ndarray) -> float:
        return float(spec.eval_many(pts[1:] - pts[:-1]).sum())

    n = 16
    prev = length_of(partition(n))
    pts = partition(2 * n)
    cur = length_of(pts)
    gain = cur - prev
    if gain > tol * max(cur, 1e-12):
        # Inscribed lengths of convex arcs converge ~n^-2, so jump close to
        # the needed dyadic level, then resume doubling until the rule holds.
        target = 2 * n * math.sqrt(gain / (tol * max(cur, 1e-12)))
        jump = 2 ** max(5, min(19, math.ceil(math.log2(max(target / 2, 32)))))
        if jump > 2 * n:
            pts = partition(jump)
            prev = length_of(pts)
            n = jump
        else:
            prev = cur
            n = 2 * n
        while True:
            n *= 2
            pts = halve(pts)
            cur = length_of(pts)
            gain = cur - prev
            if gain <= tol * max(cur, 1e-12):
                break
            if 2 * n > max_segments:
                result = DistanceResult(value=cur, lower=cur,
                                        upper=cur + max(gain, 0.0),
                                        segments=n, arc_choice="ccw")
                raise ArcConvergenceError(
                    f"arc refinement did not converge within {max_segments} segments",
                    result)
            prev = cur
    else:
        n = 2 * n
    return DistanceResult(value=cur, lower=cur, upper=cur + max(gain, 0.0),
                          segments=n, arc_choice="ccw")


def intrinsic_distance(spec: Norm, x, y, tol: float = DEFAULT_TOL,
                       method: str = "auto") -> DistanceResult:
    """Shorter of the two boundary arcs between x and y on the unit sphere."""
    x = as_vec(x)
    y = as_vec(y)
    for p in (x, y):
        n = spec.eval(p)
        if abs(n - 1.0) > 1e-7:
            raise OffSphereError(f"point {p} has norm {n}, not on the unit sphere")
    if np.array_equal(x, y):
        return DistanceResult(0.0, 0.0, 0.0, 0, "ccw")
    ta = angle_of(x)
    tb = angle_of(y)
    delta = float(np.mod(tb - ta, TWO_PI))
    ccw = cw = None
    coarse = max(tol, 1e-3)
    if coarse > tol:
        # Screen with cheap brackets first; only the shorter arc needs the
        # full refinement unless the coarse brackets overlap.
        ccw_c = arc_length(spec, ta, ta + delta, tol=coarse, method=method)
        cw_c = arc_length(spec, tb, tb + (TWO_PI - delta), tol=coarse, method=method)
        if ccw_c.upper < cw_c.lower:
            cw = cw_c
        elif cw_c.upper < ccw_c.lower:
            ccw = ccw_c
    if ccw is None:
        ccw = arc_length(spec, ta, ta + delta, tol=tol, method=method)
    if cw is None:
        cw = arc_length(spec, tb, tb + (TWO_PI - delta), tol=tol, method=method)
    if ccw.value <= cw.value + tol:
        return ccw
    return DistanceResult(value=cw.value, lower=cw.lower, upper=cw.upper,
                          segments=cw.segments, arc_choice="cw")


def distance_ratio(spec: Norm, x, y, tol: float = DEFAULT_TOL,
                   method: str = "auto") -> float:
    """intrinsic distance / chord norm; at least 1 up to tolerance."""
    x = as_vec(x)
    y = as_vec(y)
    chord = spec.eval(x - y)
    if chord == 0.0:
        raise ValueError("distance ratio is undefined for x == y")
    return intrinsic_distance(spec, x, y, tol=tol, method=method).value / chord
