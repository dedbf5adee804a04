"""Planar constructions: angles between rays, radial projection, tangent points.

All operations assume the Euclidean inner product on R^2.  The tangent
construction applies to points on or outside the Euclidean unit circle,
which is where sphere points live once the norm is normalized so that the
Euclidean ball sits inside the unit ball.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .norms import Norm, as_vec, golden_min, sphere_point, sphere_points, TWO_PI


class GeometryError(ValueError):
    """Degenerate input to a geometric primitive."""


@dataclass(frozen=True)
class Ray:
    """The ray from origin through a distinct second point."""

    origin: np.ndarray
    through: np.ndarray

    def __post_init__(self):
        o = as_vec(self.origin)
        t = as_vec(self.through)
        if math.hypot(*(t - o)) <= 1e-12:
            raise GeometryError("ray needs two distinct points")
        object.__setattr__(self, "origin", o)
        object.__setattr__(self, "through", t)

    @property
    def direction(self) -> np.ndarray:
        d = self.through - self.origin
        return d / math.hypot(*d)


def radial_project(x) -> np.ndarray:
    """x / ||x||_E, the radial projection onto the Euclidean unit circle."""
    x = as_vec(x)
    n = math.hypot(x[0], x[1])
    if n == 0.0:
        raise GeometryError("cannot radially project the origin")
    return x / n


def angle_between(vertex, y, z) -> float:
    """Angle in [0, pi] between the rays from vertex through y and through z."""
    vertex = as_vec(vertex)
    a = as_vec(y) - vertex
    b = as_vec(z) - vertex
    na = math.hypot(a[0], a[1])
    nb = math.hypot(b[0], b[1])
    if na < 1e-12 or nb < 1e-12:
        raise GeometryError("ray endpoint coincides with the vertex")
    c = float(a @ b) / (na * nb)
    return math.acos(min(1.0, max(-1.0, c)))


def perp(x, toward) -> np.ndarray:
    """Euclidean-unit vector orthogonal to x, oriented so <perp, toward> >= 0.

    Exact ties resolve to the counterclockwise rotation of x/||x||_E.
    """
    n = radial_project(x)
    ccw = np.array([-n[1], n[0]])
    d = float(ccw @ as_vec(toward))
    return -ccw if d < 0.0 else ccw


@dataclass(frozen=True)
class TangentData:
    """Tangent points of the Euclidean unit circle seen from x (||x||_E >= 1).

    tau = a + b is the tangent point on the side of the chosen perpendicular;
    tau2 is its reflection across span(x).
    """

    x: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tau: np.ndarray
    tau2: np.ndarray


def tangent_points(x, orient_toward) -> TangentData:
    x = as_vec(x)
    ne = math.hypot(x[0], x[1])
    if ne < 1.0 - 1e-9:
        raise GeometryError(f"no tangent line from inside the unit circle (||x||_E = {ne})")
    a = x / (ne * ne)
    s = math.sqrt(max(1.0 - 1.0 / (ne * ne), 0.0))
    b = s * perp(x, orient_toward)
    return TangentData(x=x, a=a, b=b, tau=a + b, tau2=a - b)


def ray_between(x, v, w, y) -> bool:
    """Does the ray from x through y meet the closed segment [v, w]?

    Near-degenerate configurations (direction determinant below 1e-12) fall
    through to the coincident-rays test: true iff all three rays agree.
    """
    x = as_vec(x)
    dy = as_vec(y) - x
    v = as_vec(v)
    w = as_vec(w)
    if np.allclose(dy, 0.0):
        raise GeometryError("y must be distinct from x")
    seg = w - v
    det = dy[0] * (-seg[1]) - dy[1] * (-seg[0])
    if abs(det) < 1e-12:
        return _rays_coincide(dy, v - x) and _rays_coincide(dy, w - x)
    rhs = v - x
    t = (rhs[0] * (-seg[1]) - rhs[1] * (-seg[0])) / det
    s = (dy[0] * rhs[1] - dy[1] * rhs[0]) / det
    return t >= -1e-12 and -1e-12 <= s <= 1.0 + 1e-12


def _rays_coincide(d1: np.ndarray, d2: np.ndarray) -> bool:
    if np.allclose(d2, 0.0):
        return False
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return abs(cross) <= 1e-9 * math.hypot(*d1) * math.hypot(*d2) and float(d1 @ d2) > 0.0


def circle_contact_points(spec: Norm, grid: int = 4096, tol: float = 1e-7) -> np.ndarray:
    """Points of S_X that also lie on the Euclidean unit circle.

    For a normalized norm ||sphere_point(theta)||_E >= 1 everywhere and the
    contacts are tangential minima, so they are located by local golden-
    section minimization over the grid cells around each local minimum.
    """
    thetas = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    pts = sphere_points(spec, thetas)
    e = np.hypot(pts[:, 0], pts[:, 1])
    local_min = (e <= np.roll(e, 1)) & (e <= np.roll(e, -1))
    h = TWO_PI / grid

    def enorm(t: float) -> float:
        p = sphere_point(spec, t)
        return math.hypot(p[0], p[1])

    found = []
    for i in np.flatnonzero(local_min):
        t0 = float(thetas[i])
        tm, fm = golden_min(enorm, t0 - h, t0 + h, tol=1e-8)
        if fm > 1.0 + tol:
            continue
        # The minimum is tangential (flat), so function values alone only
        # locate it to ~sqrt(eps); bisect on a central-difference slope.
        dh = 1e-5
        slope = lambda t: enorm(t + dh) - enorm(t - dh)
        lo, hi = tm - 2.0 * dh, tm + 2.0 * dh
        if slope(lo) < 0.0 < slope(hi):
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if slope(mid) < 0.0:
                    lo = mid
                else:
                    hi = mid
            tm = 0.5 * (lo + hi)
        if enorm(tm) <= 1.0 + tol:
            found.append(tm % TWO_PI)
    if not found:
        return np.empty((0, 2))
    found = np.sort(np.asarray(found))
    keep = [found[0]]
    for t in found[1:]:
        if t - keep[-1] > 1e-9:
            keep.append(t)
    if len(keep) > 1 and (keep[0] + TWO_PI) - keep[-1] <= 1e-9:
        keep.pop()
    return sphere_points(spec, np.asarray(keep))
