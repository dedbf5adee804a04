"""Maximum-area centered ellipse inscribed in the unit ball of a planar norm.

The ellipse {x : x^T M x <= 1} is found as E = L * B_E with L symmetric
positive definite, maximizing log det L subject to ||L a_i||_E <= 1 for the
facet normals a_i of (a supporting-polygon approximation of) the ball.  The
solver is a log-barrier Newton method on the three free entries of L; the
problem is tiny and strictly convex, so this converges fast and to high
accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .norms import (Norm, PolygonNorm, ScaledNorm, SpecError, as_vec,
                    sandwich_constants, sphere_points, TWO_PI)


class JohnSolveError(RuntimeError):
    """Solver ran out of iterations; .best holds the last feasible ellipse."""

    def __init__(self, message: str, best: "Ellipse"):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class Ellipse:
    """Centered ellipse {x : x^T M x <= 1}; doubles as the norm sqrt(x^T M x)."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise SpecError("ellipse matrix must be a finite 2x2 matrix")
        m = 0.5 * (m + m.T)
        eig, vecs = np.linalg.eigh(m)
        if eig[0] <= 1e-12:
            raise SpecError(f"ellipse matrix must be positive definite, eigenvalues {eig}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_sqrt_inv", vecs @ np.diag(1.0 / np.sqrt(eig)) @ vecs.T)

    @property
    def area(self) -> float:
        return math.pi / math.sqrt(float(np.linalg.det(self.m)))

    @property
    def half_axes_map(self) -> np.ndarray:
        """Symmetric L with ellipse = L * (Euclidean unit ball); L = M^(-1/2)."""
        return self._sqrt_inv

    def gauge_many(self, pts: np.ndarray) -> np.ndarray:
        q = np.einsum("ij,jk,ik->i", pts, self.m, pts)
        return np.sqrt(np.maximum(q, 0.0))

    def gauge(self, v) -> float:
        return float(self.gauge_many(as_vec(v)[None, :])[0])

    def boundary(self, samples: int) -> np.ndarray:
        thetas = np.linspace(0.0, TWO_PI, samples, endpoint=False)
        circ = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
        return circ @ self._sqrt_inv.T

    def to_dict(self) -> dict:
        return {"m": self.m.tolist()}


@dataclass(frozen=True)
class JohnCertificate:
    """Sampled evidence for E subset B_X subset sqrt(2)*E."""

    ellipse: Ellipse
    inner_ok: bool
    outer_ok: bool
    worst_inner_margin: float
    worst_outer_margin: float
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ellipse": self.ellipse.to_dict(),
            "inner_ok": bool(self.inner_ok),
            "outer_ok": bool(self.outer_ok),
            "worst_inner_margin": float(self.worst_inner_margin),
            "worst_outer_margin": float(self.worst_outer_margin),
            "witnesses": {k: np.asarray(v).tolist() for k, v in self.witnesses.items()},
        }


def facet_normals(spec: Norm, facets: int = 256) -> np.ndarray:
    """Outward normals a_i of supporting lines <a_i, x> <= 1 of the unit ball.

    Polygons (and rescalings of polygons) contribute their exact edge duals;
    smooth balls are approximated by `facets` tangent directions.
    """
    if isinstance(spec, PolygonNorm):
        return np.asarray(spec._duals)
    if isinstance(spec, ScaledNorm):
        return facet_normals(spec.inner, facets) / spec.factor
    if facets < 8:
        raise SpecError("need at least 8 facets for non-polygonal norms")
    phis = np.linspace(0.0, TWO_PI, facets, endpoint=False)
    dirs = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    h = np.array([spec.support(u) for u in dirs])
    return dirs / h[:, None]


def _barrier_value(theta: np.ndarray, normals: np.ndarray, t: float):
    p, q, s = theta
    det = p * s - q * q
    if det <= 0 or p <= 0:
        return None, None
    g1 = p * normals[:, 0] + q * normals[:, 1]
    g2 = q * normals[:, 0] + s * normals[:, 1]
    slack = 1.0 - (g1 * g1 + g2 * g2)
    if np.any(slack <= 0):
        return None, None
    return -t * math.log(det) - float(np.sum(np.log(slack))), slack


def _barrier_grad_hess(theta: np.ndarray, normals: np.ndarray, t: float):
    p, q, s = theta
    det = p * s - q * q
    a1 = normals[:, 0]
    a2 = normals[:, 1]
    g1 = p * a1 + q * a2
    g2 = q * a1 + s * a2
    slack = 1.0 - (g1 * g1 + g2 * g2)

    v = np.array([s, -2.0 * q, p])  # gradient of det wrt (p, q, s)
    grad_logdet = v / det
    # Jacobians of (g1, g2) wrt (p, q, s), per constraint: shape (m, 3)
    dg1 = np.stack([a1, a2, np.zeros_like(a1)], axis=1)
    dg2 = np.stack([np.zeros_like(a1), a1, a2], axis=1)
    du = 2.0 * (g1[:, None] * dg1 + g2[:, None] * dg2)  # grad of ||L a||^2

    inv_slack = 1.0 / slack
    grad = -t * grad_logdet + du.T @ inv_slack

    A = np.array([[0.0, 0.0, 1.0], [0.0, -2.0, 0.0], [1.0, 0.0, 0.0]])
    h_logdet = A / det - np.outer(v, v) / (det * det)
    h_con = np.einsum("i,ij,ik->jk", inv_slack ** 2, du, du)
    h_g = 2.0 * np.einsum("i,ij,ik->jk", inv_slack, dg1, dg1)
    h_g += 2.0 * np.einsum("i,ij,ik->jk", inv_slack, dg2, dg2)
    hess = -t * h_logdet + h_con + h_g
    return grad, hess


def _solve_max_logdet(normals: np.ndarray, l0: np.ndarray,
                      tol: float = 1e-12, iter_cap: int = 10_000):
    """Barrier path-following for max log det L s.t. ||L a_i|| <= 1, L = L^T > 0."""
    theta = np.array([l0[0, 0], l0[0, 1], l0[1, 1]])
    m = len(normals)
    # Shrink until strictly feasible.
    for _ in range(200):
        val, _ = _barrier_value(theta, normals, 1.0)
        if val is not None:
            break
        theta *= 0.9
    else:
        raise JohnSolveError("could not find a strictly feasible start",
                             _ellipse_from_theta(theta))

    iters = 0
    t = float(max(m, 4))
    t_max = 1e11 * m
    while True:
        # Newton iterations at the current barrier weight.
        for _ in range(100):
            if iters >= iter_cap:
                raise JohnSolveError("iteration cap exceeded", _ellipse_from_theta(theta))
            iters += 1
            grad, hess = _barrier_grad_hess(theta, normals, t)
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                step = -grad / max(np.linalg.norm(grad), 1.0)
            decrement = float(-grad @ step)
            if decrement <= 0:
                step = -grad / max(np.linalg.norm(grad), 1.0)
                decrement = float(-grad @ step)
            if decrement < tol * t:
                break
            f0, _ = _barrier_value(theta, normals, t)
            alpha = 1.0
            for _ in range(60):
                cand = theta + alpha * step
                f1, _ = _barrier_value(cand, normals, t)
                if f1 is not None and f1 <= f0 - 1e-4 * alpha * decrement:
                    theta = cand
                    break
                alpha *= 0.5
            else:
                break
        if t >= t_max:
            return theta, iters
        t = min(t * 20.0, t_max)


def _ellipse_from_theta(theta: np.ndarray) -> Ellipse:
    l = np.array([[theta[0], theta[1]], [theta[1], theta[2]]])
    return Ellipse(m=np.linalg.inv(l @ l))


def inner_john_ellipse(spec: Norm, facets: int = 256, tol: float = 1e-12) -> Ellipse:
    """Maximum-area centered ellipse inscribed in the unit ball of the norm."""
    normals = facet_normals(spec, facets)
    r = sandwich_constants(spec).r
    l0 = 0.999 * r * np.eye(2)
    theta, _ = _solve_max_logdet(normals, l0, tol=tol)
    return _ellipse_from_theta(theta)


def verify_john(spec: Norm, ellipse: Ellipse, samples: int = 4096,
                tol: float = 1e-6) -> JohnCertificate:
    """Sample both boundaries and certify E subset B_X subset sqrt(2)*E."""
    if samples < 64:
        raise ValueError("need at least 64 boundary samples")
    boundary = ellipse.boundary(samples)
    inner_slack = 1.0 - spec.eval_many(boundary)
    i = int(np.argmin(inner_slack))

    thetas = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    sphere = sphere_points(spec, thetas)
    outer_slack = math.sqrt(2.0) - ellipse.gauge_many(sphere)
    j = int(np.argmin(outer_slack))

    return JohnCertificate(
        ellipse=ellipse,
        inner_ok=bool(inner_slack[i] >= -tol),
        outer_ok=bool(outer_slack[j] >= -tol),
        worst_inner_margin=float(inner_slack[i]),
        worst_outer_margin=float(outer_slack[j]),
        witnesses={"inner": boundary[i], "outer": sphere[j]},
    )


def euclidean_from_ellipse(ellipse: Ellipse) -> Norm:
    """The Euclidean norm whose unit ball is the given ellipse."""
    from .norms import EllipseNorm

    return EllipseNorm(m=ellipse.m)
