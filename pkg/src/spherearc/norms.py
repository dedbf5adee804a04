"""Symmetric norms on the plane.

A norm is represented by its unit ball: an Lp ball, a symmetric convex
polygon, an ellipse x^T M x <= 1, a two-dimensional section of a higher
dimensional norm, or a rescaling of any of these.  Everything needed
downstream — gauge evaluation, points on the unit sphere, the Euclidean
sandwich constants r*B_E subset B_X subset R*B_E — lives here.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .report import CheckReport

TWO_PI = 2.0 * math.pi


class SpecError(ValueError):
    """Malformed norm specification (bad parameters or bad JSON)."""


def as_vec(v) -> np.ndarray:
    """Coerce to a finite float vector of shape (2,)."""
    a = np.asarray(v, dtype=float)
    if a.shape != (2,):
        raise SpecError(f"expected a 2-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SpecError(f"non-finite vector {a}")
    return a


def cross2(a: np.ndarray, b: np.ndarray):
    """z-component of the cross product of stacked (or single) 2-vectors."""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass(frozen=True)
class SandwichConstants:
    """Extremal scalars with r*B_E subset B_X subset R*B_E; k = R/r."""

    r: float
    R: float

    @property
    def k(self) -> float:
        return self.R / self.r


class Norm:
    """Base class: a symmetric norm on R^2, given by its gauge."""

    def eval(self, v) -> float:
        return float(self.eval_many(as_vec(v)[None, :])[0])

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def support(self, u) -> float:
        """Support function of the unit ball (= the dual norm of u)."""
        raise NotImplementedError

    def corner_angles(self) -> Optional[np.ndarray]:
        """Sorted angles of sphere corners for piecewise-linear balls, else None."""
        return None

    def sandwich(self, resolution: int = 4096) -> SandwichConstants:
        return _sandwich_by_grid(self, resolution)

    def to_json_dict(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Lp norms


@dataclass(frozen=True)
class LpNorm(Norm):
    p: float  # in [1, inf]; math.inf is the explicit "max" case

    def __post_init__(self):
        if not (self.p >= 1.0):  # also rejects NaN
            raise SpecError(f"p must be >= 1, got {self.p}")

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        p = self.p
        if p == 2.0:
            return np.hypot(pts[:, 0], pts[:, 1])
        ax = np.abs(pts[:, 0])
        ay = np.abs(pts[:, 1])
        if math.isinf(p):
            return np.maximum(ax, ay)
        if p == 1.0:
            return ax + ay
        m = np.maximum(ax, ay)
        out = np.zeros_like(m)
        nz = m > 0
        mm = m[nz]
        out[nz] = mm * ((ax[nz] / mm) ** p + (ay[nz] / mm) ** p) ** (1.0 / p)
        return out

    def support(self, u) -> float:
        return LpNorm(_dual_exponent(self.p)).eval(u)

    def corner_angles(self) -> Optional[np.ndarray]:
        if math.isinf(self.p):
            return np.array([0.25, 0.75, 1.25, 1.75]) * math.pi
        if self.p == 1.0:
            return np.array([0.0, 0.5, 1.0, 1.5]) * math.pi
        return None

    def sandwich(self, resolution: int = 4096) -> SandwichConstants:
        p = self.p
        if p == 2.0:
            return SandwichConstants(1.0, 1.0)
        # Extremes sit on the axes and the diagonal.
        diag = math.sqrt(2.0) if math.isinf(p) else 2.0 ** (0.5 - 1.0 / p)
        return SandwichConstants(min(1.0, diag), max(1.0, diag))

    def to_json_dict(self) -> dict:
        return {"type": "lp", "p": "inf" if math.isinf(self.p) else self.p}


def _dual_exponent(p: float) -> float:
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


# ---------------------------------------------------------------------------
# Polygon norms


@dataclass(frozen=True)
class PolygonNorm(Norm):
    """Gauge of a symmetric convex polygon given by its boundary vertices.

    Vertices must be in strictly counterclockwise order with no three
    collinear, and the list must be centrally symmetric:
    vertices[i + m/2] == -vertices[i].
    """

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 4:
            raise SpecError("polygon needs at least 4 vertices of shape (m, 2)")
        if not np.all(np.isfinite(verts)):
            raise SpecError("non-finite polygon vertex")
        m = verts.shape[0]
        if m % 2 != 0:
            raise SpecError("symmetric polygon must have an even vertex count")
        scale = float(np.max(np.abs(verts)))
        if scale <= 0:
            raise SpecError("degenerate polygon")
        if not np.allclose(verts[np.arange(m) - m // 2], -verts, atol=1e-9 * scale):
            raise SpecError("polygon is not symmetric (v and -v must both be vertices)")
        nxt = np.roll(verts, -1, axis=0)
        nxt2 = np.roll(verts, -2, axis=0)
        turn = cross2(nxt - verts, nxt2 - nxt)
        if np.any(turn <= 1e-12 * scale * scale):
            raise SpecError("vertices must be strictly convex in CCW order")
        object.__setattr__(self, "vertices", verts)

        ang = np.arctan2(verts[:, 1], verts[:, 0])
        a0 = ang[0]
        unwrapped = a0 + np.mod(ang - a0, TWO_PI)
        if np.any(np.diff(unwrapped) <= 0):
            raise SpecError("origin is not strictly inside the polygon")
        # Dual vector of each edge (v_i, v_{i+1}): the a with <a, v_i> = <a, v_{i+1}> = 1.
        cr = cross2(verts, nxt)
        duals = np.stack([(nxt[:, 1] - verts[:, 1]) / cr,
                          (verts[:, 0] - nxt[:, 0]) / cr], axis=1)
        object.__setattr__(self, "_ang", unwrapped)
        object.__setattr__(self, "_duals", duals)

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        a0 = self._ang[0]
        s = a0 + np.mod(phi - a0, TWO_PI)
        idx = np.clip(np.searchsorted(self._ang, s, side="right") - 1,
                      0, len(self._ang) - 1)
        return np.einsum("ij,ij->i", self._duals[idx], pts)

    def support(self, u) -> float:
        return float(np.max(self.vertices @ as_vec(u)))

    def corner_angles(self) -> Optional[np.ndarray]:
        return np.sort(np.mod(self._ang, TWO_PI))

    def sandwich(self, resolution: int = 4096) -> SandwichConstants:
        R = float(np.max(np.hypot(self.vertices[:, 0], self.vertices[:, 1])))
        r = float(np.min(1.0 / np.hypot(self._duals[:, 0], self._duals[:, 1])))
        return SandwichConstants(r, R)

    def to_json_dict(self) -> dict:
        return {"type": "polygon", "vertices": self.vertices.tolist()}


# ---------------------------------------------------------------------------
# Ellipse norms


@dataclass(frozen=True)
class EllipseNorm(Norm):
    """Norm sqrt(v^T M v) whose unit ball is the ellipse x^T M x <= 1."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise SpecError("ellipse matrix must be a finite 2x2 matrix")
        if abs(m[0, 1] - m[1, 0]) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise SpecError("ellipse matrix must be symmetric")
        m = 0.5 * (m + m.T)
        eig = np.linalg.eigvalsh(m)
        if eig[0] <= 1e-12:
            raise SpecError(f"ellipse matrix must be positive definite, eigenvalues {eig}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_minv", np.linalg.inv(m))
        object.__setattr__(self, "_eig", eig)

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        q = np.einsum("ij,jk,ik->i", pts, self.m, pts)
        return np.sqrt(np.maximum(q, 0.0))

    def support(self, u) -> float:
        u = as_vec(u)
        return math.sqrt(max(float(u @ self._minv @ u), 0.0))

    def sandwich(self, resolution: int = 4096) -> SandwichConstants:
        lo, hi = self._eig
        return SandwichConstants(1.0 / math.sqrt(hi), 1.0 / math.sqrt(lo))

    def to_json_dict(self) -> dict:
        return {"type": "ellipse", "m": self.m.tolist()}


# ---------------------------------------------------------------------------
# Scaled norms


@dataclass(frozen=True)
class ScaledNorm(Norm):
    """Unit ball of `inner` blown up by `factor`: ||v|| = inner(v) / factor."""

    inner: Norm
    factor: float

    def __post_init__(self):
        if not (self.factor > 0 and math.isfinite(self.factor)):
            raise SpecError(f"scale factor must be positive and finite, got {self.factor}")

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        return self.inner.eval_many(pts) / self.factor

    def support(self, u) -> float:
        return self.factor * self.inner.support(u)

    def corner_angles(self) -> Optional[np.ndarray]:
        return self.inner.corner_angles()

    def sandwich(self, resolution: int = 4096) -> SandwichConstants:
        s = self.inner.sandwich(resolution)
        return SandwichConstants(self.factor * s.r, self.factor * s.R)

    def to_json_dict(self) -> dict:
        return {"type": "scaled", "factor": self.factor,
                "inner": self.inner.to_json_dict()}


# ---------------------------------------------------------------------------
# Sections of n-dimensional norms


class NormN:
    """A norm on R^n, n >= 2; only what sections need."""

    dim: int

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eval(self, v) -> float:
        return float(self.eval_many(np.asarray(v, dtype=float)[None, :])[0])


@dataclass(frozen=True)
class LpNormN(NormN):
    p: float
    dim: int

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise SpecError(f"p must be >= 1, got {self.p}")
        if self.dim < 2:
            raise SpecError("ambient dimension must be >= 2")

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        a = np.abs(pts)
        if math.isinf(self.p):
            return np.max(a, axis=1)
        if self.p == 1.0:
            return np.sum(a, axis=1)
        m = np.max(a, axis=1)
        out = np.zeros_like(m)
        nz = m > 0
        out[nz] = m[nz] * np.sum((a[nz] / m[nz, None]) ** self.p, axis=1) ** (1.0 / self.p)
        return out

    def to_json_dict(self) -> dict:
        return {"type": "lp", "p": "inf" if math.isinf(self.p) else self.p,
                "dim": self.dim}


@dataclass(frozen=True)
class CustomNormN(NormN):
    """User-supplied gauge: func maps an (n, dim) array to (n,) norms.

    The contract is checked only by sampling (validate_norm on sections);
    supplying a non-norm is the caller's responsibility.
    """

    func: Callable[[np.ndarray], np.ndarray]
    dim: int

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(pts), dtype=float)


@dataclass(frozen=True)
class SectionNorm(Norm):
    """Restriction of an ambient norm to span{u, v}: ||(a,b)|| = ||a u + b v||."""

    ambient: NormN
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if u.shape != (self.ambient.dim,) or v.shape != (self.ambient.dim,):
            raise SpecError("basis vectors must match the ambient dimension")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        amb = pts[:, 0, None] * self.u[None, :] + pts[:, 1, None] * self.v[None, :]
        return self.ambient.eval_many(amb)

    def support(self, u) -> float:
        return _support_by_search(self, as_vec(u))

    def to_json_dict(self) -> dict:
        if not hasattr(self.ambient, "to_json_dict"):
            raise SpecError("custom ambient gauges are not JSON-serializable")
        return {"type": "section", "ambient": self.ambient.to_json_dict(),
                "x": self.u.tolist(), "y": self.v.tolist()}


def section_norm(ambient: NormN, x, y) -> SectionNorm:
    """Orthonormalize {x, y} and restrict the ambient norm to their span."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx <= 0 or ny <= 0:
        raise SpecError("section basis vectors must be nonzero")
    u = x / nx
    w = y - (y @ u) * u
    nw = float(np.linalg.norm(w))
    # sin of the Euclidean angle between x and y
    if nw / ny < 1e-8:
        raise SpecError("section is degenerate: x and y are (nearly) dependent")
    return SectionNorm(ambient=ambient, u=u, v=w / nw)


# ---------------------------------------------------------------------------
# Spec-level operations


def eval_norm(spec: Norm, v) -> float:
    return spec.eval(v)


def sphere_points(spec: Norm, thetas: np.ndarray) -> np.ndarray:
    """Points c(theta)/||c(theta)||_X on the unit sphere of the norm."""
    thetas = np.asarray(thetas, dtype=float)
    c = np.empty(thetas.shape + (2,))
    np.cos(thetas, out=c[..., 0])
    np.sin(thetas, out=c[..., 1])
    n = spec.eval_many(c)
    return c / n[:, None]


def sphere_point(spec: Norm, theta: float) -> np.ndarray:
    return sphere_points(spec, np.array([theta]))[0]


def golden_min(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-10, max_iter: int = 200):
    """Golden-section minimization of a unimodal f on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        it += 1
    xm = 0.5 * (a + b)
    return xm, f(xm)


def _sandwich_by_grid(spec: Norm, resolution: int) -> SandwichConstants:
    if resolution < 8:
        raise SpecError("sandwich resolution must be >= 8")
    thetas = np.linspace(0.0, TWO_PI, resolution, endpoint=False)
    pts = sphere_points(spec, thetas)
    e = np.hypot(pts[:, 0], pts[:, 1])
    h = TWO_PI / resolution

    def enorm(t: float) -> float:
        p = sphere_point(spec, t)
        return math.hypot(p[0], p[1])

    i_min = int(np.argmin(e))
    i_max = int(np.argmax(e))
    _, r = golden_min(enorm, thetas[i_min] - h, thetas[i_min] + h)
    _, neg_R = golden_min(lambda t: -enorm(t), thetas[i_max] - h, thetas[i_max] + h)
    return SandwichConstants(min(r, float(e[i_min])), max(-neg_R, float(e[i_max])))


def sandwich_constants(spec: Norm, resolution: int = 4096) -> SandwichConstants:
    if resolution < 8:
        raise SpecError("sandwich resolution must be >= 8")
    return spec.sandwich(resolution)


def normalize_norm(spec: Norm, resolution: int = 4096) -> tuple[Norm, float]:
    """Rescale the unit ball so that B_E subset B_X subset K*B_E; returns (spec', K)."""
    s = sandwich_constants(spec, resolution)
    k = s.R / s.r
    if abs(s.r - 1.0) <= 1e-12:
        return spec, k
    return ScaledNorm(inner=spec, factor=1.0 / s.r), k


def validate_norm(spec: Norm, samples: int = 10_000, seed: int = 0,
                  tol: float = 1e-9) -> CheckReport:
    """Sampling check of the norm axioms: homogeneity, symmetry, triangle."""
    if samples < 1:
        raise SpecError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.uniform(-2.0, 2.0, size=(samples, 2))
    w = rng.uniform(-2.0, 2.0, size=(samples, 2))
    alpha = rng.uniform(-3.0, 3.0, size=samples)

    nv = spec.eval_many(v)
    nw = spec.eval_many(w)
    hom = -np.abs(spec.eval_many(alpha[:, None] * v) - np.abs(alpha) * nv)
    sym = -np.abs(spec.eval_many(-v) - nv)
    tri = nv + nw - spec.eval_many(v + w)

    margins = np.stack([hom, sym, tri])
    flat = int(np.argmin(margins))
    kind, i = divmod(flat, samples)
    worst = float(margins.flat[flat])
    witness = {
        "axiom": ["homogeneity", "symmetry", "triangle"][kind],
        "v": v[i], "w": w[i], "alpha": float(alpha[i]),
    }
    return CheckReport(name="norm-axioms", passed=worst >= -tol, trials=samples,
                       worst_margin=worst, witness=witness, tolerance=tol)


# ---------------------------------------------------------------------------
# JSON wire format


def norm_from_json(source, path: str = "$") -> Norm:
    """Parse a norm spec from a JSON string or an already-decoded object."""
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as e:
            raise SpecError(f"{path}: invalid JSON: {e}") from e
    else:
        obj = source
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected an object, got {type(obj).__name__}")
    kind = obj.get("type")
    try:
        if kind == "lp":
            return LpNorm(p=_parse_p(obj.get("p"), path))
        if kind == "polygon":
            return PolygonNorm(vertices=np.asarray(obj.get("vertices"), dtype=float))
        if kind == "ellipse":
            return EllipseNorm(m=np.asarray(obj.get("m"), dtype=float))
        if kind == "scaled":
            inner = norm_from_json(obj.get("inner"), path + ".inner")
            return ScaledNorm(inner=inner, factor=float(obj.get("factor")))
        if kind == "section":
            amb = obj.get("ambient")
            if not isinstance(amb, dict) or amb.get("type") != "lp":
                raise SpecError(f"{path}.ambient: only lp ambient norms are JSON-expressible")
            ambient = LpNormN(p=_parse_p(amb.get("p"), path + ".ambient"),
                              dim=int(amb.get("dim")))
            return section_norm(ambient, np.asarray(obj.get("x"), dtype=float),
                                np.asarray(obj.get("y"), dtype=float))
    except SpecError as e:
        if str(e).startswith("$"):
            raise
        raise SpecError(f"{path}: {e}") from e
    except (TypeError, ValueError) as e:
        raise SpecError(f"{path}: {e}") from e
    raise SpecError(f"{path}.type: unknown norm type {kind!r}")


def _parse_p(p, path: str) -> float:
    if p in ("inf", "Infinity"):
        return math.inf
    try:
        return float(p)
    except (TypeError, ValueError):
        raise SpecError(f"{path}.p: expected a number or 'inf', got {p!r}")


def norm_to_json(spec: Norm) -> dict:
    return spec.to_json_dict()
