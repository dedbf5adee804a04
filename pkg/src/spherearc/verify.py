"""Executable property checks for the tangent/angle/projection estimates,
the K^3*pi/2 and sqrt(2)*pi distance bounds, and a worst-case ratio search.

Every check is deterministic given (spec, trials, seed) and returns a
CheckReport whose worst witness can be replayed standalone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import circle_contact_points
from .john import inner_john_ellipse
from .metric import distance_ratio, euclidean_intrinsic_oracle, intrinsic_distance
from .norms import (CustomNormN, EllipseNorm, LpNorm, Norm, PolygonNorm,
                    SectionNorm, SpecError, cross2, golden_min, norm_to_json,
                    sandwich_constants, sphere_point, sphere_points, TWO_PI)
from .report import CheckReport

SQRT2_PI = math.sqrt(2.0) * math.pi
GEOM_TOL = 1e-9   # pure geometric identities
ARC_TOL = 1e-8    # default arc-length refinement tolerance
DIST_TOL = 1e-7   # checks involving arc lengths inherit 10x the arc tolerance


class NotNormalizedError(ValueError):
    """Check requires a norm whose unit ball contains the Euclidean ball."""


def _require_normalized(spec: Norm, tol: float = 1e-7):
    s = sandwich_constants(spec)
    if s.r < 1.0 - tol:
        raise NotNormalizedError(
            f"unit ball does not contain the Euclidean ball (r = {s.r}); "
            "normalize_norm the spec first")
    return s


def _report(name, trials, margins, witnesses, tol):
    i = int(np.argmin(margins))
    worst = float(margins[i])
    witness = {k: v[i] if hasattr(v, "__getitem__") else v for k, v in witnesses.items()}
    return CheckReport(name=name, passed=worst >= -tol, trials=trials,
                       worst_margin=worst, witness=witness, tolerance=tol)


# ---------------------------------------------------------------------------
# Tangent-line identities


def check_lemma_tangent_lines(spec: Norm, trials: int = 10_000, seed: int = 0,
                              tol: float = GEOM_TOL) -> CheckReport:
    """Tangent points of the unit circle seen from sphere points.

    Items: (1) the tangent line is a level line of <., tau>; (2) the segment
    [tau, x] stays inside the ball; (3) its extension beyond x stays outside;
    (4) at circle contact points the sphere lies in the halfplane <x, .> <= 1.
    """
    _require_normalized(spec)
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, TWO_PI, trials)
    x = sphere_points(spec, thetas)
    ne = np.hypot(x[:, 0], x[:, 1])
    ne = np.maximum(ne, 1.0)  # normalized: clip float dips below the circle
    a = x / (ne * ne)[:, None]
    sin_t = np.sqrt(np.maximum(1.0 - 1.0 / (ne * ne), 0.0))
    unit_perp = np.stack([-x[:, 1], x[:, 0]], axis=1) / ne[:, None]
    tau = a + sin_t[:, None] * unit_perp

    t1 = rng.uniform(-10.0, 10.0, trials)
    line1 = t1[:, None] * x + (1.0 - t1)[:, None] * tau
    m1 = -np.abs(np.einsum("ij,ij->i", line1, tau) - 1.0)

    t2 = rng.uniform(0.0, 1.0, trials)
    m2 = 1.0 - spec.eval_many(t2[:, None] * x + (1.0 - t2)[:, None] * tau)

    t3 = rng.uniform(1.0, 10.0, trials)
    m3 = spec.eval_many(t3[:, None] * x + (1.0 - t3)[:, None] * tau) - 1.0

    contacts = circle_contact_points(spec)
    y = sphere_points(spec, rng.uniform(0.0, TWO_PI, trials))
    if len(contacts):
        dots = y @ contacts.T  # (trials, n_contacts)
        m4 = 1.0 - np.max(dots, axis=1)
        c_idx = np.argmax(dots, axis=1)
    else:
        m4 = np.full(trials, np.inf)
        c_idx = np.zeros(trials, dtype=int)

    margins = np.stack([m1, m2, m3, m4])
    flat = int(np.argmin(margins))
    item, i = divmod(flat, trials)
    worst = float(margins.flat[flat])
    witness = {"item": int(item) + 1, "x": x[i], "tau": tau[i],
               "t": float([t1, t2, t3, thetas][item][i])}
    if item == 3 and len(contacts):
        witness["contact"] = contacts[c_idx[i]]
        witness["y"] = y[i]
    return CheckReport(name="tangent-lines", passed=worst >= -tol, trials=trials,
                       worst_margin=worst, witness=witness, tolerance=tol)


def check_lemma_angles(spec: Norm, trials: int = 10_000, seed: int = 0,
                       tol: float = GEOM_TOL) -> CheckReport:
    """Angular separation <= arccos(1/K) at the origin bounds the angle at x
    between the perpendicular ray and the ray toward y by the same amount."""
    s = _require_normalized(spec)
    window = math.acos(min(1.0, 1.0 / s.k))
    if window < 1e-9:
        return CheckReport(name="angles", passed=True, trials=trials,
                           worst_margin=0.0, witness={"vacuous": True, "K": s.k},
                           tolerance=tol)
    rng = np.random.default_rng(seed)
    tx = rng.uniform(0.0, TWO_PI, trials)
    delta = rng.uniform(1e-6, window, trials) * rng.choice([-1.0, 1.0], trials)
    x = sphere_points(spec, tx)
    y = sphere_points(spec, tx + delta)
    ne = np.hypot(x[:, 0], x[:, 1])
    ccw = np.stack([-x[:, 1], x[:, 0]], axis=1) / ne[:, None]
    orient = np.where(np.einsum("ij,ij->i", ccw, y) >= 0.0, 1.0, -1.0)
    xperp = orient[:, None] * ccw
    d = y - x
    cos_a = np.einsum("ij,ij->i", xperp, d) / np.hypot(d[:, 0], d[:, 1])
    alpha = np.arccos(np.clip(cos_a, -1.0, 1.0))
    margins = window - alpha
    return _report("angles", trials, margins,
                   {"x": x, "y": y, "alpha": alpha, "window": window}, tol)


def check_estimate_segment(spec: Norm, trials: int = 10_000, seed: int = 0,
                           tol: float = GEOM_TOL) -> CheckReport:
    """Within the arccos(1/K) angular window, chord distance on the sphere is
    at most K^2 times the chord distance of the radial projections."""
    s = _require_normalized(spec)
    window = math.acos(min(1.0, 1.0 / s.k))
    rng = np.random.default_rng(seed)
    tx = rng.uniform(0.0, TWO_PI, trials)
    delta = rng.uniform(0.0, window, trials) * rng.choice([-1.0, 1.0], trials)
    x = sphere_points(spec, tx)
    y = sphere_points(spec, tx + delta)
    sx = x / np.hypot(x[:, 0], x[:, 1])[:, None]
    sy = y / np.hypot(y[:, 0], y[:, 1])[:, None]
    lhs = np.hypot(*(x - y).T)
    rhs = (s.k ** 2) * np.hypot(*(sx - sy).T)
    return _report("estimate-segment", trials, rhs - lhs,
                   {"x": x, "y": y, "K": s.k}, tol)


def check_norm_decreasing(spec: Norm, trials: int = 10_000, seed: int = 0,
                          tol: float = GEOM_TOL) -> CheckReport:
    """Radial projection onto the Euclidean circle shrinks Euclidean distances
    between sphere points; no angular restriction."""
    _require_normalized(spec)
    rng = np.random.default_rng(seed)
    x = sphere_points(spec, rng.uniform(0.0, TWO_PI, trials))
    y = sphere_points(spec, rng.uniform(0.0, TWO_PI, trials))
    sx = x / np.hypot(x[:, 0], x[:, 1])[:, None]
    sy = y / np.hypot(y[:, 0], y[:, 1])[:, None]
    margins = np.hypot(*(x - y).T) - np.hypot(*(sx - sy).T)
    return _report("norm-decreasing", trials, margins, {"x": x, "y": y}, tol)


# ---------------------------------------------------------------------------
# Distance bounds


def check_euclidean_sphere(trials: int = 10_000, seed: int = 0,
                           tol: float = 1e-6, arc_tol: float = 1e-7) -> CheckReport:
    """On the Euclidean circle the intrinsic distance is the great-circle arc
    2*arcsin(chord/2), and the intrinsic/induced ratio is at most pi/2."""
    spec = LpNorm(2.0)
    rng = np.random.default_rng(seed)
    margins = np.empty(trials)
    worst_pair = None
    for i in range(trials):
        ta, tb = rng.uniform(0.0, TWO_PI, 2)
        x = sphere_point(spec, ta)
        y = sphere_point(spec, tb)
        d = intrinsic_distance(spec, x, y, tol=arc_tol).value
        oracle = euclidean_intrinsic_oracle(x, y)
        chord = float(np.hypot(*(x - y)))
        m = -abs(d - oracle)
        if chord > 0:
            m = min(m, (math.pi / 2.0) * chord - d)
        margins[i] = m
        if worst_pair is None or m < worst_pair[0]:
            worst_pair = (m, x, y, d, oracle)
    worst, x, y, d, oracle = worst_pair
    return CheckReport(name="euclidean-sphere", passed=worst >= -tol, trials=trials,
                       worst_margin=float(worst),
                       witness={"x": x, "y": y, "distance": d, "oracle": oracle},
                       tolerance=tol)


def check_theorem_k_bound(spec: Norm, trials: int = 100, seed: int = 0,
                          tol: float = DIST_TOL, arc_tol: float = ARC_TOL) -> CheckReport:
    """Chord <= intrinsic distance <= K^3 * pi/2 * chord on the sphere."""
    s = _require_normalized(spec)
    bound = (s.k ** 3) * math.pi / 2.0
    rng = np.random.default_rng(seed)
    worst = None
    for _ in range(trials):
        ta, tb = rng.uniform(0.0, TWO_PI, 2)
        if abs(math.remainder(ta - tb, TWO_PI)) < 1e-9:
            continue
        x = sphere_point(spec, ta)
        y = sphere_point(spec, tb)
        chord = spec.eval(x - y)
        d = intrinsic_distance(spec, x, y, tol=arc_tol).value
        m = min(bound * chord - d, d - chord)
        if worst is None or m < worst[0]:
            worst = (m, x, y, d, chord)
    m, x, y, d, chord = worst
    return CheckReport(name="k-bound", passed=m >= -tol, trials=trials,
                       worst_margin=float(m),
                       witness={"x": x, "y": y, "distance": d, "chord": chord,
                                "K": s.k, "bound": bound},
                       tolerance=tol)


def john_normalized(spec: Norm, facets: int = 256) -> Norm:
    """Change of basis mapping the John ellipse of the ball to the unit disk.

    The transformed ball B' = L^-1 B_X satisfies B_E <= B' <= sqrt(2) B_E up
    to facet-approximation error.  Piecewise-linear balls stay polygons so
    their arcs remain exact.
    """
    ellipse = inner_john_ellipse(spec, facets=facets)
    l_map = ellipse.half_axes_map
    corners = spec.corner_angles()
    if corners is not None:
        verts = sphere_points(spec, corners)
        return PolygonNorm(vertices=verts @ np.linalg.inv(l_map).T)
    return SectionNorm(ambient=CustomNormN(func=spec.eval_many, dim=2),
                       u=l_map[:, 0], v=l_map[:, 1])


def _main_theorem_margins(spec: Norm, trials: int, seed: int, arc_tol: float,
                          facets: int):
    norm2 = john_normalized(spec, facets=facets)
    rng = np.random.default_rng(seed)
    worst_sqrt2pi = None
    worst_two = None
    for _ in range(trials):
        ta, tb = rng.uniform(0.0, TWO_PI, 2)
        if abs(math.remainder(ta - tb, TWO_PI)) < 1e-9:
            continue
        x = sphere_point(norm2, ta)
        y = sphere_point(norm2, tb)
        chord = norm2.eval(x - y)
        d = intrinsic_distance(norm2, x, y, tol=arc_tol).value
        m_main = min(SQRT2_PI * chord - d, d - chord)
        m_two = min(2.0 * chord - d, d - chord)
        if worst_sqrt2pi is None or m_main < worst_sqrt2pi[0]:
            worst_sqrt2pi = (m_main, x, y, d, chord)
        if worst_two is None or m_two < worst_two[0]:
            worst_two = (m_two, x, y, d, chord)
    return worst_sqrt2pi, worst_two


def check_main_theorem(spec: Norm, trials: int = 100, seed: int = 0,
                       tol: float = DIST_TOL, arc_tol: float = ARC_TOL,
                       facets: int = 256) -> CheckReport:
    """After the John change of basis: chord <= d <= sqrt(2)*pi * chord."""
    worst, worst_two = _main_theorem_margins(spec, trials, seed, arc_tol, facets)
    m, x, y, d, chord = worst
    return CheckReport(name="main-bound", passed=m >= -tol, trials=trials,
                       worst_margin=float(m),
                       witness={"x": x, "y": y, "distance": d, "chord": chord,
                                "constant2_margin": float(worst_two[0])},
                       tolerance=tol)


def check_schaffer_constant(spec: Norm, trials: int = 100, seed: int = 0,
                            tol: float = DIST_TOL, arc_tol: float = ARC_TOL,
                            facets: int = 256) -> CheckReport:
    """The sharper (optimal) bound: chord <= d <= 2 * chord."""
    _, worst_two = _main_theorem_margins(spec, trials, seed, arc_tol, facets)
    m, x, y, d, chord = worst_two
    return CheckReport(name="constant-2", passed=m >= -tol, trials=trials,
                       worst_margin=float(m),
                       witness={"x": x, "y": y, "distance": d, "chord": chord},
                       tolerance=tol)


# ---------------------------------------------------------------------------
# Random norm generators (documented so failures are reproducible)


def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns strict hull vertices in CCW order."""
    pts = points[np.lexsort((points[:, 1], points[:, 0]))]

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross2(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    return np.asarray(lower[:-1] + upper[:-1])


def random_polygon_norm(rng: np.random.Generator, directions: int | None = None) -> PolygonNorm:
    """Symmetrized convex hull of random directions with radii in [1, 2]."""
    for _ in range(50):
        m = int(directions) if directions else int(rng.integers(3, 9))
        phis = rng.uniform(0.0, math.pi, m)
        radii = rng.uniform(1.0, 2.0, m)
        half = radii[:, None] * np.stack([np.cos(phis), np.sin(phis)], axis=1)
        pts = np.concatenate([half, -half])
        try:
            return PolygonNorm(vertices=_convex_hull(pts))
        except SpecError:
            continue
    raise RuntimeError("failed to generate a valid random polygon")


def random_ellipse_norm(rng: np.random.Generator) -> EllipseNorm:
    """Random SPD matrix with condition number at most 100."""
    d = 10.0 ** rng.uniform(-1.0, 1.0, 2)
    phi = rng.uniform(0.0, math.pi)
    c, s = math.cos(phi), math.sin(phi)
    rot = np.array([[c, -s], [s, c]])
    return EllipseNorm(m=rot @ np.diag(d) @ rot.T)


def random_lp_norm(rng: np.random.Generator) -> LpNorm:
    u = rng.uniform()
    if u < 0.2:
        return LpNorm(math.inf)
    if u < 0.4:
        return LpNorm(1.0 + rng.uniform(0.0, 0.5))
    return LpNorm(rng.uniform(1.5, 12.0))


FAMILIES = ("lp", "polygon", "ellipse", "mixed")


def random_norm(family: str, rng: np.random.Generator) -> Norm:
    if family == "mixed":
        family = FAMILIES[int(rng.integers(0, 3))]
    if family == "lp":
        return random_lp_norm(rng)
    if family == "polygon":
        return random_polygon_norm(rng)
    if family == "ellipse":
        return random_ellipse_norm(rng)
    raise ValueError(f"unknown norm family {family!r}")


# ---------------------------------------------------------------------------
# Worst-case ratio search


@dataclass(frozen=True)
class RatioSearchResult:
    best_ratio: float
    norm: Norm
    x: np.ndarray
    y: np.ndarray
    trials: int

    def to_dict(self) -> dict:
        return {"best_ratio": float(self.best_ratio),
                "norm": norm_to_json(self.norm),
                "x": np.asarray(self.x).tolist(),
                "y": np.asarray(self.y).tolist(),
                "trials": int(self.trials)}


def _golden_max(f, center: float, halfwidth: float, tol: float) -> float:
    t, _ = golden_min(lambda u: -f(u), center - halfwidth, center + halfwidth, tol=tol)
    return t


def ratio_search(family: str, budget: int, seed: int = 0,
                 arc_tol: float = 1e-6) -> RatioSearchResult:
    """Random restarts over the family plus golden-section polish on the two
    sphere angles, maximizing intrinsic/induced distance ratio."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if family not in FAMILIES:
        raise ValueError(f"unknown norm family {family!r}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(budget):
        spec = random_norm(family, rng)
        tx, ty = rng.uniform(0.0, TWO_PI, 2)

        def ratio_at(a: float, b: float) -> float:
            gap = abs(math.remainder(a - b, TWO_PI))
            if gap < 1e-7:
                return 1.0
            return distance_ratio(spec, sphere_point(spec, a),
                                  sphere_point(spec, b), tol=arc_tol)

        for _ in range(2):
            tx = _golden_max(lambda t: ratio_at(t, ty), tx, 0.6, 1e-5)
            ty = _golden_max(lambda t: ratio_at(tx, t), ty, 0.6, 1e-5)
        r = ratio_at(tx, ty)
        if best is None or r > best[0]:
            best = (r, spec, sphere_point(spec, tx), sphere_point(spec, ty))
    r, spec, x, y = best
    return RatioSearchResult(best_ratio=r, norm=spec, x=x, y=y, trials=budget)
