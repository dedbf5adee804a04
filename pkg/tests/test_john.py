"""Maximum-area inscribed ellipse: closed-form cases, certificates, and
affine equivariance."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spherearc import (Ellipse, EllipseNorm, LpNorm, PolygonNorm, SpecError,
                       euclidean_from_ellipse, facet_normals,
                       inner_john_ellipse, verify_john)

LINF = LpNorm(math.inf)
SQUARE = PolygonNorm(vertices=np.array(
    [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]))
RECT = PolygonNorm(vertices=np.array(
    [[2.0, 1.0], [-2.0, 1.0], [-2.0, -1.0], [2.0, -1.0]]))


def test_ellipse_basic_properties():
    e = Ellipse(m=np.diag([4.0, 1.0]))
    assert e.area == pytest.approx(math.pi / 2)
    assert e.gauge((1.0, 0.0)) == pytest.approx(2.0)
    bnd = e.boundary(128)
    np.testing.assert_allclose(e.gauge_many(bnd), 1.0, atol=1e-12)
    l_map = e.half_axes_map
    np.testing.assert_allclose(l_map @ l_map, np.linalg.inv(e.m), atol=1e-12)
    with pytest.raises(SpecError):
        Ellipse(m=np.array([[1.0, 3.0], [3.0, 1.0]]))


def test_facet_normals_of_a_polygon_are_its_edge_duals():
    normals = facet_normals(SQUARE)
    assert normals.shape == (4, 2)
    # every vertex saturates its two adjacent supporting lines
    prods = SQUARE.vertices @ normals.T
    np.testing.assert_allclose(np.max(prods, axis=1), 1.0, atol=1e-12)
    assert np.all(prods <= 1.0 + 1e-12)


def test_john_ellipse_of_the_square_is_the_unit_disk():
    e = inner_john_ellipse(SQUARE)
    np.testing.assert_allclose(e.m, np.eye(2), atol=1e-6)
    e2 = inner_john_ellipse(LINF)
    np.testing.assert_allclose(e2.m, np.eye(2), atol=1e-6)


def test_john_ellipse_of_the_rectangle():
    e = inner_john_ellipse(RECT)
    np.testing.assert_allclose(e.m, np.diag([0.25, 1.0]), atol=1e-6)


def test_john_ellipse_of_the_cross_polytope():
    e = inner_john_ellipse(LpNorm(1.0))
    # largest disk inside the diamond has radius 1/sqrt(2)
    np.testing.assert_allclose(e.m, 2.0 * np.eye(2), atol=1e-6)


def test_john_ellipse_of_an_ellipse_is_itself():
    m = np.array([[2.0, 0.5], [0.5, 1.0]])
    e = inner_john_ellipse(EllipseNorm(m=m), facets=512)
    np.testing.assert_allclose(e.m, m, atol=1e-4)


def test_certificate_for_the_square():
    e = inner_john_ellipse(SQUARE)
    cert = verify_john(SQUARE, e, tol=1e-6)
    assert cert.inner_ok and cert.outer_ok
    assert cert.worst_inner_margin >= -1e-9
    # the outer sqrt(2) factor is tight exactly at the corners
    assert cert.worst_outer_margin == pytest.approx(0.0, abs=1e-6)
    witness = np.asarray(cert.witnesses["outer"])
    assert np.max(np.abs(np.abs(witness) - 1.0)) < 1e-3


def test_certificate_rejects_an_oversized_ellipse():
    too_big = Ellipse(m=0.5 * np.eye(2))  # disk of radius sqrt(2) around the square
    cert = verify_john(SQUARE, too_big, tol=1e-6)
    assert not cert.inner_ok


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_affine_equivariance_on_images_of_the_square(seed):
    rng = np.random.default_rng(seed)
    t_map = rng.uniform(-2.0, 2.0, (2, 2))
    if abs(np.linalg.det(t_map)) < 0.2:
        return
    verts = SQUARE.vertices @ t_map.T
    if np.linalg.det(t_map) < 0:
        verts = verts[::-1]  # keep the CCW orientation
    image = PolygonNorm(vertices=verts)
    e = inner_john_ellipse(image)
    expected = np.linalg.inv(t_map @ t_map.T)
    np.testing.assert_allclose(e.m, expected, atol=1e-5 * np.abs(expected).max())


def test_euclidean_from_ellipse_round_trip():
    e = Ellipse(m=np.diag([4.0, 1.0]))
    spec = euclidean_from_ellipse(e)
    assert spec.eval((1.0, 0.0)) == pytest.approx(2.0)
    assert spec.eval((0.0, 1.0)) == pytest.approx(1.0)
