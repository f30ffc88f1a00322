import dataclasses

import pytest

from warpspace.complexes.cylinders import (DEFAULT_COLLAR, CylinderSpace, build_extended_cylinder, build_spiral,
                                           check_boundary_convexity, check_straight_collars)
from warpspace.complexes.gluing import certify_gluing
from warpspace.config import NetConfig
from warpspace.errors import SchemaError
from warpspace.geodesic.solver import distance
from warpspace.quotient.space import Piece, check_identification
from warpspace.spaces.descriptors import Circle, EuclideanProduct, Interval, Scaled, Warped, descriptor_from_json
from warpspace.spaces.maps import CircleCover, Identity


@pytest.fixture(scope="module")
def identity_cylinder() -> CylinderSpace:
    cert = certify_gluing(Identity(1), Interval(0.0, 1.0), Interval(0.0, 1.0))
    return build_extended_cylinder(cert)


@pytest.fixture(scope="module")
def cover_cert():
    return certify_gluing(CircleCover(2), Circle(1.0), Scaled(0.5, Circle(1.0)))


def test_pieces_and_marks(identity_cylinder):
    q = identity_cylinder.quotient
    assert [p.name for p in q.pieces] == ["X", "Y"]
    assert [n for n, _ in q.marks] == ["X_0", "Y_1"]
    assert q.identifications[0].label == "seam:X->Y"
    assert identity_cylinder.collar == DEFAULT_COLLAR == 1 / 16


def test_end_to_end_height(identity_cylinder):
    res = distance(identity_cylinder, {"piece": "X", "coord": [0.5, 0.0]}, {"piece": "Y", "coord": [0.5, 2.0]},
                   net_cfg=NetConfig(epsilon=0.05))
    assert res.length == pytest.approx(1.0, abs=1e-6)


def test_collar_width_bounds(identity_cylinder):
    with pytest.raises(SchemaError):
        build_extended_cylinder(identity_cylinder.gluing, collar=0.3)
    with pytest.raises(SchemaError):
        check_straight_collars(identity_cylinder, eps=0.0)


def test_straight_collars(identity_cylinder):
    report = check_straight_collars(identity_cylinder, n_samples=20)
    assert report.passed, report.failures
    assert report.n_pairs == 20


def test_rescaled_collar_is_detected(identity_cylinder):
    q = identity_cylinder.quotient
    bad_x = Piece("X", EuclideanProduct((Scaled(1.5, Interval(0.0, 1.0)), Interval(0.0, 0.5))))
    bad = dataclasses.replace(identity_cylinder, quotient=dataclasses.replace(q, pieces=(bad_x, q.pieces[1])))
    report = check_straight_collars(bad, n_samples=20)
    assert not report.passed
    assert report.max_deviation > 0.1


def test_boundary_geodesics_stay_on_marks_identity(identity_cylinder):
    report = check_boundary_convexity(identity_cylinder, n_pairs=20, cfg=NetConfig(epsilon=0.05))
    assert report.convex
    assert report.n_pairs == 20
    assert report.max_deviation <= report.tol == 0.05


def test_boundary_geodesics_stay_on_marks_double_cover(cover_cert):
    cyl = build_extended_cylinder(cover_cert)
    report = check_boundary_convexity(cyl, n_pairs=20, radius=0.3, cfg=NetConfig(epsilon=0.05))
    assert report.convex
    assert report.max_deviation <= 0.05


def test_boundary_check_tolerance_is_binding(identity_cylinder):
    # a negative tolerance fails every pair, so each geodesic was measured
    report = check_boundary_convexity(identity_cylinder, n_pairs=6, tol=-1.0)
    assert not report.convex
    with pytest.raises(SchemaError):
        check_boundary_convexity(identity_cylinder, radius=0.0)


def test_cover_cylinder_seam_is_isometric(cover_cert):
    cyl = build_extended_cylinder(cover_cert)
    assert check_identification(cyl.quotient, cyl.quotient.identifications[0]) <= 1e-9


def test_cylinder_json_rebuilds(identity_cylinder):
    again = descriptor_from_json(identity_cylinder.to_json())
    assert isinstance(again, CylinderSpace)
    assert again.quotient == identity_cylinder.quotient


def test_spiral_of_double_cover(cover_cert):
    q = build_spiral(cover_cert, 2.0)
    assert all(isinstance(p.space, Warped) for p in q.pieces)
    assert [i.label for i in q.identifications] == ["seam:X->Y", "spiral"]
    assert any("mapping torus" in c for c in q.claims)


def test_spiral_needs_matching_lambda(cover_cert):
    with pytest.raises(SchemaError):
        build_spiral(cover_cert, 3.0)


def test_unit_spiral_records_degeneration():
    cert = certify_gluing(Identity(1), Circle(1.0), Circle(1.0))
    q = build_spiral(cert, 1.0)
    assert any("lambda = 1" in c for c in q.claims)
