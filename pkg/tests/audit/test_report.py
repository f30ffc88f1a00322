import csv
import json
import math

import pytest

from warpspace.audit.report import CSV_COLUMNS, run_audit
from warpspace.complexes.cylinders import build_extended_cylinder
from warpspace.complexes.gluing import certify_gluing
from warpspace.config import AuditConfig, NetConfig
from warpspace.spaces.descriptors import Circle, EuclideanProduct, Interval, Line, Warped
from warpspace.spaces.fiber import WarpVector
from warpspace.spaces.maps import Identity

PLANE = EuclideanProduct((Line(), Line()))


def test_flat_plane_is_clean():
    report = run_audit(PLANE, 30, seed=0)
    assert report.violations == 0
    assert report.max_cat0_violation <= 1e-4
    assert report.n_triangles == 30


@pytest.mark.parametrize("space", [PLANE, EuclideanProduct((Circle(4.0), Line()))], ids=["plane", "circle_line"])
def test_flat_products_have_zero_slack_on_100_triangles(space):
    report = run_audit(space, 100, seed=1)
    assert report.n_triangles + report.n_degenerate == 100
    slacks = [row["slack"] for row in report.triangles if row["slack"] is not None]
    assert slacks and max(abs(s) for s in slacks) <= 1e-4
    assert report.violations == 0


def test_same_seed_same_report():
    a = run_audit(PLANE, 10, seed=4).to_json()
    b = run_audit(PLANE, 10, seed=4).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_circle_large_triangles_are_reported():
    report = run_audit(Circle(1.0), 40, seed=0, cfg=AuditConfig(large_triangles=True))
    assert report.n_cat0_violations >= 1
    assert report.violations >= 1
    assert any("one-dimensional" in n for n in report.notes)


def test_solver_mode_on_flat_plane():
    report = run_audit(PLANE, 5, seed=1, cfg=AuditConfig(mode="solver"))
    assert report.mode == "solver" and report.violations == 0


def test_report_files(tmp_path):
    report = run_audit(PLANE, 6, seed=0, space_id="plane")
    json_path, csv_path = report.save(tmp_path / "out")
    assert json.loads(json_path.read_text(encoding="utf-8"))["space_id"] == "plane"
    with csv_path.open(encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 7


def test_cylinder_audit_checks_collars_and_identifications():
    cyl = build_extended_cylinder(certify_gluing(Identity(1), Interval(0.0, 1.0), Interval(0.0, 1.0)))
    report = run_audit(cyl, 5, seed=0, cfg=AuditConfig(radius=0.3, collar_samples=10), net_cfg=NetConfig(epsilon=0.1))
    assert report.collar["passed"]
    assert report.boundary["convex"]
    assert report.boundary["n_pairs"] == 5
    assert report.pseudometric["passed"]
    assert report.identifications == {"checked": 1, "max_deviation": pytest.approx(0.0, abs=1e-12), "failures": []}
    assert report.effective_tol == pytest.approx(0.2)


@pytest.mark.slow
def test_warped_plane_small_triangles_are_thin():
    space = Warped(Line(), WarpVector.single(2.0))
    report = run_audit(space, 100, seed=0)
    assert report.n_unconverged == 0
    assert all(row["slack"] < 0 for row in report.triangles
               if row["slack"] is not None and row["diameter"] >= 0.5)
    assert report.max_cat0_violation <= report.tol
    assert report.n_large > 0 and report.max_slack_large < 0
    assert report.violations == 0


@pytest.mark.slow
def test_hyperbolic_plane_has_negative_slack():
    report = run_audit(Warped(Line(), WarpVector.single(math.e)), 10, seed=3)
    assert report.max_cat0_violation < 0
