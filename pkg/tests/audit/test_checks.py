import itertools
import math

import numpy as np
import pytest

from warpspace.audit.checks import convexity_check, densify, local_isometry_check
from warpspace.config import SolverConfig
from warpspace.spaces.descriptors import Circle, Line, Scaled, Warped
from warpspace.spaces.metric_core import PolyPath
from warpspace.spaces.fiber import WarpVector
from warpspace.spaces.maps import CircleCover

SOLVER = SolverConfig(n_waypoints=17, restarts=0)


def test_cover_onto_rescaled_circle_is_local_isometry():
    ok, dev = local_isometry_check(CircleCover(2), Circle(1.0), Scaled(0.5, Circle(1.0)), radius=0.1)
    assert ok and dev <= 1e-9


def test_cover_onto_unit_circle_doubles_distances():
    ok, dev = local_isometry_check(CircleCover(2), Circle(1.0), Circle(1.0), radius=0.1)
    assert not ok
    assert dev == pytest.approx(1.0, rel=1e-9)


def test_vertical_strip_is_convex():
    space = Warped(Line(), WarpVector.single(2.0))

    def sampler(rng):
        return np.array([rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0)])

    def projector(x):
        return np.array([np.clip(x[0], 0.0, 1.0), x[1]])

    report = convexity_check(space, sampler, projector, SOLVER, n_pairs=5, seed=0, tol=1e-4)
    assert report.convex, report.to_json()


def test_horizontal_line_is_not_convex():
    space = Warped(Line(), WarpVector.single(math.e))

    def sampler(rng):
        return np.array([rng.uniform(-2.0, 2.0), 0.0])

    def projector(x):
        return np.array([x[0], 0.0])

    report = convexity_check(space, sampler, projector, SOLVER, n_pairs=5, seed=0)
    assert not report.convex
    assert report.max_deviation > 1e-3


def _arc_projector(x):
    # nearest point of the arc [0, 0.6] on the unit circle
    s = float(x[0]) % 1.0
    if s <= 0.6:
        return np.array([s])
    return np.array([0.6 if s - 0.6 <= 1.0 - s else 0.0])


def test_densify_follows_the_wrapped_segment():
    path = PolyPath(np.array([[0.01], [0.59]]), np.array([0.0, 1.0]))
    pts = densify(Circle(1.0), path, per_segment=16)
    assert len(pts) == 17
    assert pts[8, 0] == pytest.approx(0.8, abs=1e-12)
    assert pts[-1, 0] == pytest.approx(0.59, abs=1e-12)


def test_arc_longer_than_half_circle_is_not_convex():
    ends = itertools.cycle([np.array([0.01]), np.array([0.59])])

    def sampler(rng):
        return next(ends)

    report = convexity_check(Circle(1.0), sampler, _arc_projector, n_pairs=4, seed=0)
    assert not report.convex
    assert report.max_deviation == pytest.approx(0.2, abs=1e-9)


def test_short_arc_is_convex():
    def sampler(rng):
        return np.array([rng.uniform(0.0, 0.4)])

    report = convexity_check(Circle(1.0), sampler, _arc_projector, n_pairs=20, seed=0)
    assert report.convex
    assert report.max_deviation <= 1e-12
