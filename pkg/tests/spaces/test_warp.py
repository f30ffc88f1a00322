import numpy as np
import pytest

from warpspace.spaces.descriptors import Circle, EuclideanProduct, Line, Warped
from warpspace.spaces.fiber import WarpVector
from warpspace.spaces.metric_core import path_length
from warpspace.spaces.warp import make_warped, polyline_length, segment_lengths, warped_path_length


def test_quadrature_matches_refinement_limit():
    space = Warped(EuclideanProduct((Line(), Circle(1.0))), WarpVector(("e", "f"), (2.0, 0.5)))
    rng = np.random.default_rng(7)
    starts = np.column_stack([rng.uniform(-1, 1, 6), rng.uniform(0, 1, 6), rng.uniform(-1, 1, (6, 2))])
    steps = rng.uniform(-0.8, 0.8, size=(6, 4))
    steps[:, 1] *= 0.5
    exact = segment_lengths(space, starts, steps)
    for a, d, want in zip(starts, steps, exact):
        assert path_length(space, np.array([a, a + d])) == pytest.approx(want, rel=1e-7)


def test_steep_fiber_step_uses_enough_panels():
    space = make_warped(Line(), WarpVector.single(np.e))
    got = segment_lengths(space, np.array([[0.0, -3.0]]), np.array([[1.0, 6.0]]))[0]
    assert got == pytest.approx(warped_path_length(Line(), space.warp, [[0.0, -3.0], [1.0, 3.0]]),
                                rel=1e-7)


def test_polyline_length_of_vertical_path_is_fiber_length():
    space = Warped(Line(), WarpVector.single(2.0))
    assert polyline_length(space, np.array([[0.0, -1.0], [0.0, 0.5], [0.0, 2.0]])) == pytest.approx(3.0)
