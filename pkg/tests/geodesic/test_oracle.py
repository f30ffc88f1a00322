import math

import numpy as np
import pytest

from warpspace.config import SolverConfig
from warpspace.errors import SchemaError
from warpspace.geodesic.oracle import closed_form_distance, has_closed_form, hyperbolic_oracle
from warpspace.geodesic.solver import distance
from warpspace.spaces.descriptors import Circle, EuclideanProduct, Line, Warped
from warpspace.spaces.fiber import WarpVector


def test_known_value():
    assert hyperbolic_oracle(math.e, (0.0, 0.0), (1.0, 0.0)) == pytest.approx(math.acosh(1.5), abs=1e-12)
    assert math.acosh(1.5) == pytest.approx(0.962424, abs=1e-6)


def test_near_unit_lambda_is_nearly_euclidean():
    assert hyperbolic_oracle(1.0001, (0.0, 0.0), (1.0, 0.0)) == pytest.approx(1.0, abs=1e-3)


def test_invalid_lambda():
    with pytest.raises(SchemaError):
        hyperbolic_oracle(1.0, (0, 0), (1, 0))
    with pytest.raises(SchemaError):
        hyperbolic_oracle(-2.0, (0, 0), (1, 0))


def test_vertical_distance_is_fiber_length():
    assert hyperbolic_oracle(2.0, (0.3, -1.0), (0.3, 1.5)) == pytest.approx(2.5)


def test_closed_form_splits_off_flat_fiber_directions():
    # λ = (2, 1): the second fiber direction is flat
    space = Warped(Line(), WarpVector(("e", "f"), (2.0, 1.0)))
    d = closed_form_distance(space, [0.0, 0.0, 0.0], [1.0, 0.0, 2.0])
    assert d == pytest.approx(math.hypot(hyperbolic_oracle(2.0, (0, 0), (1, 0)), 2.0))


def test_has_closed_form():
    assert has_closed_form(EuclideanProduct((Line(), Circle(1.0))))
    assert has_closed_form(Warped(Circle(1.0), WarpVector.single(2.0)))


@pytest.mark.slow
def test_oracle_agrees_with_brute_force_minimization():
    cfg = SolverConfig(n_waypoints=257, restarts=0)
    rng = np.random.default_rng(11)
    for lam in (math.e, 2.0, 0.5):
        space = Warped(Line(), WarpVector.single(lam))
        for _ in range(7):
            p, q = rng.uniform(-2, 2, size=2), rng.uniform(-2, 2, size=2)
            want = hyperbolic_oracle(lam, p, q)
            got = distance(space, p, q, cfg).length
            assert got == pytest.approx(want, rel=1e-3)
            assert got >= want - 1e-6
