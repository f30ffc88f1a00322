import math

import numpy as np
import pytest

from warpspace.config import SolverConfig
from warpspace.errors import ConvergenceError, SchemaError
from warpspace.geodesic.oracle import closed_form_distance, hyperbolic_oracle
from warpspace.geodesic.solver import GeodesicResult, distance, project_to_base
from warpspace.spaces.descriptors import Circle, Line, Warped
from warpspace.spaces.fiber import WarpVector
from warpspace.spaces.metric_core import base_distance
from warpspace.spaces.warp import polyline_length

HYPERBOLIC = Warped(Line(), WarpVector.single(math.e))


def test_primitive_answers_are_exact():
    res = distance(Circle(1.0), 0.1, 0.9)
    assert res.length == pytest.approx(0.2)
    assert res.converged and res.method == "closed_form"


def test_warped_plane_matches_oracle_and_bows_down():
    res = distance(HYPERBOLIC, [0.0, 0.0], [1.0, 0.0])
    assert res.converged
    assert res.length == pytest.approx(0.962424, abs=1e-3)
    mid = res.path.waypoints[len(res.path) // 2]
    assert mid[1] < 0.0


def test_solver_never_beats_the_true_distance():
    rng = np.random.default_rng(5)
    cfg = SolverConfig(restarts=1)
    for _ in range(3):
        p, q = rng.uniform(-1.5, 1.5, size=2), rng.uniform(-1.5, 1.5, size=2)
        want = hyperbolic_oracle(math.e, p, q)
        got = distance(HYPERBOLIC, p, q, cfg).length
        assert want - cfg.length_tol <= got <= want * (1 + 1e-3)


def test_circle_inner_picks_the_short_way_round():
    space = Warped(Circle(1.0), WarpVector.single(2.0))
    res = distance(space, [0.1, 0.0], [0.9, 0.0], SolverConfig(restarts=0))
    assert res.length == pytest.approx(closed_form_distance(space, [0.1, 0.0], [0.9, 0.0]), rel=1e-3)
    assert res.winding == (0,)


def test_equal_points():
    res = distance(HYPERBOLIC, [0.5, 0.5], [0.5, 0.5])
    assert res.length == 0.0 and res.converged


def test_project_to_base_gives_the_base_segment():
    res = distance(HYPERBOLIC, [0.0, 0.0], [1.0, 0.0])
    base = project_to_base(HYPERBOLIC, res)
    xs = base.waypoints[:, 0]
    assert xs[0] == 0.0 and xs[-1] == 1.0
    assert np.all(np.diff(xs) >= -1e-6)
    assert polyline_length(Line(), base) == pytest.approx(1.0, abs=1e-6)


def test_project_to_base_preconditions():
    res = distance(HYPERBOLIC, [0.0, 0.0], [1.0, 0.0])
    with pytest.raises(SchemaError):
        project_to_base(Line(), res)
    stuck = GeodesicResult(1.0, res.path, False, 0)
    with pytest.raises(ConvergenceError):
        project_to_base(HYPERBOLIC, stuck)


def test_result_json():
    out = distance(HYPERBOLIC, [0.0, 0.0], [1.0, 0.0]).to_json(HYPERBOLIC)
    assert set(out) >= {"length", "converged", "restarts_used", "epsilon", "method", "path"}
    assert out["path"]["waypoints"][0] == [0.0, [0.0]]


@pytest.mark.slow
@pytest.mark.parametrize("lam", [math.e, 2.0, 0.5])
def test_agreement_on_random_pairs(lam):
    space = Warped(Line(), WarpVector.single(lam))
    rng = np.random.default_rng(0)
    cfg = SolverConfig(restarts=0)
    for _ in range(20):
        p, q = rng.uniform(-2, 2, size=2), rng.uniform(-2, 2, size=2)
        assert distance(space, p, q, cfg).length == pytest.approx(hyperbolic_oracle(lam, p, q), rel=1e-3)


def _pairs(seed, n, box=1.5):
    rng = np.random.default_rng(seed)
    return [(rng.uniform(-box, box, size=2), rng.uniform(-box, box, size=2)) for _ in range(n)]


def test_distance_is_symmetric_on_random_pairs():
    cfg = SolverConfig(restarts=0)
    for p, q in _pairs(11, 50):
        there, back = distance(HYPERBOLIC, p, q, cfg), distance(HYPERBOLIC, q, p, cfg)
        assert abs(there.length - back.length) <= 2 * cfg.length_tol
        assert np.array_equal(there.path.waypoints, back.path.waypoints[::-1])
        assert there.converged == back.converged


def test_reversed_result_keeps_endpoints_in_call_order():
    res = distance(HYPERBOLIC, [1.0, 0.0], [0.0, 0.0], SolverConfig(restarts=0))
    assert list(res.path.waypoints[0]) == [1.0, 0.0]
    assert list(res.path.waypoints[-1]) == [0.0, 0.0]
    assert res.path.params[0] == 0.0 and res.path.params[-1] == 1.0


@pytest.mark.slow
def test_triangle_inequality_on_random_triples():
    cfg = SolverConfig()
    rng = np.random.default_rng(12)
    for _ in range(50):
        p, q, r = (rng.uniform(-1.5, 1.5, size=2) for _ in range(3))
        pq, qr, pr = (distance(HYPERBOLIC, a, b, cfg).length for a, b in ((p, q), (q, r), (p, r)))
        assert pr <= pq + qr + 3 * cfg.length_tol


@pytest.mark.slow
def test_projection_of_random_geodesics_is_a_base_geodesic():
    cfg = SolverConfig()
    for p, q in _pairs(13, 30):
        res = distance(HYPERBOLIC, p, q, cfg)
        assert res.converged, (p, q, res.length)
        base = project_to_base(HYPERBOLIC, res)
        assert abs(polyline_length(Line(), base) - base_distance(Line(), p[:1], q[:1])) <= 3 * cfg.length_tol


def test_restarts_used_names_the_winning_start():
    p, q = [0.0, 0.0], [1.0, 0.0]
    assert distance(HYPERBOLIC, p, q, SolverConfig(restarts=0)).restarts_used == 0
    # a chord has no interior waypoints, so only the first start runs
    assert distance(HYPERBOLIC, p, q, SolverConfig(n_waypoints=2, restarts=4)).restarts_used == 0
    for p, q in _pairs(14, 5):
        cfg = SolverConfig(n_waypoints=17, restarts=4)
        assert 0 <= distance(HYPERBOLIC, p, q, cfg).restarts_used <= cfg.restarts


def test_solver_is_bit_identical_across_runs():
    cfg = SolverConfig(n_waypoints=17, restarts=2, rng_seed=7)
    for p, q in _pairs(15, 3):
        a, b = distance(HYPERBOLIC, p, q, cfg), distance(HYPERBOLIC, p, q, cfg)
        assert a.length == b.length
        assert np.array_equal(a.path.waypoints, b.path.waypoints)
        assert a.restarts_used == b.restarts_used
