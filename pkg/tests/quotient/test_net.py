from pathlib import Path

import numpy as np
import pytest

from warpspace.audit.checks import net_pseudometric_check
from warpspace.config import NetConfig
from warpspace.errors import DisconnectedError, SchemaError
from warpspace.geodesic.solver import distance
from warpspace.quotient.chains import chain_infimum_bruteforce
from warpspace.quotient.net import build_net, lonely_nodes, parse_piece_point, quotient_distance
from warpspace.quotient.space import Piece, QuotientSpace
from warpspace.spaces.descriptors import Interval
from warpspace.spaces.resolve import load_space

SPECS = Path(__file__).resolve().parents[2] / "data" / "specs"
EPS = 0.05


@pytest.fixture(scope="module")
def interval_circle():
    return load_space(SPECS / "interval_circle.json")


@pytest.fixture(scope="module")
def torus():
    return load_space(SPECS / "torus.json")


def test_path_graph_of_an_interval():
    net = build_net(Interval(0.0, 1.0), NetConfig(epsilon=0.1, edge_radius=1.0))
    assert net.n_nodes == 11
    assert len(net.edges) == 10
    ends = [i for i in range(net.n_nodes) if net.node(i)[1][0] in (0.0, 1.0)]
    assert quotient_distance(net, ends[0], ends[1]) == pytest.approx(1.0)
    assert lonely_nodes(net) == 0


def test_interval_circle_against_chain_oracle(interval_circle):
    res = distance(interval_circle, [0.05], [0.95], net_cfg=NetConfig(epsilon=EPS))
    assert res.method == "net" and res.epsilon == EPS
    oracle = chain_infimum_bruteforce(interval_circle, [0.05], [0.95], 2, [[0.0], [1.0]])
    assert oracle == pytest.approx(0.1)
    assert abs(res.length - oracle) <= 2 * EPS


def test_chain_oracle_without_gluing_is_the_piece_distance(interval_circle):
    assert chain_infimum_bruteforce(interval_circle, [0.05], [0.95], 1, [[0.0], [1.0]]) == pytest.approx(0.9)


@pytest.mark.parametrize("chain_len", [0, 5])
def test_chain_oracle_rejects_chain_length_out_of_range(interval_circle, chain_len):
    with pytest.raises(SchemaError):
        chain_infimum_bruteforce(interval_circle, [0.05], [0.95], chain_len, [[0.0], [1.0]])


def test_chain_oracle_caps_the_sample_set(interval_circle):
    samples = [[float(x)] for x in np.linspace(0.0, 1.0, 201)]
    with pytest.raises(SchemaError):
        chain_infimum_bruteforce(interval_circle, [0.05], [0.95], 2, samples)
    assert chain_infimum_bruteforce(interval_circle, [0.05], [0.95], 4, samples[:200]) == pytest.approx(0.1)


def test_flat_torus(torus):
    p = {"piece": "Q", "coord": [0.1, 0.5]}
    q = {"piece": "Q", "coord": [0.9, 0.5]}
    res = distance(torus, p, q, net_cfg=NetConfig(epsilon=EPS))
    assert abs(res.length - 0.2) <= 2 * EPS
    oracle = chain_infimum_bruteforce(torus, p, q, 2, [["Q", [0.0, 0.5]], ["Q", [1.0, 0.5]]])
    assert oracle == pytest.approx(0.2)
    assert res.net_path[0][0] == "Q"


def test_net_is_a_pseudometric(torus):
    net = build_net(torus, NetConfig(epsilon=0.1))
    assert net.n_nodes <= 200
    report = net_pseudometric_check(net, seed=1)
    assert report.passed, report.to_json()
    corners = [i for i in range(net.n_nodes) if np.all(np.isin(net.node(i)[1], (0.0, 1.0)))]
    assert len(corners) == 4
    d = net.distances_from(corners)[:, corners]
    np.testing.assert_array_equal(d, np.zeros((4, 4)))


def test_net_json_export(interval_circle):
    out = build_net(interval_circle, NetConfig(epsilon=0.25)).to_json()
    assert out["epsilon"] == 0.25
    assert len(out["nodes"]) == 5
    assert {"id", "piece", "coord"} == set(out["nodes"][0])
    assert [e for e in out["edges"] if e[2] == 0.0]


def test_disconnected_pieces():
    q = QuotientSpace((Piece("A", Interval(0.0, 1.0)), Piece("B", Interval(0.0, 1.0))))
    with pytest.raises(DisconnectedError):
        distance(q, ["A", [0.5]], ["B", [0.5]], net_cfg=NetConfig(epsilon=0.25))


def test_points_must_name_a_piece_when_ambiguous():
    q = QuotientSpace((Piece("A", Interval(0.0, 1.0)), Piece("B", Interval(0.0, 1.0))))
    with pytest.raises(SchemaError):
        parse_piece_point(q, [0.5])
    with pytest.raises(SchemaError):
        parse_piece_point(q, {"piece": "C", "coord": [0.5]})
