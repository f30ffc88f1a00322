from pathlib import Path

import pytest

from warpspace.audit.checks import net_pseudometric_check
from warpspace.complexes.cylinders import build_extended_cylinder, check_straight_collars
from warpspace.complexes.gluing import BIJECTIVE, SEPARATED_COVER
from warpspace.config import NetConfig
from warpspace.errors import SchemaError
from warpspace.groups.graph_of_groups import GraphOfGroupsSpec
from warpspace.groups.realize import PI1_CLAIM, certify_cover, circle_cover, realize_graph_of_groups, to_spaces_spec
from warpspace.jsonio import load_json
from warpspace.quotient.net import build_net
from warpspace.quotient.space import check_identification
from warpspace.spaces.descriptors import Circle, Warped

SPECS = Path(__file__).resolve().parents[2] / "data" / "specs"
COARSE = NetConfig(epsilon=0.25, fiber_window=(-1.0, 1.0))
BS23_NET = NetConfig(epsilon=0.5, edge_radius=1.5, fiber_window=(-1.0, 1.0))


def _spec(name: str) -> GraphOfGroupsSpec:
    return GraphOfGroupsSpec.from_json(load_json(SPECS / name))


@pytest.mark.parametrize("k", [1, -1, 2, -2, 3, -3])
def test_every_nonzero_degree_certifies(k):
    cert = certify_cover(k)
    if abs(k) == 1:
        assert cert.kind == BIJECTIVE
    else:
        assert cert.kind == SEPARATED_COVER
        assert cert.fiber_separation == pytest.approx(1.0 / (4 * abs(k)))


@pytest.mark.parametrize("k", [0, 1.5, True])
def test_circle_cover_degree_validation(k):
    with pytest.raises(SchemaError):
        circle_cover(k)


def test_spaces_spec_uses_unit_circles():
    spaces = to_spaces_spec(_spec("bs12.json"))
    assert [s for _, s in spaces.vertices] == [Circle(1.0)]
    assert [e.lam for e in spaces.edges] == [1.0, 0.5]


def test_bs12_realization():
    real = realize_graph_of_groups(_spec("bs12.json"))
    vertex = real.space.piece("v:v").space
    assert isinstance(vertex, Warped)
    assert vertex.warp.lambdas == (0.5,)
    assert real.presentation.to_text() == "⟨a, t | t a t^-1 = a^2⟩"
    assert real.to_json()["claims"] == [PI1_CLAIM]
    for ident in real.space.identifications:
        assert check_identification(real.space, ident) <= 1e-9


def test_bs12_net_is_a_pseudometric():
    net = build_net(realize_graph_of_groups(_spec("bs12.json")).space, COARSE)
    assert net_pseudometric_check(net, seed=0).passed


def test_cover_cylinder_collars():
    report = check_straight_collars(build_extended_cylinder(certify_cover(2)), n_samples=10)
    assert report.passed


def test_z_is_the_circle():
    assert realize_graph_of_groups(_spec("z.json")).space == Circle(1.0)


def test_trefoil_gets_one_fiber_coordinate_per_edge():
    real = realize_graph_of_groups(_spec("trefoil.json"))
    warp = real.space.piece("v:u").space.warp
    assert warp.edge_order == ("e", "E")
    assert warp.lambdas == pytest.approx((0.5, 1.0 / 3.0))
    assert real.presentation.to_text() == "⟨a, b | a^2 = b^3⟩"


@pytest.mark.slow
def test_bs23_pipeline():
    real = realize_graph_of_groups(_spec("bs23.json"))
    assert real.presentation.to_text() == "⟨a, t | t a^2 t^-1 = a^3⟩"
    assert real.space.piece("v:v").space.warp.edge_order == ("e", "E")
    assert net_pseudometric_check(build_net(real.space, BS23_NET), seed=2).passed
    for k in (2, 3):
        assert check_straight_collars(build_extended_cylinder(certify_cover(k)), n_samples=10).passed
