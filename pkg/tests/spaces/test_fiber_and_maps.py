import numpy as np
import pytest
from numpy.testing import assert_allclose

from warpspace.errors import SchemaError
from warpspace.spaces.fiber import WarpVector, fiber_coord, warp_factor
from warpspace.spaces.maps import (Affine, CircleCover, Identity, ProductMap, ScaledIdentity, Shift, map_from_json,
                                   product)


def test_warp_factor_is_product_of_powers():
    warp = WarpVector(("e", "f"), (2.0, 3.0))
    assert warp_factor(warp, [1.0, 2.0]) == pytest.approx(18.0)
    assert warp_factor(warp, {"e": -1.0, "f": 0.0}) == pytest.approx(0.5)
    assert_allclose(warp_factor(warp, np.zeros((4, 2))), np.ones(4))


def test_warp_vector_validation():
    with pytest.raises(SchemaError):
        WarpVector(("e",), (0.0,))
    with pytest.raises(SchemaError):
        WarpVector(("e", "e"), (2.0, 2.0))
    with pytest.raises(SchemaError):
        WarpVector.from_mapping(["e"], {"f": 2.0})
    with pytest.raises(SchemaError):
        fiber_coord(WarpVector.single(2.0), {"x": 1.0})


def test_warp_vector_json_and_delta():
    warp = WarpVector(("e", "f"), (2.0, 0.5))
    assert WarpVector.from_json(warp.to_json()) == warp
    assert_allclose(warp.delta("f"), [0.0, 1.0])
    with pytest.raises(SchemaError):
        warp.index("g")


@pytest.mark.parametrize("k", [2, -3])
def test_circle_cover_preimages_map_back(k):
    fmap = CircleCover(k)
    y = np.array([0.3])
    pre = fmap.preimages(y)
    assert len(pre) == abs(k)
    for x in pre:
        assert_allclose(fmap.apply(x), y, atol=1e-12)


def test_circle_cover_rejects_zero_degree():
    with pytest.raises(SchemaError):
        CircleCover(0)


def test_product_flattens_and_drops_empty_parts():
    p = product(Identity(0), product(ScaledIdentity(2.0, 1), Shift((1.0,))), Identity(1))
    assert isinstance(p, ProductMap)
    assert [part.kind for part in p.parts] == ["scaled_identity", "shift", "identity"]
    assert_allclose(p.apply(np.array([0.5, 0.0, 2.0])), [0.5, 1.0, 2.0])
    assert product(Identity(0), Shift((1.0,))) == Shift((1.0,))


def test_map_json():
    fmap = product(Affine((2.0,), (1.0,)), CircleCover(3))
    assert map_from_json(fmap.to_json()) == fmap
    with pytest.raises(SchemaError):
        map_from_json({"kind": "rotation"})
    with pytest.raises(SchemaError):
        Affine((0.0,), (1.0,))
