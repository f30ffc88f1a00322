"""
From a graph of cyclic groups to a nonpositively curved space: every vertex
and edge space is the unit circle, φ_e is the degree-k_e cover onto the
circle of circumference 1/|k_e|, and λ_e = 1/|k_e|.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

from ..complexes.gluing import GluingCertificate, certify_gluing
from ..complexes.graph_of_spaces import EdgeSpec, GraphOfSpacesSpec, build_multiwarp_space
from ..errors import CertificationError, SchemaError, WarpspaceError
from ..logs import get_logger
from ..spaces.descriptors import Circle, scaled
from ..spaces.maps import CircleCover
from .graph_of_groups import GraphOfGroupsSpec
from .presentation import Presentation, serre_presentation

log = get_logger("groups.realize")

PI1_CLAIM = "fundamental group isomorphic to that of the graph of groups (not verified)"


def circle_cover(k: int) -> CircleCover:
    """x ↦ k·x from Circle(1) onto Circle(1/|k|), in unit-circle coordinates on both sides."""
    if isinstance(k, bool) or int(k) != k or k == 0:
        raise SchemaError(f"circle cover degree must be a nonzero integer, got {k!r}")
    return CircleCover(int(k))


def cover_codomain(k: int) -> Any:
    return scaled(1.0 / abs(int(k)), Circle(1.0))


def certify_cover(k: int, seed: int = 0) -> GluingCertificate:
    return certify_gluing(circle_cover(k), Circle(1.0), cover_codomain(k), seed=seed)


def to_spaces_spec(spec: GraphOfGroupsSpec) -> GraphOfSpacesSpec:
    edges = tuple(EdgeSpec(e.id, e.bar, e.origin, Circle(1.0), circle_cover(e.k), 1.0 / abs(e.k))
                  for e in spec.edges)
    return GraphOfSpacesSpec(tuple((v, Circle(1.0)) for v in spec.vertices), edges, spec.orientation, spec.tree)


@dataclass(frozen=True)
class Realization:
    space: Any
    presentation: Presentation
    claims: Tuple[str, ...] = (PI1_CLAIM,)

    def to_json(self) -> Dict[str, Any]:
        return {"space": self.space.to_json(), "presentation": self.presentation.to_json(),
                "claims": list(self.claims)}


def realize_graph_of_groups(spec: GraphOfGroupsSpec) -> Realization:
    spaces = to_spaces_spec(spec)
    try:
        space = build_multiwarp_space(spaces)
    except CertificationError as err:
        # circle covers with k != 0 always certify
        raise WarpspaceError(f"internal error: circle-cover gluing rejected: {err}") from err
    pres = serre_presentation(spec)
    log.info("realized %s", pres.to_text())
    return Realization(space, pres)
