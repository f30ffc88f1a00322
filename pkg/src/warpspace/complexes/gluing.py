"""
Gluing certificates.

A map f: X → Y is accepted as a nonpositively curved gluing when it is a
local isometry that is either bijective or a covering whose fibers are
uniformly separated. Both properties are established by sampling.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..audit.checks import local_isometry_check
from ..errors import CertificationError, SchemaError
from ..logs import get_logger
from ..spaces.descriptors import descriptor_from_json, dim, normalize_point, sample_points
from ..spaces.maps import map_from_json
from ..spaces.metric_core import base_distance

log = get_logger("complexes.gluing")

BIJECTIVE = "BijectiveLocalIsometry"
SEPARATED_COVER = "SeparatedCover"


@dataclass(frozen=True)
class GluingCertificate:
    kind: str
    map: Any
    domain: Any
    codomain: Any
    fiber_separation: Optional[float] = None
    max_deviation: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "map": self.map.to_json(),
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "fiber_separation": self.fiber_separation,
            "max_deviation": self.max_deviation,
        }

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "GluingCertificate":
        if d.get("kind") not in (BIJECTIVE, SEPARATED_COVER):
            raise SchemaError(f"unknown certificate kind {d.get('kind')!r}")
        return cls(d["kind"], map_from_json(d["map"]), descriptor_from_json(d["domain"]),
                   descriptor_from_json(d["codomain"]), d.get("fiber_separation"), float(d.get("max_deviation", 0.0)))


def certify_gluing(fmap: Any, domain: Any, codomain: Any, n_samples: int = 200, radius: float = 0.05,
                   tol: float = 1e-9, seed: int = 0) -> GluingCertificate:
    if not (dim(domain) == fmap.dim == dim(codomain)):
        raise SchemaError(f"map of dimension {fmap.dim} between spaces of dimension "
                          f"{dim(domain)} and {dim(codomain)}")
    ok, dev = local_isometry_check(fmap, domain, codomain, radius, n_samples, tol, seed)
    if not ok:
        raise CertificationError(f"{fmap.kind} is not a local isometry {type(domain).__name__} -> "
                                 f"{type(codomain).__name__} (max relative deviation {dev:.3g})")

    rng = np.random.default_rng(seed + 1)
    fiber_sizes = set()
    spacing = np.inf
    for y in sample_points(codomain, rng, 20):
        fiber = np.array([normalize_point(domain, x, tol=1e-9) for x in fmap.preimages(y)])
        for x in fiber:
            if base_distance(codomain, fmap.apply(x), y) > 1e-9:
                raise CertificationError(f"{fmap.kind}: sampled preimage does not map back onto its point")
        fiber_sizes.add(len(fiber))
        for a, b in itertools.combinations(fiber, 2):
            spacing = min(spacing, base_distance(domain, a, b))

    if fiber_sizes == {1}:
        cert = GluingCertificate(BIJECTIVE, fmap, domain, codomain, None, dev)
    elif spacing > 0 and np.isfinite(spacing):
        # balls of radius spacing/4 around fiber points are pairwise disjoint
        cert = GluingCertificate(SEPARATED_COVER, fmap, domain, codomain, float(spacing / 4.0), dev)
    else:
        raise CertificationError(f"{fmap.kind}: fibers are not separated")
    log.debug("certified %s as %s", fmap.kind, cert.kind)
    return cert
