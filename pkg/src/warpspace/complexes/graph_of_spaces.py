"""
Graphs of spaces: vertex spaces X_v, edge spaces Y_e = Y_ē and attaching
maps φ_e: Y_e → λ_e·X_{∂e}, plus the spaces realized from them.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Tuple

from ..errors import CertificationError, SchemaError
from ..logs import get_logger
from ..quotient.identification import Chart, Identification
from ..quotient.space import Piece, QuotientSpace, check_identification, warp_quotient
from ..spaces.descriptors import Circle, descriptor_from_json, dim, scaled
from ..spaces.fiber import WarpVector
from ..spaces.maps import CircleCover, Identity, ScaledIdentity, Shift, map_from_json, product
from .cylinders import bottom, cylinder_pieces, top
from .gluing import GluingCertificate, certify_gluing

log = get_logger("complexes.graph_of_spaces")

TOTAL_SPACE_CLAIM = "homotopy equivalent to the total space of the graph of spaces (not verified)"


# -----------------------------
# Spec
# -----------------------------

@dataclass(frozen=True)
class EdgeSpec:
    id: str
    bar: str
    origin: str
    space: Any       # Y_e
    map: Any         # φ_e
    lam: float

    def to_json(self) -> Dict[str, Any]:
        return {"id": self.id, "bar": self.bar, "origin": self.origin, "space": self.space.to_json(),
                "map": self.map.to_json(), "lambda": self.lam}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "EdgeSpec":
        if not isinstance(d, dict):
            raise SchemaError(f"edge must be an object, got {d!r}")
        for key in ("id", "bar", "origin"):
            if key not in d:
                raise SchemaError(f"edge {d.get('id', '?')!r}: missing field {key!r}")
        if "k" in d:
            # integer shorthand: degree-k circle cover Circle(1) → Circle(1/|k|)
            fmap = CircleCover(d["k"])
            lam = float(d.get("lambda", 1.0 / abs(fmap.k)))
            space = descriptor_from_json(d["space"]) if "space" in d else Circle(1.0)
        elif "map" in d:
            fmap = map_from_json(d["map"])
            lam = float(d.get("lambda", 1.0))
            if "space" not in d:
                raise SchemaError(f"edge {d['id']!r}: missing field 'space'")
            space = descriptor_from_json(d["space"])
        else:
            raise SchemaError(f"edge {d['id']!r}: needs 'k' or 'map'")
        return cls(str(d["id"]), str(d["bar"]), str(d["origin"]), space, fmap, lam)


@dataclass(frozen=True)
class GraphOfSpacesSpec:
    vertices: Tuple[Tuple[str, Any], ...]
    edges: Tuple[EdgeSpec, ...] = ()
    orientation: Tuple[str, ...] = ()
    tree: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((str(v), s) for v, s in self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "orientation", tuple(str(e) for e in self.orientation))
        object.__setattr__(self, "tree", tuple(str(e) for e in self.tree))
        self._validate()

    def _validate(self) -> None:
        if not self.vertices:
            raise SchemaError("graph has no vertices")
        vids = [v for v, _ in self.vertices]
        if len(set(vids)) != len(vids):
            raise SchemaError(f"duplicate vertex ids: {vids}")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise SchemaError(f"duplicate edge ids: {eids}")
        by_id = {e.id: e for e in self.edges}
        for e in self.edges:
            if e.origin not in vids:
                raise SchemaError(f"edge {e.id!r}: unknown origin vertex {e.origin!r}")
            if e.bar not in by_id or e.bar == e.id:
                raise SchemaError(f"edge {e.id!r}: bar {e.bar!r} must be another declared edge")
            if by_id[e.bar].bar != e.id:
                raise SchemaError(f"edge {e.id!r}: bar of bar is {by_id[e.bar].bar!r}")
            if by_id[e.bar].space != e.space:
                raise SchemaError(f"edges {e.id!r} and {e.bar!r} must share one edge space")
            if not (math.isfinite(e.lam) and e.lam > 0):
                raise SchemaError(f"edge {e.id!r}: lambda must be positive, got {e.lam!r}")
        for e in self.orientation:
            if e not in by_id:
                raise SchemaError(f"orientation names unknown edge {e!r}")
        for e in self.edges:
            if (e.id in self.orientation) == (e.bar in self.orientation):
                raise SchemaError(f"orientation must contain exactly one of {e.id!r}, {e.bar!r}")
        for e in self.tree:
            if e not in by_id:
                raise SchemaError(f"tree names unknown edge {e!r}")

    def vertex_space(self, v: str) -> Any:
        for vid, s in self.vertices:
            if vid == v:
                return s
        raise SchemaError(f"unknown vertex {v!r}")

    def edge(self, e: str) -> EdgeSpec:
        for edge in self.edges:
            if edge.id == e:
                return edge
        raise SchemaError(f"unknown edge {e!r}")

    @cached_property
    def certificates(self) -> Dict[str, GluingCertificate]:
        """φ_e: Y_e → λ_e·X_{∂e}, certified per oriented edge."""
        out = {}
        for e in self.edges:
            target = scaled(e.lam, self.vertex_space(e.origin))
            try:
                out[e.id] = certify_gluing(e.map, e.space, target)
            except CertificationError as err:
                raise CertificationError(f"edge {e.id!r}: {err}") from err
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "vertices": [{"id": v, "space": s.to_json()} for v, s in self.vertices],
            "edges": [e.to_json() for e in self.edges],
            "orientation": list(self.orientation),
            "tree": list(self.tree),
        }

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "GraphOfSpacesSpec":
        if not isinstance(d, dict):
            raise SchemaError("graph-of-spaces spec must be a JSON object")
        verts = []
        for v in d.get("vertices", []):
            if isinstance(v, dict):
                if "id" not in v:
                    raise SchemaError(f"vertex needs an 'id': {v!r}")
                space = descriptor_from_json(v["space"]) if "space" in v else Circle(1.0)
                verts.append((str(v["id"]), space))
            else:
                verts.append((str(v), Circle(1.0)))
        return cls(tuple(verts), tuple(EdgeSpec.from_json(e) for e in d.get("edges", [])),
                   tuple(d.get("orientation", [])), tuple(d.get("tree", [])))


# -----------------------------
# Metric realizations
# -----------------------------

def _two_sided_parts(spec: GraphOfSpacesSpec, e: str):
    if e not in spec.orientation:
        raise SchemaError(f"edge {e!r} is not in the orientation")
    eb = spec.edge(e).bar
    ce, cb = spec.certificates[e], spec.certificates[eb]
    if ce.domain != cb.domain:
        raise CertificationError(f"edges {e!r} and {eb!r} certify different edge spaces")
    dy = dim(ce.domain)
    pe, seam_e = cylinder_pieces(ce, f"{e}:Y", f"{e}:X")
    pb, seam_b = cylinder_pieces(cb, f"{eb}:Y", f"{eb}:X")
    join = Identification(bottom(f"{e}:Y", dy), bottom(f"{eb}:Y", dy), Identity(dy), f"join:{e}")
    marks = ((f"X_{e}", top(f"{e}:X", dim(ce.codomain))), (f"X_{eb}", top(f"{eb}:X", dim(cb.codomain))))
    return pe + pb, (seam_e, seam_b, join), marks


def build_two_sided_cylinder(spec: GraphOfSpacesSpec, e: str) -> QuotientSpace:
    """C(φ_e) ⊔ C(φ_ē) glued along their Y×{0} copies; X_e, X_ē marked at the far ends."""
    pieces, idents, marks = _two_sided_parts(spec, e)
    return QuotientSpace(pieces, idents, marks)


def build_multiwarp_space(spec: GraphOfSpacesSpec) -> Any:
    """
    ⊔ X_v ×_λ ℝ^E  ⊔  ⊔_{e∈O} C(φ_e, φ_ē) ×_λ ℝ^E, with X_{e*} ×_λ ℝ^E ∋ (x, t) ∼ (x, t + δ_{e*})
    in X_{∂e*} ×_λ ℝ^E. Only edges with λ_e ≠ 1 get a fiber coordinate.
    """
    if not spec.edges and len(spec.vertices) == 1:
        return spec.vertices[0][1]
    warp_edges = [e for e in spec.edges if e.lam != 1.0]
    warp = WarpVector(tuple(e.id for e in warp_edges), tuple(e.lam for e in warp_edges))
    ne = len(warp)

    pieces: List[Piece] = [Piece(f"v:{v}", s) for v, s in spec.vertices]
    idents: List[Identification] = []
    marks: List[Tuple[str, Chart]] = []
    for e in spec.orientation:
        p, i, m = _two_sided_parts(spec, e)
        pieces.extend(p)
        idents.extend(i)
        marks.extend(m)
    q = warp_quotient(QuotientSpace(tuple(pieces), tuple(idents), tuple(marks)), warp)

    boundary = []
    for e in spec.orientation:
        for es in (spec.edge(e), spec.edge(spec.edge(e).bar)):
            d = dim(spec.vertex_space(es.origin))
            inner = ScaledIdentity(es.lam, d) if es.lam != 1.0 else Identity(d)
            fiber = Shift(tuple(warp.delta(es.id))) if es.lam != 1.0 else Identity(ne)
            ident = Identification(top(f"{es.id}:X", d).lifted(d + 1, ne),
                                   Chart(f"v:{es.origin}", (), tuple(range(d + ne))),
                                   product(inner, fiber), f"attach:{es.id}")
            boundary.append(ident)
    out = QuotientSpace(q.pieces, q.identifications + tuple(boundary), q.marks, (TOTAL_SPACE_CLAIM,))
    for ident in boundary:
        check_identification(out, ident)
    log.info("multiwarp space: %d pieces, %d identifications, fiber dimension %d",
             len(out.pieces), len(out.identifications), ne)
    return out


# -----------------------------
# Combinatorial bookkeeping
# -----------------------------

def _wire(pieces: Dict[str, Dict[str, Any]], glue: List[Dict[str, Any]]) -> Dict[str, Any]:
    for g in glue:
        src, dst = pieces[g["from"]], pieces[g["to"]]
        if g["to"] not in src["glued_to"]:
            src["glued_to"].append(g["to"])
        if g["from"] not in dst["glued_from"]:
            dst["glued_from"].append(g["from"])
    out = list(pieces.values())
    for p in out:
        p["glued_to"].sort()
        p["glued_from"].sort()
    return {"pieces": sorted(out, key=lambda x: x["id"]), "identifications": sorted(glue, key=lambda x: x["id"])}


def build_total_space_combinatorial(spec: GraphOfSpacesSpec) -> Dict[str, Any]:
    """
    Pieces and gluings (no metric) of the total space, built from Y_e × [0,1]
    per oriented edge, and of its mapping-cylinder realization, built from
    one double cylinder per oriented edge.
    """
    def piece(pid: str, kind: str, space: Any) -> Dict[str, Any]:
        return {"id": pid, "kind": kind, "space": space.to_json(), "glued_to": [], "glued_from": []}

    vertex_pieces = {f"vertex:{v}": piece(f"vertex:{v}", "vertex", s) for v, s in spec.vertices}

    total = dict((k, dict(v, glued_to=[], glued_from=[])) for k, v in vertex_pieces.items())
    total_glue: List[Dict[str, Any]] = []
    cyl = dict((k, dict(v, glued_to=[], glued_from=[])) for k, v in vertex_pieces.items())
    cyl_glue: List[Dict[str, Any]] = []
    for e in spec.orientation:
        edge = spec.edge(e)
        bar = spec.edge(edge.bar)
        total[f"edge:{e}"] = piece(f"edge:{e}", "edge", edge.space)
        cyl[f"cylinder:{e}"] = piece(f"cylinder:{e}", "double_cylinder", edge.space)
        # (y, t) ∼ (y, 1 − t) is absorbed by keeping only e ∈ O
        for end, es in ((0, edge), (1, bar)):
            total_glue.append({"id": f"{e}@{end}", "from": f"edge:{e}", "to": f"vertex:{es.origin}",
                               "level": end, "map": es.map.to_json(), "lambda": es.lam})
            cyl_glue.append({"id": f"X_{es.id}", "from": f"cylinder:{e}", "to": f"vertex:{es.origin}",
                             "map": es.map.to_json(), "lambda": es.lam})

    return {
        "orientation": list(spec.orientation),
        "total_space": _wire(total, total_glue),
        "cylinder_realization": _wire(cyl, cyl_glue),
        "claims": ["cylinder realization homotopy equivalent to the total space (not verified)"],
    }

