"""
Graphs of infinite cyclic groups: every vertex and edge group is ℤ and the
edge monomorphisms are z ↦ k_e·z.

JSON shape:
    {"vertices": ["v", ...] or [{"id": "v", "generator": "a"}, ...],
     "edges": [{"id": "e", "bar": "E", "origin": "v", "k": 1, "letter": "t"}, ...],
     "tree": ["f", ...],
     "orientation": ["e", ...]}          # optional; default: first of each pair
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import networkx as nx

from ..errors import SchemaError


@dataclass(frozen=True)
class GroupEdge:
    id: str
    bar: str
    origin: str
    k: int
    letter: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k:
            raise SchemaError(f"edge {self.id!r}: k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if self.k == 0:
            raise SchemaError(f"edge {self.id!r}: k = 0 is not a monomorphism of Z")

    def to_json(self) -> Dict[str, Any]:
        d = {"id": self.id, "bar": self.bar, "origin": self.origin, "k": self.k}
        if self.letter is not None:
            d["letter"] = self.letter
        return d


@dataclass(frozen=True)
class GraphOfGroupsSpec:
    vertices: Tuple[str, ...]
    edges: Tuple[GroupEdge, ...] = ()
    tree: Tuple[str, ...] = ()
    orientation: Tuple[str, ...] = ()
    generator_names: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "tree", tuple(str(e) for e in self.tree))
        object.__setattr__(self, "generator_names", tuple(self.generator_names))
        self._validate_graph()
        if not self.orientation:
            object.__setattr__(self, "orientation", self._default_orientation())
        object.__setattr__(self, "orientation", tuple(str(e) for e in self.orientation))
        self._validate_orientation()
        self._validate_tree()

    # ---- validation ----

    def _validate_graph(self) -> None:
        if not self.vertices:
            raise SchemaError("graph of groups has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise SchemaError(f"duplicate vertex ids: {list(self.vertices)}")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise SchemaError(f"duplicate edge ids: {ids}")
        by_id = {e.id: e for e in self.edges}
        for e in self.edges:
            if e.origin not in self.vertices:
                raise SchemaError(f"edge {e.id!r}: unknown origin vertex {e.origin!r}")
            if e.bar not in by_id or e.bar == e.id or by_id[e.bar].bar != e.id:
                raise SchemaError(f"edge {e.id!r}: bar {e.bar!r} is not a consistent reverse edge")

    def _default_orientation(self) -> Tuple[str, ...]:
        picked = []
        for e in self.edges:
            if e.id not in picked and e.bar not in picked:
                picked.append(e.id)
        return tuple(picked)

    def _validate_orientation(self) -> None:
        for e in self.orientation:
            self.edge(e)
        for e in self.edges:
            if (e.id in self.orientation) == (e.bar in self.orientation):
                raise SchemaError(f"orientation must contain exactly one of {e.id!r}, {e.bar!r}")

    def _validate_tree(self) -> None:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.tree_pairs:
            edge = self.edge(e)
            g.add_edge(edge.origin, self.edge(edge.bar).origin, key=e)
        if not nx.is_tree(g):
            raise SchemaError(f"tree {list(self.tree)} is not a spanning tree of the graph")

    # ---- access ----

    def edge(self, e: str) -> GroupEdge:
        for edge in self.edges:
            if edge.id == e:
                return edge
        raise SchemaError(f"unknown edge {e!r}")

    @property
    def tree_pairs(self) -> Tuple[str, ...]:
        """Oriented representatives of the tree edges, in orientation order."""
        named = set(self.tree)
        for e in self.tree:
            self.edge(e)
        return tuple(e for e in self.orientation if e in named or self.edge(e).bar in named)

    def in_tree(self, e: str) -> bool:
        return e in self.tree_pairs or self.edge(e).bar in self.tree_pairs

    def generator(self, v: str) -> str:
        names = dict(self.generator_names)
        if v in names:
            return names[v]
        return "a" if len(self.vertices) == 1 else f"a_{v}"

    def stable_letter(self, e: str) -> str:
        edge = self.edge(e)
        if edge.letter is not None:
            return edge.letter
        free = [x for x in self.orientation if not self.in_tree(x)]
        if free == [e]:
            return "t"
        return f"t_{e}"

    # ---- JSON ----

    def to_json(self) -> Dict[str, Any]:
        names = dict(self.generator_names)
        verts = [{"id": v, "generator": names[v]} if v in names else v for v in self.vertices]
        return {"vertices": verts, "edges": [e.to_json() for e in self.edges], "tree": list(self.tree),
                "orientation": list(self.orientation)}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "GraphOfGroupsSpec":
        if not isinstance(d, dict):
            raise SchemaError("graph-of-groups spec must be a JSON object")
        verts, names = [], []
        for v in d.get("vertices", []):
            if isinstance(v, dict):
                if "id" not in v:
                    raise SchemaError(f"vertex needs an 'id': {v!r}")
                verts.append(str(v["id"]))
                if "generator" in v:
                    names.append((str(v["id"]), str(v["generator"])))
            else:
                verts.append(str(v))
        edges = []
        for e in d.get("edges", []):
            if not isinstance(e, dict):
                raise SchemaError(f"edge must be an object, got {e!r}")
            for key in ("id", "bar", "origin", "k"):
                if key not in e:
                    raise SchemaError(f"edge {e.get('id', '?')!r}: missing field {key!r}")
            edges.append(GroupEdge(str(e["id"]), str(e["bar"]), str(e["origin"]), e["k"], e.get("letter")))
        return cls(tuple(verts), tuple(edges), tuple(d.get("tree", [])), tuple(d.get("orientation", [])),
                   tuple(names))


def is_graph_of_groups(doc: Any) -> bool:
    """Graph-of-groups documents carry integer edges only; spaces documents carry maps or vertex spaces."""
    if not isinstance(doc, dict) or "vertices" not in doc:
        return False
    if any(isinstance(v, dict) and "space" in v for v in doc.get("vertices", [])):
        return False
    return all(isinstance(e, dict) and "map" not in e and "space" not in e for e in doc.get("edges", []))
