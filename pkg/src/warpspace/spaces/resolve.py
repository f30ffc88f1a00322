"""
Named definitions in space files.

A space file is either a bare descriptor or
    {"definitions": {name: descriptor, ...}, "space": descriptor}
where any descriptor may contain {"kind": "ref", "name": ...}. Definitions
are expanded leaf-first in Kahn order; a reference cycle is rejected.
"""

from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List, Set

from ..errors import SchemaError
from ..jsonio import load_json
from .descriptors import descriptor_from_json

# ---------- helpers ----------

def _refs(node: Any) -> Set[str]:
    """Names referenced anywhere inside a JSON descriptor."""
    found: Set[str] = set()
    if isinstance(node, dict):
        if node.get("kind") == "ref":
            name = node.get("name")
            if not isinstance(name, str):
                raise SchemaError(f"ref needs a string 'name', got {node!r}")
            found.add(name)
        for v in node.values():
            found |= _refs(v)
    elif isinstance(node, list):
        for v in node:
            found |= _refs(v)
    return found


def _substitute(node: Any, expanded: Dict[str, Any]) -> Any:
    if isinstance(node, dict):
        if node.get("kind") == "ref":
            return expanded[node["name"]]
        return {k: _substitute(v, expanded) for k, v in node.items()}
    if isinstance(node, list):
        return [_substitute(v, expanded) for v in node]
    return node

# ---------- topo sort core ----------

def definition_order(definitions: Dict[str, Any]) -> List[str]:
    """
    Leaf-first order of the definitions.
    - Nodes: definition names.
    - Edges: d -> name whenever definition `name` references d.
    """
    names = set(definitions)
    out_e = defaultdict(set)
    in_deg = {n: 0 for n in names}
    for name, body in definitions.items():
        for d in _refs(body):
            if d not in names:
                raise SchemaError(f"definition {name!r} references unknown name {d!r}")
            if name not in out_e[d]:
                out_e[d].add(name)
                in_deg[name] += 1

    # Kahn's algorithm
    q = sorted(n for n, d in in_deg.items() if d == 0)
    order: List[str] = []
    while q:
        v = q.pop(0)
        order.append(v)
        for w in sorted(out_e.get(v, [])):
            in_deg[w] -= 1
            if in_deg[w] == 0:
                q.append(w)
        q.sort()

    remaining = sorted(n for n, d in in_deg.items() if d > 0)
    if remaining:
        raise SchemaError(f"reference cycle among definitions: {remaining}")
    return order


def expand_refs(node: Any, definitions: Dict[str, Any]) -> Any:
    """Inline every ref in `node`, returning plain JSON."""
    if not isinstance(definitions, dict):
        raise SchemaError("'definitions' must be an object")
    expanded: Dict[str, Any] = {}
    for name in definition_order(definitions):
        expanded[name] = _substitute(definitions[name], expanded)
    missing = _refs(node) - set(expanded)
    if missing:
        raise SchemaError(f"unknown reference(s): {sorted(missing)}")
    return _substitute(node, expanded)


def space_from_document(doc: Any) -> Any:
    if isinstance(doc, dict) and "space" in doc:
        return descriptor_from_json(expand_refs(doc["space"], doc.get("definitions", {})))
    return descriptor_from_json(expand_refs(doc, {}))


def load_space(p: Path) -> Any:
    return space_from_document(load_json(Path(p)))
