"""
Coordinate maps used by gluings and identifications.

Every map here sends a d-vector of coordinates to a d-vector; `apply` is
vectorized over leading axes. Metric meaning comes from the domain/codomain
descriptors the map is paired with, not from the map itself.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..errors import SchemaError


@dataclass(frozen=True)
class Identity:
    dim: int
    kind = "identity"

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=float)

    def preimages(self, y: np.ndarray) -> np.ndarray:
        return np.array(y, dtype=float)[None, :]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "identity", "dim": self.dim}


@dataclass(frozen=True)
class Affine:
    scale: Tuple[float, ...]
    offset: Tuple[float, ...]
    kind = "affine"

    def __post_init__(self):
        object.__setattr__(self, "scale", tuple(float(s) for s in self.scale))
        object.__setattr__(self, "offset", tuple(float(s) for s in self.offset))
        if len(self.scale) != len(self.offset):
            raise SchemaError("affine map: scale and offset lengths differ")
        if any(s == 0 for s in self.scale):
            raise SchemaError("affine map: zero scale is not a gluing")

    @property
    def dim(self) -> int:
        return len(self.scale)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) * np.array(self.scale) + np.array(self.offset)

    def preimages(self, y: np.ndarray) -> np.ndarray:
        return ((np.asarray(y, dtype=float) - np.array(self.offset)) / np.array(self.scale))[None, :]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "affine", "scale": list(self.scale), "offset": list(self.offset)}


@dataclass(frozen=True)
class CircleCover:
    """x ↦ k·x on circle coordinates, measured in units of each side's period."""
    k: int
    period_in: float = 1.0
    period_out: float = 1.0
    kind = "circle_cover"

    def __post_init__(self):
        if int(self.k) != self.k or self.k == 0:
            raise SchemaError(f"circle cover degree must be a nonzero integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def dim(self) -> int:
        return 1

    def apply(self, x: np.ndarray) -> np.ndarray:
        u = np.asarray(x, dtype=float) / self.period_in
        y = np.mod(self.k * u, 1.0) * self.period_out
        return np.where(y >= self.period_out, 0.0, y)

    def preimages(self, y: np.ndarray) -> np.ndarray:
        u = float(np.asarray(y).ravel()[0]) / self.period_out
        xs = [np.mod((u + j) / self.k, 1.0) * self.period_in for j in range(abs(self.k))]
        return np.array(sorted(xs))[:, None]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "circle_cover", "k": self.k, "period_in": self.period_in, "period_out": self.period_out}


@dataclass(frozen=True)
class ScaledIdentity:
    """Coordinates unchanged; used for λX → X style relabelings."""
    factor: float
    dim: int = 1
    kind = "scaled_identity"

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.array(x, dtype=float)

    def preimages(self, y: np.ndarray) -> np.ndarray:
        return np.array(y, dtype=float)[None, :]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "scaled_identity", "factor": self.factor, "dim": self.dim}


@dataclass(frozen=True)
class Shift:
    delta: Tuple[float, ...]
    kind = "shift"

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(float(d) for d in self.delta))

    @property
    def dim(self) -> int:
        return len(self.delta)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) + np.array(self.delta)

    def preimages(self, y: np.ndarray) -> np.ndarray:
        return (np.asarray(y, dtype=float) - np.array(self.delta))[None, :]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "shift", "delta": list(self.delta)}


@dataclass(frozen=True)
class ProductMap:
    parts: Tuple[Any, ...]
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.parts)

    def _slices(self):
        start = 0
        for p in self.parts:
            yield p, slice(start, start + p.dim)
            start += p.dim

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not self.parts:
            return x.copy()
        return np.concatenate([p.apply(x[..., sl]) for p, sl in self._slices()], axis=-1)

    def preimages(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        options = [p.preimages(y[sl]) for p, sl in self._slices()]
        rows = [np.concatenate(combo) for combo in itertools.product(*options)]
        return np.array(rows) if rows else np.zeros((1, 0))

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "product", "parts": [p.to_json() for p in self.parts]}


def product(*parts: Any) -> Any:
    """Flatten nested products and drop zero-dimensional parts."""
    flat = []
    for p in parts:
        if isinstance(p, ProductMap):
            flat.extend(p.parts)
        elif p.dim > 0:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return ProductMap(tuple(flat))


def map_from_json(d: Dict[str, Any]) -> Any:
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError(f"map descriptor must be an object with a 'kind', got {d!r}")
    kind = d["kind"]
    try:
        if kind == "identity":
            return Identity(int(d.get("dim", 1)))
        if kind == "affine":
            return Affine(tuple(d["scale"]), tuple(d["offset"]))
        if kind == "circle_cover":
            return CircleCover(d["k"], float(d.get("period_in", 1.0)), float(d.get("period_out", 1.0)))
        if kind == "scaled_identity":
            return ScaledIdentity(float(d["factor"]), int(d.get("dim", 1)))
        if kind == "shift":
            return Shift(tuple(d["delta"]))
        if kind == "product":
            return ProductMap(tuple(map_from_json(p) for p in d["parts"]))
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"invalid {kind!r} map descriptor: {e}") from e
    raise SchemaError(f"unknown map kind {kind!r}")
