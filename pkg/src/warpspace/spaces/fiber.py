"""The warp vector λ ∈ ℝ^E and points t of the fiber ℝ^E."""

import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from ..errors import SchemaError


@dataclass(frozen=True)
class WarpVector:
    edge_order: Tuple[str, ...]
    lambdas: Tuple[float, ...]   # aligned with edge_order

    def __post_init__(self):
        object.__setattr__(self, "edge_order", tuple(str(e) for e in self.edge_order))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if len(set(self.edge_order)) != len(self.edge_order):
            raise SchemaError(f"duplicate edge ids in warp vector: {list(self.edge_order)}")
        if len(self.lambdas) != len(self.edge_order):
            raise SchemaError("warp vector needs exactly one lambda per edge")
        for e, v in zip(self.edge_order, self.lambdas):
            if not (math.isfinite(v) and v > 0):
                raise SchemaError(f"lambda({e}) must be positive, got {v!r}")

    @classmethod
    def from_mapping(cls, edges: Sequence[str], lambdas: Mapping[str, float]) -> "WarpVector":
        if set(edges) != set(lambdas):
            raise SchemaError(f"warp edges {list(edges)} do not cover lambda keys {sorted(lambdas)}")
        return cls(tuple(edges), tuple(lambdas[e] for e in edges))

    @classmethod
    def single(cls, lam: float, edge: str = "s") -> "WarpVector":
        return cls((edge,), (lam,))

    def __len__(self) -> int:
        return len(self.edge_order)

    def index(self, e: str) -> int:
        try:
            return self.edge_order.index(e)
        except ValueError:
            raise SchemaError(f"unknown edge id {e!r}; warp edges are {list(self.edge_order)}") from None

    def lam(self, e: str) -> float:
        return self.lambdas[self.index(e)]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.lambdas, dtype=float)

    @property
    def log_lambdas(self) -> np.ndarray:
        return np.log(self.array)

    def delta(self, e: str) -> np.ndarray:
        """δ_e, the indicator vector of edge e."""
        d = np.zeros(len(self))
        d[self.index(e)] = 1.0
        return d

    def to_json(self) -> Dict[str, Any]:
        return {"edges": list(self.edge_order), "lambdas": dict(zip(self.edge_order, self.lambdas))}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "WarpVector":
        if not isinstance(d, dict) or "edges" not in d or "lambdas" not in d:
            raise SchemaError(f"warp vector must look like {{'edges': [...], 'lambdas': {{...}}}}, got {d!r}")
        return cls.from_mapping(list(d["edges"]), {str(k): float(v) for k, v in d["lambdas"].items()})


def fiber_coord(warp: WarpVector, t: Union[Mapping[str, float], Sequence[float], np.ndarray]) -> np.ndarray:
    """A point of ℝ^E as an array ordered by warp.edge_order."""
    if isinstance(t, Mapping):
        if set(t) != set(warp.edge_order):
            raise SchemaError(f"fiber keys {sorted(t)} do not match warp edges {list(warp.edge_order)}")
        return np.array([float(t[e]) for e in warp.edge_order])
    arr = np.asarray(t, dtype=float)
    if arr.shape[-1:] != (len(warp),):
        raise SchemaError(f"fiber coordinate needs {len(warp)} entries, got shape {arr.shape}")
    return arr


def warp_factor(warp: WarpVector, t: Any) -> Union[float, np.ndarray]:
    """f_λ(t) = ∏_e λ(e)^{t_e}; vectorized over leading axes of t."""
    s = fiber_coord(warp, t)
    out = np.prod(np.power(warp.array, s), axis=-1)
    return float(out) if np.ndim(out) == 0 else out
