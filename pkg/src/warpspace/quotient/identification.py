"""
Gluing data for quotients.

A Chart picks out a coordinate slice of a piece: some coordinates are fixed,
the free ones are the chart parameters. An Identification pairs the
parameters of a source chart with those of a target chart through a map
descriptor; the pairing must be an isometry between the two slices.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..errors import SchemaError
from ..spaces.maps import map_from_json

CHART_TOL = 1e-9


@dataclass(frozen=True)
class Chart:
    piece: str
    fixed: Tuple[Tuple[int, float], ...]
    free: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "fixed", tuple((int(i), float(v)) for i, v in self.fixed))
        object.__setattr__(self, "free", tuple(int(i) for i in self.free))
        used = [i for i, _ in self.fixed] + list(self.free)
        if len(set(used)) != len(used):
            raise SchemaError(f"chart on {self.piece!r} uses a coordinate twice: {used}")

    @property
    def dim(self) -> int:
        return len(self.fixed) + len(self.free)

    def contains(self, coords: np.ndarray, tol: float = CHART_TOL) -> np.ndarray:
        coords = np.atleast_2d(coords)
        mask = np.ones(len(coords), dtype=bool)
        for i, v in self.fixed:
            mask &= np.abs(coords[:, i] - v) <= tol
        return mask

    def params(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords)[..., list(self.free)]

    def embed(self, params: np.ndarray) -> np.ndarray:
        params = np.atleast_2d(params)
        out = np.zeros((len(params), self.dim))
        for i, v in self.fixed:
            out[:, i] = v
        out[:, list(self.free)] = params
        return out

    def lifted(self, offset: int, extra: int) -> "Chart":
        """Same slice in a piece with `extra` coordinates appended at `offset`."""
        return Chart(self.piece, self.fixed, self.free + tuple(range(offset, offset + extra)))

    def to_json(self) -> Dict[str, Any]:
        return {"piece": self.piece, "fixed": [[i, v] for i, v in self.fixed], "free": list(self.free)}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Chart":
        try:
            return cls(str(d["piece"]), tuple((int(i), float(v)) for i, v in d.get("fixed", [])),
                       tuple(int(i) for i in d.get("free", [])))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"invalid chart {d!r}: {e}") from e


@dataclass(frozen=True)
class Identification:
    source: Chart
    target: Chart
    pairing: Any
    label: str = ""

    def __post_init__(self):
        if not (len(self.source.free) == self.pairing.dim == len(self.target.free)):
            raise SchemaError(
                f"identification {self.label!r}: chart parameters ({len(self.source.free)}, "
                f"{len(self.target.free)}) do not match pairing dimension {self.pairing.dim}")

    def forward(self, source_coords: np.ndarray) -> np.ndarray:
        return self.target.embed(self.pairing.apply(self.source.params(np.atleast_2d(source_coords))))

    def backward(self, target_coords: np.ndarray) -> np.ndarray:
        """All source points glued to each target point, stacked."""
        rows = []
        for y in self.target.params(np.atleast_2d(target_coords)):
            rows.append(self.source.embed(self.pairing.preimages(y)))
        return np.vstack(rows) if rows else np.zeros((0, self.source.dim))

    def to_json(self) -> Dict[str, Any]:
        return {"label": self.label, "source": self.source.to_json(), "target": self.target.to_json(),
                "pairing": self.pairing.to_json()}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Identification":
        if not isinstance(d, dict) or not {"source", "target", "pairing"} <= set(d):
            raise SchemaError(f"identification needs source, target and pairing: {d!r}")
        return cls(Chart.from_json(d["source"]), Chart.from_json(d["target"]), map_from_json(d["pairing"]),
                   str(d.get("label", "")))
