"""
Space descriptors: the algebraic description of a space built from primitives.

Every primitive (Line, Interval, Circle, Scaled, EuclideanProduct of those) is
a flat chart: points are flat coordinate vectors, and the metric is the
weighted Euclidean metric of the coordinate differences, with circle
coordinates compared modulo their circumference. `flat_chart()` exposes that
structure; everything else in this module is built on it.

Composite kinds (Warped here, QuotientSpace / CylinderSpace in their own
modules) register with `register_kind` so JSON parsing stays in one place.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import NonPrimitiveError, SchemaError
from .fiber import WarpVector

_KINDS: Dict[str, Callable[[Dict[str, Any]], Any]] = {}


def register_kind(kind: str):
    """Decorator: register `cls.from_json` as the parser for `kind`."""
    def deco(cls):
        _KINDS[kind] = cls.from_json
        return cls
    return deco


# -----------------------------
# Primitive kinds
# -----------------------------

@register_kind("line")
@dataclass(frozen=True)
class Line:
    kind = "line"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "line"}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Line":
        return cls()


@register_kind("interval")
@dataclass(frozen=True)
class Interval:
    a: float
    b: float
    kind = "interval"

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise SchemaError(f"interval needs finite a < b, got a={self.a!r}, b={self.b!r}")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "interval", "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Interval":
        return cls(float(_field(d, "a")), float(_field(d, "b")))


@register_kind("circle")
@dataclass(frozen=True)
class Circle:
    circumference: float = 1.0
    kind = "circle"

    def __post_init__(self):
        if not (math.isfinite(self.circumference) and self.circumference > 0):
            raise SchemaError(f"circle circumference must be positive, got {self.circumference!r}")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "circle", "circumference": self.circumference}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Circle":
        return cls(float(d.get("circumference", 1.0)))


@register_kind("scaled")
@dataclass(frozen=True)
class Scaled:
    factor: float
    inner: Any
    kind = "scaled"

    def __post_init__(self):
        if not (math.isfinite(self.factor) and self.factor > 0):
            raise SchemaError(f"scale factor must be positive, got {self.factor!r}")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "scaled", "factor": self.factor, "inner": self.inner.to_json()}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Scaled":
        return cls(float(_field(d, "factor")), descriptor_from_json(_field(d, "inner")))


@register_kind("product")
@dataclass(frozen=True)
class EuclideanProduct:
    factors: Tuple[Any, ...]
    kind = "product"

    def __post_init__(self):
        if not self.factors:
            raise SchemaError("product needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "EuclideanProduct":
        factors = _field(d, "factors")
        if not isinstance(factors, list):
            raise SchemaError("product.factors must be a list")
        return cls(tuple(descriptor_from_json(f) for f in factors))


@register_kind("warped")
@dataclass(frozen=True)
class Warped:
    """X ×_λ ℝ^E: inner coordinates first, then one fiber coordinate per edge."""
    inner: Any
    warp: WarpVector
    kind = "warped"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "warped", "inner": self.inner.to_json(), "warp": self.warp.to_json()}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Warped":
        return cls(descriptor_from_json(_field(d, "inner")), WarpVector.from_json(_field(d, "warp")))


SpaceDescriptor = Union[Line, Interval, Circle, Scaled, EuclideanProduct, Warped, Any]
PRIMITIVE_TYPES = (Line, Interval, Circle, Scaled, EuclideanProduct)


def scaled(factor: float, inner: Any) -> Any:
    """λX, collapsing λ = 1 to X itself."""
    return inner if factor == 1.0 else Scaled(float(factor), inner)


# -----------------------------
# JSON
# -----------------------------

def _field(d: Dict[str, Any], name: str) -> Any:
    if not isinstance(d, dict) or name not in d:
        raise SchemaError(f"missing field {name!r} in {d!r}")
    return d[name]


def _ensure_composite_kinds() -> None:
    # quotient and cylinder kinds register on import
    if "quotient" not in _KINDS:
        from ..quotient import space  # noqa: F401
    if "cylinder" not in _KINDS:
        from ..complexes import cylinders  # noqa: F401


def descriptor_from_json(d: Any) -> Any:
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError(f"space descriptor must be an object with a 'kind', got {d!r}")
    kind = d["kind"]
    if kind == "ref":
        raise SchemaError(f"unresolved reference {d.get('name')!r}; load files through resolve.load_space")
    if kind not in _KINDS:
        _ensure_composite_kinds()
    if kind not in _KINDS:
        raise SchemaError(f"unknown space kind {kind!r}")
    try:
        return _KINDS[kind](d)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"invalid {kind!r} descriptor: {e}") from e


# -----------------------------
# Flat charts
# -----------------------------

@dataclass(frozen=True)
class FlatChart:
    """Per-coordinate metric weight, circle period (nan = none) and bounds."""
    weights: np.ndarray
    periods: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def periodic(self) -> np.ndarray:
        return ~np.isnan(self.periods)


def is_primitive(space: Any) -> bool:
    if isinstance(space, (Line, Interval, Circle)):
        return True
    if isinstance(space, Scaled):
        return is_primitive(space.inner)
    if isinstance(space, EuclideanProduct):
        return all(is_primitive(f) for f in space.factors)
    return False


def flat_chart(space: Any) -> FlatChart:
    if not is_primitive(space):
        raise NonPrimitiveError(f"{type(space).__name__} has no closed-form metric")
    w, per, lo, hi = [], [], [], []
    _collect(space, 1.0, w, per, lo, hi)
    return FlatChart(np.array(w), np.array(per), np.array(lo), np.array(hi))


def _collect(space, scale, w, per, lo, hi) -> None:
    if isinstance(space, Line):
        w.append(scale); per.append(np.nan); lo.append(-np.inf); hi.append(np.inf)
    elif isinstance(space, Interval):
        w.append(scale); per.append(np.nan); lo.append(space.a); hi.append(space.b)
    elif isinstance(space, Circle):
        w.append(scale); per.append(space.circumference); lo.append(0.0); hi.append(space.circumference)
    elif isinstance(space, Scaled):
        _collect(space.inner, scale * space.factor, w, per, lo, hi)
    else:
        for f in space.factors:
            _collect(f, scale, w, per, lo, hi)


def dim(space: Any) -> int:
    if isinstance(space, Warped):
        return dim(space.inner) + len(space.warp)
    if is_primitive(space):
        return flat_chart(space).dim
    raise NonPrimitiveError(f"{type(space).__name__} points are piece-tagged; no flat dimension")


def inner_chart(space: Any) -> Tuple[FlatChart, int]:
    """(flat chart of the inner space, fiber dimension) for primitives and flat warps."""
    if isinstance(space, Warped):
        return flat_chart(space.inner), len(space.warp)
    return flat_chart(space), 0


# -----------------------------
# Points
# -----------------------------

def _flatten(p: Any) -> List[float]:
    if isinstance(p, (int, float, np.floating, np.integer)) and not isinstance(p, bool):
        return [float(p)]
    if isinstance(p, np.ndarray):
        return [float(x) for x in p.ravel()]
    if isinstance(p, (list, tuple)):
        out: List[float] = []
        for x in p:
            out.extend(_flatten(x))
        return out
    raise SchemaError(f"coordinate must be a number or nested list of numbers, got {p!r}")


def normalize_point(space: Any, p: Any, tol: float = 1e-12) -> np.ndarray:
    """
    Accept flat or nested coordinates and return the normalized flat vector:
    circle coordinates reduced to [0, c), interval coordinates checked against
    [a, b] (values within `tol` outside are clamped).
    """
    chart, nfib = inner_chart(space)
    x = np.array(_flatten(p), dtype=float)
    if len(x) != chart.dim + nfib:
        raise SchemaError(f"coordinate shape mismatch: expected {chart.dim + nfib} numbers, got {len(x)}")
    if not np.all(np.isfinite(x)):
        raise SchemaError(f"coordinates must be finite, got {x.tolist()}")
    inner = x[:chart.dim]
    per = chart.periodic
    inner[per] = np.mod(inner[per], chart.periods[per])
    # mod can round up to exactly c
    inner[per] = np.where(inner[per] >= chart.periods[per], 0.0, inner[per])
    bounded = np.isfinite(chart.lower) & ~per
    below = inner < chart.lower - tol
    above = inner > chart.upper + tol
    if np.any(bounded & (below | above)):
        raise SchemaError(f"coordinate {inner.tolist()} outside interval bounds")
    inner[bounded] = np.clip(inner[bounded], chart.lower[bounded], chart.upper[bounded])
    x[:chart.dim] = inner
    return x


def signed_delta(chart: FlatChart, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Coordinate displacement from x to y along the shorter arc of each circle
    coordinate; an exact half-turn goes in the positive direction.
    Works on (..., dim) arrays.
    """
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    per = chart.periodic
    if np.any(per):
        c = chart.periods[per]
        dp = d[..., per]
        dp = dp - c * np.floor(dp / c)          # in [0, c)
        dp = np.where(dp > c / 2, dp - c, dp)   # in (-c/2, c/2]
        d[..., per] = dp
    return d


def chart_norm(chart: FlatChart, delta: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum((chart.weights * delta) ** 2, axis=-1))


def point_to_json(space: Any, x: np.ndarray) -> Any:
    """Nested coordinate shape matching the descriptor (inverse of normalize_point)."""
    x = [float(v) for v in np.asarray(x).ravel()]
    return _nest(space, iter(x))


def _nest(space, it):
    if isinstance(space, (Line, Interval, Circle)):
        return next(it)
    if isinstance(space, Scaled):
        return _nest(space.inner, it)
    if isinstance(space, EuclideanProduct):
        return [_nest(f, it) for f in space.factors]
    if isinstance(space, Warped):
        inner = _nest(space.inner, it)
        return [inner, [next(it) for _ in range(len(space.warp))]]
    raise NonPrimitiveError(f"cannot nest coordinates for {type(space).__name__}")


def sample_points(space: Any, rng: np.random.Generator, n: int,
                  window: Tuple[float, float] = (-2.0, 2.0)) -> np.ndarray:
    """Uniform samples; unbounded coordinates are drawn from `window`."""
    chart, nfib = inner_chart(space)
    lo = np.where(np.isfinite(chart.lower), chart.lower, window[0])
    hi = np.where(np.isfinite(chart.upper), chart.upper, window[1])
    inner = rng.uniform(lo, hi, size=(n, chart.dim))
    fib = rng.uniform(window[0], window[1], size=(n, nfib))
    pts = np.concatenate([inner, fib], axis=1)
    return np.array([normalize_point(space, p) for p in pts])
