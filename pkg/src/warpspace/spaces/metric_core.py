"""
Points, polygonal paths, closed-form base distances and path length by
dyadic partition refinement.

Paths are straight in coordinates between waypoints; consecutive circle
coordinates are joined along the shorter arc (half-turn ties go the positive
way). For warped spaces the chord of each partition interval uses the warp
factor at the interval's right endpoint.
"""

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

import numpy as np

from ..config import SolverConfig
from ..errors import ConvergenceError, SchemaError
from ..logs import get_logger
from .descriptors import (chart_norm, flat_chart, inner_chart, is_primitive, normalize_point,
                          point_to_json, signed_delta)
from .fiber import warp_factor

log = get_logger("spaces.metric_core")

DEFAULT_REFINE_TOL = 1e-9
MAX_REFINE_DEPTH = 24
_TINY = 1e-300


@dataclass(frozen=True, eq=False)
class PolyPath:
    waypoints: np.ndarray   # (n, dim), normalized
    params: np.ndarray      # (n,), 0 = t_0 < ... < t_p = 1

    def __post_init__(self):
        w = np.array(self.waypoints, dtype=float)
        t = np.array(self.params, dtype=float)
        if w.ndim != 2 or len(w) == 0:
            raise SchemaError("path needs a nonempty (n, dim) waypoint array")
        if t.shape != (len(w),):
            raise SchemaError(f"path has {len(w)} waypoints but {t.size} params")
        if len(t) > 1 and (t[0] != 0.0 or t[-1] != 1.0 or np.any(np.diff(t) <= 0)):
            raise SchemaError("path params must increase strictly from 0 to 1")
        w.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "waypoints", w)
        object.__setattr__(self, "params", t)

    @classmethod
    def through(cls, space: Any, points: Sequence[Any], params: Optional[Sequence[float]] = None) -> "PolyPath":
        pts = np.array([normalize_point(space, p) for p in points])
        if params is None:
            params = np.linspace(0.0, 1.0, len(pts)) if len(pts) > 1 else np.zeros(1)
        return cls(pts, np.asarray(params, dtype=float))

    def __len__(self) -> int:
        return len(self.waypoints)

    @property
    def start(self) -> np.ndarray:
        return self.waypoints[0]

    @property
    def end(self) -> np.ndarray:
        return self.waypoints[-1]

    def to_json(self, space: Any) -> dict:
        return {
            "params": [float(t) for t in self.params],
            "waypoints": [point_to_json(space, w) for w in self.waypoints],
        }


# ---- distances between points ----

def base_distance(space: Any, p: Any, q: Any) -> float:
    chart = flat_chart(space)
    x = normalize_point(space, p)
    y = normalize_point(space, q)
    return float(chart_norm(chart, signed_delta(chart, x, y)))


# ---- partition sums ----

def lifted_steps(space: Any, waypoints: np.ndarray) -> np.ndarray:
    """Coordinate steps between consecutive waypoints (shorter arc on circles)."""
    chart, _ = inner_chart(space)
    w = np.asarray(waypoints, dtype=float)
    d = np.diff(w, axis=0)
    d[:, :chart.dim] = signed_delta(chart, w[:-1, :chart.dim], w[1:, :chart.dim])
    return d


def chord_costs(space: Any, starts: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """
    One term of the partition sum per (start, step) row:
    sqrt(f(s_end)^2 * d_inner^2 + |Δs|^2), which is d_inner for unwarped spaces.
    """
    chart, nfib = inner_chart(space)
    dinner = chart_norm(chart, deltas[:, :chart.dim])
    if nfib == 0:
        return dinner
    ds = deltas[:, chart.dim:]
    f = warp_factor(space.warp, starts[:, chart.dim:] + ds)
    return np.sqrt((f * dinner) ** 2 + np.sum(ds ** 2, axis=1))


def partition_sum(space: Any, waypoints: Union[PolyPath, np.ndarray]) -> float:
    """The unrefined sum over the given partition."""
    w = waypoints.waypoints if isinstance(waypoints, PolyPath) else np.asarray(waypoints, dtype=float)
    if len(w) < 2:
        return 0.0
    return float(np.sum(chord_costs(space, w[:-1], lifted_steps(space, w))))


def _segment_limit(space: Any, a: np.ndarray, d: np.ndarray, tol: float, max_depth: int) -> float:
    prev_s = float(chord_costs(space, a[None, :], d[None, :])[0])
    prev_r: Optional[float] = None
    for k in range(1, max_depth + 1):
        m = 2 ** k
        u = np.arange(m, dtype=float)[:, None] / m
        s = float(np.sum(chord_costs(space, a + u * d, np.broadcast_to(d / m, (m, len(d))))))
        if abs(s - prev_s) <= tol * max(abs(s), _TINY):
            return s
        # right-endpoint sums carry a 1/m error term; extrapolate it away
        r = 2.0 * s - prev_s
        if prev_r is not None and abs(r - prev_r) <= tol * max(abs(r), _TINY):
            return r
        prev_s, prev_r = s, r
    raise ConvergenceError(f"path length did not converge within depth {max_depth}",
                           (prev_s if prev_r is None else prev_r, prev_s))


def path_length(space: Any, path: Union[PolyPath, Sequence[Any]], tol: float = DEFAULT_REFINE_TOL,
                max_depth: int = MAX_REFINE_DEPTH) -> float:
    """
    Refinement limit of the partition sums, computed per segment by dyadic
    subdivision; a segment is frozen once two successive estimates agree to
    `tol` relatively.
    """
    if not isinstance(path, PolyPath):
        path = PolyPath.through(space, path)
    w = path.waypoints
    if len(w) < 2:
        return 0.0
    steps = lifted_steps(space, w)
    return float(sum(_segment_limit(space, a, d, tol, max_depth) for a, d in zip(w[:-1], steps)))


def induced_length_metric(space: Any, p: Any, q: Any, cfg: Optional[SolverConfig] = None) -> float:
    """d'(p, q): closed form for primitives, the geodesic solver otherwise."""
    if is_primitive(space):
        return base_distance(space, p, q)
    from ..geodesic.solver import distance

    res = distance(space, p, q, cfg or SolverConfig())
    if not res.converged:
        log.warning("induced length metric: solver did not converge; reporting best upper bound %.9g", res.length)
    return res.length
