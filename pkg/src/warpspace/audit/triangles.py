"""
Comparison-triangle checks.

A sampled triangle is compared with the Euclidean triangle of the same side
lengths: for points on two different sides, the distance in the space must
not exceed the distance between the comparison points. Pairs on one side
are equal in every geodesic space and are left out.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import SolverConfig
from ..errors import ConvergenceError, DegenerateTriangleError, SchemaError
from ..geodesic.oracle import closed_form_distance, has_closed_form
from ..geodesic.solver import GeodesicResult, distance
from ..logs import get_logger
from ..spaces.descriptors import normalize_point
from ..spaces.metric_core import PolyPath, lifted_steps
from ..spaces.warp import segment_lengths

log = get_logger("audit.triangles")

DistanceFn = Callable[[np.ndarray, np.ndarray], float]


@dataclass(frozen=True, eq=False)
class TriangleSample:
    vertices: Tuple[np.ndarray, ...]
    sides: Tuple[GeodesicResult, ...]          # side i runs from vertex i to vertex i+1
    interior: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        if len(self.vertices) != 3 or len(self.sides) != 3:
            raise SchemaError("a triangle needs three vertices and three sides")
        for i, s in self.interior:
            if i not in (0, 1, 2) or not 0.0 <= s <= 1.0:
                raise SchemaError(f"invalid interior sample ({i}, {s})")

    @property
    def lengths(self) -> np.ndarray:
        return np.array([s.length for s in self.sides])

    @property
    def diameter(self) -> float:
        return float(self.lengths.max())

    def inequality_gap(self) -> float:
        """max_i (a_i − a_j − a_k); positive means a side is longer than the other two together."""
        a = self.lengths
        return float(np.max(2 * a - a.sum()))


def make_triangle(space: Any, vertices: Sequence[Any], cfg: Optional[SolverConfig] = None,
                  fractions: Sequence[float] = (0.25, 0.5, 0.75)) -> TriangleSample:
    cfg = cfg or SolverConfig()
    vs = tuple(normalize_point(space, v) for v in vertices)
    sides = tuple(distance(space, vs[i], vs[(i + 1) % 3], cfg) for i in range(3))
    interior = tuple((i, float(s)) for i in range(3) for s in fractions)
    return TriangleSample(vs, sides, interior)


def point_on_path(space: Any, path: PolyPath, s: float) -> np.ndarray:
    """The point at arclength fraction s of a polyline, located inside its segment by bisection."""
    w = path.waypoints
    steps = lifted_steps(space, w)
    seg = segment_lengths(space, w[:-1], steps)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    target = s * cum[-1]
    j = int(np.clip(np.searchsorted(cum, target, side="right") - 1, 0, len(seg) - 1))
    rest = target - cum[j]
    lo, hi = 0.0, 1.0
    if seg[j] > 0:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if float(segment_lengths(space, w[j][None], (mid * steps[j])[None])[0]) < rest:
                lo = mid
            else:
                hi = mid
    return normalize_point(space, w[j] + 0.5 * (lo + hi) * steps[j], tol=np.inf)


def comparison_vertices(lengths: Sequence[float]) -> np.ndarray:
    """Planar vertices A, B, C with |AB| = a0, |BC| = a1, |CA| = a2."""
    a0, a1, a2 = (float(x) for x in lengths)
    scale = max(a0, a1, a2)
    if a0 <= 0 or scale <= 0:
        raise DegenerateTriangleError(f"zero-length side in {lengths}")
    cx = (a0 ** 2 + a2 ** 2 - a1 ** 2) / (2 * a0)
    h2 = a2 ** 2 - cx ** 2
    if h2 <= (1e-9 * scale) ** 2:
        raise DegenerateTriangleError(f"comparison triangle with sides {tuple(lengths)} is collinear")
    return np.array([[0.0, 0.0], [a0, 0.0], [cx, np.sqrt(h2)]])


def comparison_point(comp: np.ndarray, side: int, s: float) -> np.ndarray:
    return comp[side] + s * (comp[(side + 1) % 3] - comp[side])


def cross_side_slack(comp: np.ndarray, samples: Sequence[Tuple[int, float]], d: np.ndarray) -> float:
    """max over pairs on different sides of d[i, j] − |p̄_i − p̄_j|."""
    pts = [comparison_point(comp, i, s) for i, s in samples]
    best = -np.inf
    for a, b in itertools.combinations(range(len(samples)), 2):
        if samples[a][0] == samples[b][0]:
            continue
        best = max(best, float(d[a, b]) - float(np.linalg.norm(pts[a] - pts[b])))
    return float(best)


def exact_distance_fn(space: Any, cfg: Optional[SolverConfig] = None) -> DistanceFn:
    if has_closed_form(space):
        return lambda p, q: closed_form_distance(space, p, q)
    return solver_distance_fn(space, cfg)


def solver_distance_fn(space: Any, cfg: Optional[SolverConfig] = None) -> DistanceFn:
    cfg = cfg or SolverConfig()
    return lambda p, q: distance(space, p, q, cfg).length


def cat0_check(space: Any, tri: TriangleSample, tol: float = 1e-4,
               distance_fn: Optional[DistanceFn] = None) -> float:
    """
    Signed slack of the comparison inequality on the sample; ≤ tol means
    CAT(0)-consistent. Raises DegenerateTriangleError for collinear
    comparison triangles.
    """
    if not all(s.converged and s.path is not None for s in tri.sides):
        raise ConvergenceError("comparison check needs converged side geodesics")
    comp = comparison_vertices(tri.lengths)
    dist = distance_fn or exact_distance_fn(space)
    pts: List[np.ndarray] = [point_on_path(space, tri.sides[i].path, s) for i, s in tri.interior]
    n = len(pts)
    d = np.zeros((n, n))
    for a, b in itertools.combinations(range(n), 2):
        if tri.interior[a][0] != tri.interior[b][0]:
            d[a, b] = d[b, a] = dist(pts[a], pts[b])
    slack = cross_side_slack(comp, tri.interior, d)
    if slack > tol:
        log.debug("comparison inequality violated by %.3g (diameter %.3g)", slack, tri.diameter)
    return slack
