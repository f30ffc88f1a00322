"""
Structural checks: local isometry of a map, convexity of a subspace, and
pseudometric axioms on nets.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import SolverConfig
from ..logs import get_logger
from ..spaces.descriptors import chart_norm, flat_chart, inner_chart, normalize_point, sample_points, signed_delta
from ..spaces.metric_core import PolyPath, base_distance, lifted_steps

log = get_logger("audit.checks")


# ---- local isometry ----

def local_isometry_check(fmap: Any, domain: Any, codomain: Any, radius: float = 0.1, n_samples: int = 200,
                         tol: float = 1e-9, seed: int = 0,
                         window: Tuple[float, float] = (-2.0, 2.0)) -> Tuple[bool, float]:
    """
    Sample pairs at distance ≤ radius in the domain and compare with the
    distance of their images. Returns (passes, max relative deviation).
    """
    rng = np.random.default_rng(seed)
    chart = flat_chart(domain)
    xs = sample_points(domain, rng, n_samples, window)
    worst = 0.0
    for x in xs:
        u = rng.normal(size=chart.dim)
        u /= max(float(chart_norm(chart, u)), 1e-300)
        y = normalize_point(domain, x + rng.uniform(0.0, radius) * u, tol=np.inf)
        d0 = base_distance(domain, x, y)
        if d0 <= 1e-12:
            continue
        d1 = base_distance(codomain, fmap.apply(x), fmap.apply(y))
        worst = max(worst, abs(d1 - d0) / d0)
    return worst <= tol, worst


# ---- convexity ----

def densify(space: Any, path: PolyPath, per_segment: int = 16) -> np.ndarray:
    """Points along every coordinate-straight segment of a solved path, endpoints included."""
    w = path.waypoints
    if len(w) < 2:
        return w.copy()
    steps = lifted_steps(space, w)
    s = np.linspace(0.0, 1.0, per_segment, endpoint=False)
    pts = (w[:-1, None, :] + s[None, :, None] * steps[:, None, :]).reshape(-1, w.shape[1])
    pts = np.vstack([pts, w[-1:]])
    return np.array([normalize_point(space, x, tol=np.inf) for x in pts])


@dataclass
class ConvexityReport:
    convex: bool
    max_deviation: float
    n_pairs: int
    n_unconverged: int
    tol: float

    def to_json(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def convexity_check(space: Any, sampler: Callable[[np.random.Generator], np.ndarray],
                    projector: Callable[[np.ndarray], np.ndarray], cfg: Optional[SolverConfig] = None,
                    n_pairs: int = 20, seed: int = 0, tol: float = 1e-6, per_segment: int = 16) -> ConvexityReport:
    """
    `sampler(rng)` draws a point of the subspace; `projector(x)` returns the
    nearest subspace point to x in the same coordinates. For sampled pairs the
    geodesic is solved and the distance to the subspace is measured at points
    spread along each of its segments.
    """
    from ..geodesic.solver import distance

    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(seed)
    chart, _ = inner_chart(space)
    worst, bad = 0.0, 0
    for _ in range(n_pairs):
        p, q = sampler(rng), sampler(rng)
        res = distance(space, p, q, cfg)
        if not res.converged:
            bad += 1
            continue
        for w in densify(space, res.path, per_segment):
            proj = projector(w)
            delta = np.asarray(proj, dtype=float) - w
            delta[:chart.dim] = signed_delta(chart, w[:chart.dim], np.asarray(proj, dtype=float)[:chart.dim])
            worst = max(worst, float(np.linalg.norm(delta)))
    if bad:
        log.warning("convexity check: %d of %d geodesics did not converge", bad, n_pairs)
    return ConvexityReport(worst <= tol, worst, n_pairs - bad, bad, tol)


# ---- nets ----

@dataclass
class PseudometricReport:
    n_nodes_sampled: int
    max_asymmetry: float
    max_triangle_violation: float
    n_triangle_failures: int
    identified_pairs_nonzero: int
    round_off: float
    passed: bool = field(init=False)

    def __post_init__(self):
        # graph distances are exact up to the order of floating additions
        self.passed = (self.max_asymmetry <= self.round_off and self.n_triangle_failures == 0
                       and self.identified_pairs_nonzero == 0)

    def to_json(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def net_pseudometric_check(net: Any, n_nodes: int = 30, seed: int = 0) -> PseudometricReport:
    """Symmetry and triangle inequality of net distances on sampled nodes."""
    rng = np.random.default_rng(seed)
    pick = np.sort(rng.choice(net.n_nodes, size=min(n_nodes, net.n_nodes), replace=False))
    d = net.distances_from(pick)[:, pick]
    finite = np.isfinite(d)
    slack = 1e-12 * max(1.0, float(np.max(np.where(finite, d, 0.0), initial=0.0)))
    asym = float(np.max(np.abs(np.where(finite & finite.T, d - d.T, 0.0)), initial=0.0))
    # d[i,k] <= d[i,j] + d[j,k]
    viol = d[:, None, :] - (d[:, :, None] + d[None, :, :])
    viol = np.where(np.isnan(viol), -np.inf, viol)
    worst = float(np.max(viol, initial=0.0))
    fails = int(np.sum(viol > slack))
    zero = net.edges[net.weights == 0.0]
    nonzero = 0
    if len(zero):
        sel = zero[rng.choice(len(zero), size=min(20, len(zero)), replace=False)]
        dz = net.distances_from(sel[:, 0])
        nonzero = int(np.sum(dz[np.arange(len(sel)), sel[:, 1]] != 0.0))
    return PseudometricReport(len(pick), asym, max(worst, 0.0), fails, nonzero, slack)
