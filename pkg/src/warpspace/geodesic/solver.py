"""
Geodesic solver.

Primitives are answered exactly. Warps of primitives are solved by moving
the interior waypoints of a polyline to minimize its exact (quadrature)
length with L-BFGS-B, fed by a central-difference gradient. Quotients and
cylinders are answered on their ε-nets.
"""

import itertools
from dataclasses import dataclass, replace
from typing import Any, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from ..config import NetConfig, SolverConfig
from ..errors import ConvergenceError, SchemaError
from ..logs import get_logger
from ..spaces.descriptors import (Warped, chart_norm, flat_chart, inner_chart, is_primitive, normalize_point,
                                  signed_delta)
from ..spaces.metric_core import PolyPath
from ..spaces.warp import segment_lengths

log = get_logger("geodesic.solver")

_COARSEST = 9


@dataclass(frozen=True, eq=False)
class GeodesicResult:
    length: float
    path: Optional[PolyPath]            # None for answers read off a net
    converged: bool
    restarts_used: int
    epsilon: Optional[float] = None     # net resolution when answered on a net
    method: str = "closed_form"         # closed_form | optimized | net
    winding: Tuple[int, ...] = ()
    net_path: Tuple[Tuple[str, np.ndarray], ...] = ()

    def to_json(self, space: Any, with_path: bool = True) -> dict:
        out = {
            "length": self.length,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "epsilon": self.epsilon,
            "method": self.method,
        }
        if self.winding:
            out["winding"] = list(self.winding)
        if with_path and self.path is not None:
            out["path"] = self.path.to_json(space)
        if with_path and self.net_path:
            out["net_path"] = [{"piece": name, "coord": [float(v) for v in x]} for name, x in self.net_path]
        return out


def distance(space: Any, p: Any, q: Any, cfg: Optional[SolverConfig] = None,
             net_cfg: Optional[NetConfig] = None) -> GeodesicResult:
    cfg = cfg or SolverConfig()
    if is_primitive(space):
        return _primitive(space, p, q)
    if isinstance(space, Warped) and is_primitive(space.inner):
        x, y = normalize_point(space, p), normalize_point(space, q)
        # one solve per unordered pair keeps d(p, q) == d(q, p)
        if tuple(y) < tuple(x):
            return _reversed(_solve_warped(space, y, x, cfg))
        return _solve_warped(space, x, y, cfg)
    from ..quotient.net import net_geodesic

    return net_geodesic(space, p, q, net_cfg or NetConfig())


def _reversed(res: GeodesicResult) -> GeodesicResult:
    path = PolyPath(res.path.waypoints[::-1], 1.0 - res.path.params[::-1])
    return replace(res, path=path, winding=tuple(-h for h in res.winding))


def project_to_base(space: Warped, result: GeodesicResult) -> PolyPath:
    """Inner component of a solved path in X ×_λ ℝ^E."""
    if not isinstance(space, Warped):
        raise SchemaError("project_to_base needs a warped space")
    if not result.converged:
        raise ConvergenceError("cannot project a non-converged geodesic")
    k = inner_chart(space)[0].dim
    return PolyPath(result.path.waypoints[:, :k], result.path.params)


# ---- primitives ----

def _primitive(space: Any, p: Any, q: Any) -> GeodesicResult:
    chart = flat_chart(space)
    x, y = normalize_point(space, p), normalize_point(space, q)
    d = signed_delta(chart, x, y)
    path = PolyPath(np.array([x, normalize_point(space, x + d)]), np.array([0.0, 1.0]))
    return GeodesicResult(float(chart_norm(chart, d)), path, True, 0)


# ---- warped ----

def _winding_targets(space: Warped, x: np.ndarray, y: np.ndarray, max_winding: int
                     ) -> List[Tuple[Tuple[int, ...], np.ndarray]]:
    """
    Lifts of y for each bounded winding hint. Distance grows with the lifted
    inner distance, so only hints attaining the minimal lift are returned.
    """
    chart, _ = inner_chart(space)
    k = chart.dim
    base = y.copy()
    base[:k] = x[:k] + signed_delta(chart, x[:k], y[:k])
    per = np.flatnonzero(chart.periodic)
    if len(per) == 0:
        return [((), base)]
    hints = list(itertools.product(range(-max_winding, max_winding + 1), repeat=len(per)))
    lifts = []
    for h in hints:
        t = base.copy()
        t[per] += np.array(h) * chart.periods[per]
        lifts.append((h, t, float(chart_norm(chart, t[:k] - x[:k]))))
    best = min(d for _, _, d in lifts)
    keep = [(h, t) for h, t, d in lifts if d <= best * (1 + 1e-12) + 1e-15]
    return sorted(keep, key=lambda ht: (sum(abs(v) for v in ht[0]), ht[0]))


def _solve_warped(space: Warped, x: np.ndarray, y: np.ndarray, cfg: SolverConfig) -> GeodesicResult:
    if np.array_equal(x, y):
        return GeodesicResult(0.0, PolyPath(np.array([x, y]), np.array([0.0, 1.0])), True, 0, method="optimized")
    rng = np.random.default_rng(cfg.rng_seed)
    best = None
    for hint, target in _winding_targets(space, x, y, cfg.max_winding):
        length, pts, ok, start = _optimize(space, x, target, cfg, rng, cfg.restarts)
        log.debug("winding %s: length %.12g converged=%s (start %d)", hint, length, ok, start)
        if best is None or length < best[0]:
            best = (length, pts, ok, hint, start)
    length, pts, ok, hint, start = best
    waypoints = np.array([normalize_point(space, w, tol=1e-9) for w in pts])
    waypoints[0], waypoints[-1] = x, y
    path = PolyPath(waypoints, np.linspace(0.0, 1.0, len(waypoints)))
    if not ok:
        log.warning("geodesic solver did not converge; best length %.9g", length)
    return GeodesicResult(length, path, ok, start, method="optimized", winding=tuple(hint))


def _bounds(space: Warped, dim: int) -> List[Tuple[Optional[float], Optional[float]]]:
    chart, nfib = inner_chart(space)
    out: List[Tuple[Optional[float], Optional[float]]] = []
    for i in range(chart.dim):
        if np.isfinite(chart.lower[i]) and not chart.periodic[i]:
            out.append((float(chart.lower[i]), float(chart.upper[i])))
        else:
            out.append((None, None))
    out.extend([(None, None)] * nfib)
    return out


class _Objective:
    """Polyline length over interior waypoints, with a two-colour central-difference gradient."""

    def __init__(self, space: Warped, a: np.ndarray, b: np.ndarray, n: int, h: float):
        self.space, self.a, self.b, self.n, self.h = space, a, b, n, h
        self.dim = len(a)

    def full(self, z: np.ndarray) -> np.ndarray:
        return np.vstack([self.a, z.reshape(self.n - 2, self.dim), self.b])

    def segments(self, pts: np.ndarray) -> np.ndarray:
        return segment_lengths(self.space, pts[:-1], np.diff(pts, axis=0))

    def __call__(self, z: np.ndarray) -> float:
        return float(np.sum(self.segments(self.full(z))))

    def gradient(self, z: np.ndarray) -> np.ndarray:
        pts = self.full(z)
        grad = np.zeros_like(pts)
        # a waypoint only touches its two adjacent segments, so every other
        # waypoint can be perturbed at once
        for first in (1, 2):
            idx = np.arange(first, self.n - 1, 2)
            if len(idx) == 0:
                continue
            for j in range(self.dim):
                plus, minus = pts.copy(), pts.copy()
                plus[idx, j] += self.h
                minus[idx, j] -= self.h
                dl = (self.segments(plus) - self.segments(minus)) / (2.0 * self.h)
                grad[idx, j] = dl[idx - 1] + dl[idx]
        return grad[1:-1].ravel()


def _respace(obj: _Objective, z: np.ndarray) -> np.ndarray:
    """Redistribute interior waypoints evenly by arclength along the current polyline."""
    pts = obj.full(z)
    cum = np.concatenate([[0.0], np.cumsum(obj.segments(pts))])
    if cum[-1] <= 0 or np.any(np.diff(cum) <= 0):
        return z
    targets = np.linspace(0.0, cum[-1], obj.n)[1:-1]
    return np.column_stack([np.interp(targets, cum, pts[:, j]) for j in range(obj.dim)]).ravel()


def _resample(pts: np.ndarray, n: int) -> np.ndarray:
    """Linear resampling of a polyline to n waypoints at uniform parameter."""
    src = np.linspace(0.0, 1.0, len(pts))
    dst = np.linspace(0.0, 1.0, n)
    return np.column_stack([np.interp(dst, src, pts[:, j]) for j in range(pts.shape[1])])


def _descend(obj: _Objective, z0: np.ndarray, bounds, cfg: SolverConfig) -> Tuple[np.ndarray, float, bool]:
    """
    L-BFGS-B rounds separated by arclength re-spacing. Converged once the
    optimized lengths of two successive rounds agree to length_tol, or when
    the last round met its own stopping test.
    """
    z = z0
    previous = None
    rounds = cfg.respace_rounds + 1
    for rnd in range(rounds):
        res = minimize(obj, z, jac=obj.gradient, method="L-BFGS-B", bounds=bounds,
                       options={"maxiter": cfg.max_iters, "ftol": 1e-15, "gtol": cfg.step_tol})
        z, length = res.x, float(res.fun)
        if previous is not None and abs(previous - length) <= cfg.length_tol * max(1.0, length):
            return z, length, True
        previous = length
        if rnd < rounds - 1:
            z = _respace(obj, z)
    return z, length, bool(res.success)


def _optimize(space: Warped, a: np.ndarray, b: np.ndarray, cfg: SolverConfig,
              rng: np.random.Generator, restarts: int) -> Tuple[float, np.ndarray, bool, int]:
    """Best (length, waypoints, converged, start index) over the linear start and its perturbations."""
    n = cfg.n_waypoints
    dim = len(a)
    if n == 2:
        pts = np.vstack([a, b])
        return float(np.sum(segment_lengths(space, a[None, :], (b - a)[None, :]))), pts, True, 0
    scale = max(1.0, float(np.max(np.abs(b - a))))
    obj = _Objective(space, a, b, n, cfg.fd_step * scale)
    bounds = _bounds(space, dim) * (n - 2)

    if n > _COARSEST:
        # coarse-to-fine: a half-resolution solve seeds the linear start
        coarse_cfg = replace(cfg, n_waypoints=max(_COARSEST, (n + 1) // 2), restarts=0)
        _, coarse_pts, _, _ = _optimize(space, a, b, coarse_cfg, rng, 0)
        init = _resample(coarse_pts, n)[1:-1].ravel()
    else:
        init = _resample(np.vstack([a, b]), n)[1:-1].ravel()

    starts = [init]
    sigma = 0.1 * float(np.linalg.norm(b - a))
    lo = np.array([bd[0] if bd[0] is not None else -np.inf for bd in bounds])
    hi = np.array([bd[1] if bd[1] is not None else np.inf for bd in bounds])
    for _ in range(restarts):
        starts.append(np.clip(init + rng.normal(0.0, sigma, size=init.shape), lo, hi))

    best: Optional[Tuple[float, np.ndarray, bool, int]] = None
    for i, z0 in enumerate(starts):
        z, length, ok = _descend(obj, z0, bounds, cfg)
        if best is None or length < best[0]:
            best = (length, obj.full(z), ok, i)
    return best
