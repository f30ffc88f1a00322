"""
Warped products X ×_λ ℝ^E with the exponential warp f_λ(t) = ∏ λ(e)^{t_e}.

Two length notions live here:
  - warped_path_length: the refinement limit of the right-endpoint partition
    sums (metric_core.path_length on a Warped descriptor);
  - segment_lengths: the same limit for a coordinate-straight segment,
    evaluated directly by Gauss-Legendre quadrature of
    sqrt(f(s(u))^2 * D^2 + |Δs|^2). The solver and the nets use this one.
"""

import math
from typing import Any, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..errors import SchemaError
from ..logs import get_logger
from .descriptors import Scaled, Warped, chart_norm, inner_chart, is_primitive
from .fiber import WarpVector, fiber_coord, warp_factor  # noqa: F401  (re-exported)
from .metric_core import PolyPath, lifted_steps, path_length

log = get_logger("spaces.warp")

_GL_NODES = 16
_nodes, _weights = leggauss(_GL_NODES)
_U = (_nodes + 1.0) / 2.0
_W = _weights / 2.0


def make_warped(inner: Any, warp: WarpVector) -> Warped:
    if not is_primitive(inner):
        log.debug("warping composite %s: its pieces are warped one by one", type(inner).__name__)
    return Warped(inner, warp)


def warped_path_length(inner: Any, warp: WarpVector, path: Union[PolyPath, Any], tol: float = 1e-9) -> float:
    return path_length(Warped(inner, warp), path, tol)


def shift_map(warp: WarpVector, e: str, p: Any) -> np.ndarray:
    """(x, t) ↦ (x, t + δ_e); p is a flat coordinate vector with the fiber last."""
    d = warp.delta(e)
    x = np.array(p, dtype=float).ravel()
    if len(x) < len(warp):
        raise SchemaError(f"point has {len(x)} coordinates, fewer than the {len(warp)} fiber coordinates")
    x[len(x) - len(warp):] += d
    return x


def scale_inner(space: Warped, factor: float) -> Warped:
    """λX ×_λ ℝ^E from X ×_λ ℝ^E."""
    return Warped(Scaled(factor, space.inner), space.warp)


def segment_lengths(space: Any, starts: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """
    Exact lengths of the coordinate-straight segments starts[i] → starts[i] + deltas[i]
    (steps are already lifted, no wrapping is applied here).
    """
    chart, nfib = inner_chart(space)
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    deltas = np.atleast_2d(np.asarray(deltas, dtype=float))
    big_d = chart_norm(chart, deltas[:, :chart.dim])
    if nfib == 0:
        return big_d
    ds = deltas[:, chart.dim:]
    big_b = np.sqrt(np.sum(ds ** 2, axis=1))
    loglam = space.warp.log_lambdas
    logf0 = starts[:, chart.dim:] @ loglam
    beta = ds @ loglam
    # composite rule: one panel per unit of |β| keeps the integrand's complex
    # singularities well away from each panel
    panels = max(1, int(math.ceil(float(np.max(np.abs(beta), initial=0.0)))))
    u = ((np.arange(panels)[:, None] + _U[None, :]) / panels).ravel()
    w = np.tile(_W, panels) / panels
    fd = np.exp(logf0[:, None] + beta[:, None] * u[None, :]) * big_d[:, None]
    return np.sqrt(fd ** 2 + big_b[:, None] ** 2) @ w


def polyline_length(space: Any, waypoints: Union[PolyPath, np.ndarray]) -> float:
    """Quadrature length of a polyline; equals path_length up to the refinement tolerance."""
    w = waypoints.waypoints if isinstance(waypoints, PolyPath) else np.asarray(waypoints, dtype=float)
    if len(w) < 2:
        return 0.0
    return float(np.sum(segment_lengths(space, w[:-1], lifted_steps(space, w))))
