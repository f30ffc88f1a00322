"""
Closed-form distances used as independent oracles for the solver.

ℝ ×_λ ℝ is a rescaled hyperbolic plane: (x, t) ↦ (c·x, λ^{-t}) with c = ln λ
carries the warped length element onto 1/|c| times the upper half-plane one.
A flat inner X ×_λ ℝ^E reduces to that case: geodesics project to geodesics
of X, so only the inner distance D matters, and ℝ^E splits into the
direction of ln λ (warped) and its orthogonal complement (flat).
"""

import math
from typing import Any, Sequence

import numpy as np

from ..errors import SchemaError
from ..spaces.descriptors import Warped, chart_norm, flat_chart, is_primitive, normalize_point, signed_delta


def _arccosh1p(z: float) -> float:
    # arccosh(1 + z) without cancellation for small z
    return math.log1p(z + math.sqrt(z * (z + 2.0)))


def _warped_plane(c: float, dx: float, t1: float, t2: float) -> float:
    """Distance in ℝ ×_{e^{c t}} ℝ between points dx apart horizontally."""
    y1, y2 = math.exp(-c * t1), math.exp(-c * t2)
    z = ((c * dx) ** 2 + (y1 - y2) ** 2) / (2.0 * y1 * y2)
    return _arccosh1p(z) / abs(c)


def hyperbolic_oracle(lam: float, p: Sequence[float], q: Sequence[float]) -> float:
    if not lam > 0:
        raise SchemaError(f"lambda must be positive, got {lam!r}")
    if lam == 1.0:
        raise SchemaError("lambda = 1 is the Euclidean plane; use base_distance on Line×Line")
    (x1, t1), (x2, t2) = p, q
    return _warped_plane(math.log(lam), float(x2) - float(x1), float(t1), float(t2))


def has_closed_form(space: Any) -> bool:
    return is_primitive(space) or (isinstance(space, Warped) and is_primitive(space.inner))


def closed_form_distance(space: Any, p: Any, q: Any) -> float:
    """Exact distance for primitives and for warps of primitives."""
    if is_primitive(space):
        chart = flat_chart(space)
        x, y = normalize_point(space, p), normalize_point(space, q)
        return float(chart_norm(chart, signed_delta(chart, x, y)))
    if not has_closed_form(space):
        raise SchemaError(f"no closed form for {type(space).__name__}")
    chart = flat_chart(space.inner)
    x, y = normalize_point(space, p), normalize_point(space, q)
    k = chart.dim
    big_d = float(chart_norm(chart, signed_delta(chart, x[:k], y[:k])))
    t1, t2 = x[k:], y[k:]
    logs = space.warp.log_lambdas
    c = float(np.linalg.norm(logs))
    if c == 0.0:
        return math.hypot(big_d, float(np.linalg.norm(t2 - t1)))
    unit = logs / c
    u1, u2 = float(t1 @ unit), float(t2 @ unit)
    perp = (t2 - t1) - (u2 - u1) * unit
    return math.hypot(_warped_plane(c, big_d, u1, u2), float(np.linalg.norm(perp)))
