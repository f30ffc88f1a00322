"""
Extended mapping cylinders and the spaces glued from them.

C(f) for f: X → Y is X×[0,½] ⊔ Y×[3/2,2] / (x,½) ∼ (f(x),3/2). The vertical
coordinate is the last inner coordinate of each piece. X_0 (h = 0) and
Y_1 (h = 2) are recorded as marks; the collars E_0, E_1 are their
ε-neighbourhoods, Euclidean products by construction.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..audit.checks import ConvexityReport
from ..config import NetConfig
from ..errors import SchemaError
from ..logs import get_logger
from ..quotient.identification import Chart, Identification
from ..quotient.net import build_net
from ..quotient.space import Piece, QuotientSpace, check_identification, warp_quotient
from ..spaces.descriptors import (EuclideanProduct, Interval, chart_norm, dim, flat_chart, normalize_point,
                                  register_kind, sample_points)
from ..spaces.fiber import WarpVector
from ..spaces.maps import Identity, ScaledIdentity, Shift, product
from ..spaces.metric_core import base_distance
from .gluing import GluingCertificate

log = get_logger("complexes.cylinders")

LOWER = (0.0, 0.5)
UPPER = (1.5, 2.0)
DEFAULT_COLLAR = (LOWER[1] - LOWER[0]) / 8.0


def lower_piece_space(x: Any) -> EuclideanProduct:
    return EuclideanProduct((x, Interval(*LOWER)))


def upper_piece_space(y: Any) -> EuclideanProduct:
    return EuclideanProduct((y, Interval(*UPPER)))


def cylinder_pieces(cert: GluingCertificate, lower: str, upper: str) -> Tuple[Tuple[Piece, Piece], Identification]:
    """The two product pieces of C(f) under the given names and their seam."""
    dx, dy = dim(cert.domain), dim(cert.codomain)
    pieces = (Piece(lower, lower_piece_space(cert.domain)), Piece(upper, upper_piece_space(cert.codomain)))
    seam = Identification(Chart(lower, ((dx, LOWER[1]),), tuple(range(dx))),
                          Chart(upper, ((dy, UPPER[0]),), tuple(range(dy))),
                          cert.map, f"seam:{lower}->{upper}")
    return pieces, seam


def bottom(piece: str, d: int) -> Chart:
    return Chart(piece, ((d, LOWER[0]),), tuple(range(d)))


def top(piece: str, d: int) -> Chart:
    return Chart(piece, ((d, UPPER[1]),), tuple(range(d)))


@register_kind("cylinder")
@dataclass(frozen=True)
class CylinderSpace:
    gluing: GluingCertificate
    quotient: QuotientSpace
    collar: float = DEFAULT_COLLAR
    kind = "cylinder"

    @property
    def domain(self) -> Any:
        return self.gluing.domain

    @property
    def codomain(self) -> Any:
        return self.gluing.codomain

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "cylinder", "gluing": self.gluing.to_json(), "collar": self.collar}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "CylinderSpace":
        if "gluing" not in d:
            raise SchemaError("cylinder needs a 'gluing' certificate")
        return build_extended_cylinder(GluingCertificate.from_json(d["gluing"]), float(d.get("collar", DEFAULT_COLLAR)))


def build_extended_cylinder(cert: GluingCertificate, collar: float = DEFAULT_COLLAR) -> CylinderSpace:
    if not 0 < collar < (LOWER[1] - LOWER[0]) / 2:
        raise SchemaError(f"collar width must lie in (0, 1/4), got {collar!r}")
    (xp, yp), seam = cylinder_pieces(cert, "X", "Y")
    dx, dy = dim(cert.domain), dim(cert.codomain)
    q = QuotientSpace((xp, yp), (seam,), (("X_0", bottom("X", dx)), ("Y_1", top("Y", dy))))
    # seam pairing must carry the certified map pointwise
    check_identification(q, seam)
    return CylinderSpace(cert, q, collar)


# ---- collars ----

@dataclass
class CollarReport:
    passed: bool
    max_deviation: float
    n_pairs: int
    epsilon: float
    tol: float
    failures: List[Dict[str, Any]] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _collar_pairs(piece: str, declared: Any, h_range: Tuple[float, float], eps: float, n: int,
                  rng: np.random.Generator, window: Tuple[float, float]):
    chart = flat_chart(declared)
    inner = window[0] + eps, window[1] - eps
    xs = sample_points(declared, rng, n, inner)
    xs[:, -1] = rng.uniform(*h_range, size=n)
    out = []
    for x in xs:
        u = rng.normal(size=chart.dim)
        u /= max(float(chart_norm(chart, u)), 1e-300)
        y = x + rng.uniform(0.0, eps / 2) * u
        y[-1] = np.clip(y[-1], *h_range)
        out.append((piece, x, normalize_point(declared, y, tol=np.inf)))
    return out


def check_straight_collars(cyl: CylinderSpace, eps: Optional[float] = None, n_samples: int = 40,
                           cfg: Optional[NetConfig] = None, tol: float = 1e-6, seed: int = 0) -> CollarReport:
    """
    Sample pairs within ε/2 in E_0 = X×[0,ε] and E_1 = Y×[2−ε,2] and compare
    their quotient-net distance with the Euclidean product distance of the
    declared X×[0,½] and Y×[3/2,2].
    """
    eps = cyl.collar if eps is None else float(eps)
    if not 0 < eps < (LOWER[1] - LOWER[0]) / 2:
        raise SchemaError(f"collar width must lie in (0, 1/4), got {eps!r}")
    cfg = cfg or NetConfig()
    rng = np.random.default_rng(seed)
    lower, upper = (p.name for p in cyl.quotient.pieces)
    half = max(1, n_samples // 2)
    pairs = (_collar_pairs(lower, lower_piece_space(cyl.domain), (LOWER[0], LOWER[0] + eps), eps, half, rng,
                           cfg.fiber_window)
             + _collar_pairs(upper, upper_piece_space(cyl.codomain), (UPPER[1] - eps, UPPER[1]), eps,
                             n_samples - half, rng, cfg.fiber_window))
    declared = {lower: lower_piece_space(cyl.domain), upper: upper_piece_space(cyl.codomain)}

    net_cfg = NetConfig(eps / 4, cfg.edge_radius, cfg.fiber_window)
    points = [pt for name, x, y in pairs for pt in ((name, x), (name, y))]
    net = build_net(cyl.quotient, net_cfg, points)
    ids = np.array(net.extra_ids).reshape(-1, 2)
    d_net = net.distances_from(ids[:, 0])[np.arange(len(ids)), ids[:, 1]]

    worst, failures = 0.0, []
    for (name, x, y), dn in zip(pairs, d_net):
        d0 = base_distance(declared[name], x, y)
        if d0 <= 1e-12:
            continue
        dev = abs(float(dn) - d0) / d0
        worst = max(worst, dev)
        if dev > tol:
            failures.append({"piece": name, "p": x.tolist(), "q": y.tolist(), "product": d0, "net": float(dn)})
    if failures:
        log.warning("collar check: %d of %d pairs deviate from the product metric", len(failures), len(pairs))
    return CollarReport(not failures, worst, len(pairs), eps, tol, failures)


# ---- spirals ----

def _metric_ratio(domain: Any, codomain: Any) -> float:
    a, b = flat_chart(domain), flat_chart(codomain)
    same = (a.dim == b.dim and np.array_equal(a.periods, b.periods, equal_nan=True)
            and np.array_equal(a.lower, b.lower) and np.array_equal(a.upper, b.upper))
    ratio = a.weights / b.weights if same else np.array([np.nan])
    if not same or not np.allclose(ratio, ratio[0], rtol=1e-12, atol=0):
        raise SchemaError("spiral needs a map λX → X: domain is not a rescaling of the codomain")
    return float(ratio[0])


def build_spiral(cert: GluingCertificate, lam: float) -> QuotientSpace:
    """
    C(f) ×_λ ℝ with X_0 ×_λ ℝ ∋ (x, t) ∼ (x, t + 1) ∈ Y_1 ×_λ ℝ for f: λX → X.
    """
    ratio = _metric_ratio(cert.domain, cert.codomain)
    if not np.isclose(ratio, lam, rtol=1e-12, atol=0):
        raise SchemaError(f"certificate maps a {ratio:g}-rescaled copy, not λ = {lam:g}")
    cyl = build_extended_cylinder(cert)
    warped = warp_quotient(cyl.quotient, WarpVector.single(lam, "s"))
    d = dim(cert.codomain)
    pairing = product(ScaledIdentity(lam, d) if lam != 1.0 else Identity(d), Shift((1.0,)))
    wrap = Identification(bottom("X", d).lifted(d + 1, 1), top("Y", d).lifted(d + 1, 1), pairing, "spiral")
    claims = ("homotopy equivalent to the mapping torus T(f) (not verified)",)
    if lam == 1.0:
        claims += ("lambda = 1: C(f) × R glued by the unit shift",)
    q = QuotientSpace(warped.pieces, warped.identifications + (wrap,), warped.marks, warped.claims + claims)
    check_identification(q, wrap)
    log.info("spiral: lambda=%g, %d pieces", lam, len(q.pieces))
    return q


# ---- boundary convexity ----

def _height_off_mark(mark: str, piece: str, lower: str, h: float) -> float:
    """Vertical distance of a point at height h on `piece` from the X_0 or Y_1 mark."""
    if mark == "X_0":
        return h - LOWER[0] if piece == lower else (LOWER[1] - LOWER[0]) + (h - UPPER[0])
    return UPPER[1] - h if piece != lower else (UPPER[1] - UPPER[0]) + (LOWER[1] - h)


def _mark_pairs(piece: str, declared: Any, height: float, radius: float, n: int,
                rng: np.random.Generator, window: Tuple[float, float]):
    chart = flat_chart(declared)
    xs = sample_points(declared, rng, n, (window[0] + radius, window[1] - radius))
    xs[:, -1] = height
    out = []
    for x in xs:
        u = rng.normal(size=chart.dim)
        u[-1] = 0.0
        u /= max(float(chart_norm(chart, u)), 1e-300)
        y = x + rng.uniform(radius / 2, radius) * u
        out.append((piece, x, normalize_point(declared, y, tol=np.inf)))
    return out


def check_boundary_convexity(cyl: CylinderSpace, n_pairs: int = 20, radius: float = 0.25,
                             cfg: Optional[NetConfig] = None, seed: int = 0,
                             tol: Optional[float] = None) -> ConvexityReport:
    """
    Net geodesics between nearby points of X_0 (resp. Y_1) must stay on X_0
    (resp. Y_1). Every node of each shortest path is measured by its
    vertical distance from the mark; net edges are straight, so nodes bound
    the whole path. The tolerance defaults to the net epsilon.
    """
    if radius <= 0:
        raise SchemaError(f"radius must be positive, got {radius!r}")
    cfg = cfg or NetConfig()
    tol = cfg.epsilon if tol is None else float(tol)
    rng = np.random.default_rng(seed)
    lower, upper = (p.name for p in cyl.quotient.pieces)
    half = max(1, n_pairs // 2)
    pairs = (_mark_pairs(lower, lower_piece_space(cyl.domain), LOWER[0], radius, half, rng, cfg.fiber_window)
             + _mark_pairs(upper, upper_piece_space(cyl.codomain), UPPER[1], radius, n_pairs - half, rng,
                           cfg.fiber_window))
    points = [pt for name, x, y in pairs for pt in ((name, x), (name, y))]
    net = build_net(cyl.quotient, cfg, points)
    ids = np.array(net.extra_ids).reshape(-1, 2)

    worst, bad = 0.0, 0
    for (name, _, _), (a, b) in zip(pairs, ids):
        mark = "X_0" if name == lower else "Y_1"
        _, nodes = net.shortest_path(int(a), int(b))
        dev = 0.0
        for i in nodes:
            piece, coord = net.node(i)
            dev = max(dev, _height_off_mark(mark, piece, lower, float(coord[-1])))
        worst = max(worst, dev)
        bad += dev > tol
    if bad:
        log.warning("boundary check: %d of %d geodesics leave their mark", bad, len(pairs))
    return ConvexityReport(bad == 0, worst, len(pairs), 0, tol)
