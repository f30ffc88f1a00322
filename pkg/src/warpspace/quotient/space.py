"""
QuotientSpace: a disjoint union of pieces glued by identifications.

Pieces are primitives or warps of primitives with a sampling window per
coordinate (None means: the natural range for circles and intervals, the
configured fiber window otherwise). Marks name closed subspaces (boundary
copies, X_e, ...) as charts; claims record statements about the space that
are not computed.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import CertificationError, SchemaError
from ..logs import get_logger
from ..spaces.descriptors import (Warped, descriptor_from_json, dim, inner_chart, normalize_point, register_kind,
                                  signed_delta)
from ..spaces.fiber import WarpVector
from ..spaces.maps import Identity, product
from ..spaces.warp import segment_lengths
from .identification import Chart, Identification

log = get_logger("quotient.space")

Window = Tuple[Optional[Tuple[float, float]], ...]


@dataclass(frozen=True)
class Piece:
    name: str
    space: Any
    window: Window = ()

    def __post_init__(self):
        n = dim(self.space)
        win = tuple(self.window) if self.window else (None,) * n
        if len(win) != n:
            raise SchemaError(f"piece {self.name!r}: window has {len(win)} entries for {n} coordinates")
        win = tuple(None if w is None else (float(w[0]), float(w[1])) for w in win)
        for w in win:
            if w is not None and not w[0] < w[1]:
                raise SchemaError(f"piece {self.name!r}: empty window {w}")
        object.__setattr__(self, "window", win)

    @property
    def dim(self) -> int:
        return len(self.window)

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "space": self.space.to_json(),
                "window": [None if w is None else list(w) for w in self.window]}

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "Piece":
        if not isinstance(d, dict) or "name" not in d or "space" not in d:
            raise SchemaError(f"piece needs 'name' and 'space': {d!r}")
        win = d.get("window") or ()
        return cls(str(d["name"]), descriptor_from_json(d["space"]), tuple(None if w is None else tuple(w) for w in win))


@register_kind("quotient")
@dataclass(frozen=True)
class QuotientSpace:
    pieces: Tuple[Piece, ...]
    identifications: Tuple[Identification, ...] = ()
    marks: Tuple[Tuple[str, Chart], ...] = ()
    claims: Tuple[str, ...] = ()
    kind = "quotient"

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "identifications", tuple(self.identifications))
        object.__setattr__(self, "marks", tuple(self.marks))
        object.__setattr__(self, "claims", tuple(self.claims))
        if not self.pieces:
            raise SchemaError("quotient needs at least one piece")
        names = [p.name for p in self.pieces]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate piece names: {names}")
        for ident in self.identifications:
            self._check_chart(ident.source)
            self._check_chart(ident.target)
        for _, chart in self.marks:
            self._check_chart(chart)

    def _check_chart(self, chart: Chart) -> None:
        piece = self.piece(chart.piece)
        if chart.dim != piece.dim:
            raise SchemaError(f"chart on {chart.piece!r} covers {chart.dim} of {piece.dim} coordinates")

    def piece(self, name: str) -> Piece:
        for p in self.pieces:
            if p.name == name:
                return p
        raise SchemaError(f"unknown piece {name!r}")

    def mark(self, name: str) -> Chart:
        for n, c in self.marks:
            if n == name:
                return c
        raise SchemaError(f"unknown mark {name!r}")

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "quotient",
            "pieces": [p.to_json() for p in self.pieces],
            "identifications": [i.to_json() for i in self.identifications],
            "marks": [{"name": n, "chart": c.to_json()} for n, c in self.marks],
            "claims": list(self.claims),
        }

    @classmethod
    def from_json(cls, d: Dict[str, Any]) -> "QuotientSpace":
        return cls(
            tuple(Piece.from_json(p) for p in d.get("pieces", [])),
            tuple(Identification.from_json(i) for i in d.get("identifications", [])),
            tuple((str(m["name"]), Chart.from_json(m["chart"])) for m in d.get("marks", [])),
            tuple(str(c) for c in d.get("claims", [])),
        )


# ---- conversions ----

def as_quotient(space: Any) -> QuotientSpace:
    """Every space as a quotient: single piece for primitives and flat warps."""
    if isinstance(space, QuotientSpace):
        return space
    if getattr(space, "kind", None) == "cylinder":
        return space.quotient
    if isinstance(space, Warped) and not _is_flat(space.inner):
        return warp_quotient(as_quotient(space.inner), space.warp)
    return QuotientSpace((Piece("X", space),))


def _is_flat(space: Any) -> bool:
    try:
        dim(space)
        return True
    except SchemaError:
        return False


def warp_quotient(q: QuotientSpace, warp: WarpVector) -> QuotientSpace:
    """(⊔ pieces / ~) ×_λ ℝ^E as ⊔ (piece ×_λ ℝ^E) / ~, fiber coordinates carried along."""
    if len(warp) == 0:
        return q
    ne = len(warp)
    dims = {p.name: p.dim for p in q.pieces}
    pieces = tuple(Piece(p.name, _warp_piece(p.space, warp), p.window + (None,) * ne) for p in q.pieces)
    idents = tuple(
        Identification(i.source.lifted(dims[i.source.piece], ne), i.target.lifted(dims[i.target.piece], ne),
                       product(i.pairing, Identity(ne)), i.label)
        for i in q.identifications)
    marks = tuple((n, c.lifted(dims[c.piece], ne)) for n, c in q.marks)
    return QuotientSpace(pieces, idents, marks, q.claims)


def _warp_piece(space: Any, warp: WarpVector) -> Warped:
    if isinstance(space, Warped):
        merged = WarpVector(space.warp.edge_order + warp.edge_order, space.warp.lambdas + warp.lambdas)
        return Warped(space.inner, merged)
    return Warped(space, warp)


# ---- piece geometry ----

def piece_steps(space: Any, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Lifted steps a → b (shorter arc on circle coordinates); rows broadcast."""
    chart, _ = inner_chart(space)
    a, b = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
    d = (b - a).astype(float)
    d[:, :chart.dim] = signed_delta(chart, a[:, :chart.dim], b[:, :chart.dim])
    return d


def segment_distance(space: Any, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Length of the coordinate-straight segments a → b inside one piece."""
    a2, b2 = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
    return segment_lengths(space, a2, piece_steps(space, a2, b2))


def check_identification(q: QuotientSpace, ident: Identification, n_samples: int = 50, radius: float = 0.02,
                         tol: float = 1e-9, seed: int = 0) -> float:
    """
    Sample nearby pairs on the source chart and compare their piece distance
    with that of their images. Returns the max relative deviation; raises
    CertificationError above tol.
    """
    rng = np.random.default_rng(seed)
    src, tgt = q.piece(ident.source.piece), q.piece(ident.target.piece)
    lo, hi = _sampling_box(src, ident.source)
    worst = 0.0
    for _ in range(n_samples):
        pa = rng.uniform(lo, hi)
        pb = pa + rng.uniform(-radius, radius, size=pa.shape)
        a = normalize_point(src.space, ident.source.embed(pa)[0], tol=np.inf)
        b = normalize_point(src.space, ident.source.embed(pb)[0], tol=np.inf)
        fa = normalize_point(tgt.space, ident.forward(a)[0], tol=np.inf)
        fb = normalize_point(tgt.space, ident.forward(b)[0], tol=np.inf)
        d0 = float(segment_distance(src.space, a, b)[0])
        d1 = float(segment_distance(tgt.space, fa, fb)[0])
        if d0 > 0:
            worst = max(worst, abs(d1 - d0) / d0)
    if worst > tol:
        raise CertificationError(f"identification {ident.label!r} is not a local isometry "
                                 f"(max relative deviation {worst:.3g})")
    return worst


def _sampling_box(piece: Piece, chart: Chart, fiber: Tuple[float, float] = (-1.0, 1.0)):
    chart_inner, _ = inner_chart(piece.space)
    lo, hi = [], []
    for i in chart.free:
        w = piece.window[i]
        if w is None:
            if i < chart_inner.dim and np.isfinite(chart_inner.lower[i]):
                w = (chart_inner.lower[i], chart_inner.upper[i])
            else:
                w = fiber
        lo.append(w[0])
        hi.append(w[1])
    return np.array(lo), np.array(hi)
