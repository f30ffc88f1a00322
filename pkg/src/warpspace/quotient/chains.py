"""
Brute-force chain infimum, an oracle for net distances that shares no code
with the net: exact in-piece distances between a small set of gluing
points, minimized over all chains x_1 → y_1 ∼ x_2 → ... → y_k.
"""

from typing import Any, List, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import SchemaError
from ..geodesic.oracle import closed_form_distance
from ..logs import get_logger
from ..spaces.descriptors import normalize_point
from .identification import CHART_TOL
from .net import parse_piece_point
from .space import QuotientSpace, as_quotient

log = get_logger("quotient.chains")

PiecePoint = Tuple[str, np.ndarray]

MAX_SAMPLES = 200
MAX_CHAIN_LEN = 4


def _gluing_points(q: QuotientSpace, sample_set: Sequence[PiecePoint]) -> Tuple[List[PiecePoint], np.ndarray]:
    """Samples lying on an identification chart plus their partners, and the classes they form."""
    points: List[PiecePoint] = []
    pairs: List[Tuple[int, int]] = []

    def add(name: str, x: np.ndarray) -> int:
        x = normalize_point(q.piece(name).space, x, tol=CHART_TOL)
        for i, (n, y) in enumerate(points):
            if n == name and np.allclose(x, y, atol=1e-9, rtol=0):
                return i
        points.append((name, x))
        return len(points) - 1

    for name, x in sample_set:
        for ident in q.identifications:
            if ident.source.piece == name and ident.source.contains(x)[0]:
                a = add(name, x)
                for y in ident.forward(x):
                    pairs.append((a, add(ident.target.piece, y)))
            if ident.target.piece == name and ident.target.contains(x)[0]:
                b = add(name, x)
                for y in ident.backward(x):
                    pairs.append((add(ident.source.piece, y), b))
    n = len(points)
    e = np.array(pairs, dtype=int).reshape(-1, 2)
    g = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    _, labels = connected_components(g, directed=False)
    return points, labels


def chain_infimum_bruteforce(space: Any, p: Any, q: Any, max_chain_len: int,
                             sample_set: Sequence[Any]) -> float:
    """
    min over chains of length ≤ max_chain_len of Σ d(x_i, y_i), where
    x_1 = p, y_k = q and y_i ∼ x_{i+1} through the identifications.
    """
    if not 1 <= max_chain_len <= MAX_CHAIN_LEN:
        raise SchemaError(f"max_chain_len must lie in [1, {MAX_CHAIN_LEN}], got {max_chain_len}")
    if len(sample_set) > MAX_SAMPLES:
        raise SchemaError(f"chain oracle takes at most {MAX_SAMPLES} sample points, got {len(sample_set)}")
    quot = as_quotient(space)
    pp, qq = parse_piece_point(quot, p), parse_piece_point(quot, q)
    samples = [parse_piece_point(quot, s) for s in sample_set]
    points, labels = _gluing_points(quot, samples)

    def d(a: PiecePoint, b: PiecePoint) -> float:
        if a[0] != b[0]:
            return np.inf
        return closed_form_distance(quot.piece(a[0]).space, a[1], b[1])

    best = d(pp, qq)
    n = len(points)
    if n == 0 or max_chain_len < 2:
        return best
    between = np.array([[d(a, b) for b in points] for a in points])
    to_q = np.array([d(a, qq) for a in points])
    cost = np.array([d(pp, a) for a in points])   # chains ending at y_i = a
    n_classes = int(labels.max()) + 1
    for _ in range(max_chain_len - 1):
        # jump: y_i ∼ x_{i+1} costs nothing
        cls_min = np.full(n_classes, np.inf)
        np.minimum.at(cls_min, labels, cost)
        arrive = cls_min[labels]
        best = min(best, float(np.min(arrive + to_q)))
        cost = np.min(arrive[:, None] + between, axis=0)
    log.debug("chain oracle: %d gluing points, best %.9g", n, best)
    return float(best)
