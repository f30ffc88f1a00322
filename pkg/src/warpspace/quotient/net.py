"""
ε-nets of quotient spaces and shortest paths on them.

Each piece window is sampled on a grid whose metric spacing is at most ε.
Grid neighbours within edge_radius·ε are joined by edges weighted with the
exact length of the coordinate-straight segment. Identified points are
joined by zero-weight edges; images that miss the grid become auxiliary
nodes. Distances are single-source Dijkstra runs on the graph with the
zero-weight classes contracted, which is the chain infimum restricted to
the net.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from ..config import NetConfig, thread_cap
from ..errors import DisconnectedError, SchemaError
from ..logs import get_logger
from ..spaces.descriptors import Warped, inner_chart, normalize_point, point_to_json
from ..spaces.fiber import warp_factor
from .identification import CHART_TOL, Identification
from .space import Piece, QuotientSpace, as_quotient, segment_distance

log = get_logger("quotient.net")

_KEY_DIGITS = 9
_ZERO = 1e-14


@dataclass(frozen=True, eq=False)
class NetGraph:
    epsilon: float
    pieces: Tuple[Piece, ...]
    node_piece: np.ndarray              # (N,) piece index
    node_coords: Tuple[np.ndarray, ...]  # per node, normalized piece coordinates
    edges: np.ndarray                   # (M, 2) node ids
    weights: np.ndarray                 # (M,), 0 exactly on identification edges
    extra_ids: Tuple[int, ...] = ()     # ids of query points inserted at build time
    n_skipped: int = 0                  # identification images outside the windows

    @property
    def n_nodes(self) -> int:
        return len(self.node_piece)

    def piece_index(self, name: str) -> int:
        for i, p in enumerate(self.pieces):
            if p.name == name:
                return i
        raise SchemaError(f"unknown piece {name!r}")

    def nodes_of(self, name: str) -> np.ndarray:
        return np.flatnonzero(self.node_piece == self.piece_index(name))

    def node(self, i: int) -> Tuple[str, np.ndarray]:
        return self.pieces[self.node_piece[i]].name, self.node_coords[i]

    @cached_property
    def _contracted(self) -> Tuple[np.ndarray, csr_matrix]:
        n = self.n_nodes
        zero = self.weights <= _ZERO
        ze = self.edges[zero]
        zg = coo_matrix((np.ones(len(ze)), (ze[:, 0], ze[:, 1])), shape=(n, n))
        _, labels = connected_components(zg, directed=False)
        pe = self.edges[~zero]
        w = self.weights[~zero]
        a, b = labels[pe[:, 0]], labels[pe[:, 1]]
        keep = a != b
        lo, hi, w = np.minimum(a, b)[keep], np.maximum(a, b)[keep], w[keep]
        order = np.lexsort((w, hi, lo))
        lo, hi, w = lo[order], hi[order], w[order]
        first = np.ones(len(lo), dtype=bool)
        first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
        k = int(labels.max()) + 1 if n else 0
        g = csr_matrix((w[first], (lo[first], hi[first])), shape=(k, k))
        return labels, g

    @property
    def classes(self) -> np.ndarray:
        """Label of each node's identification class."""
        return self._contracted[0]

    def distances_from(self, sources: Sequence[int]) -> np.ndarray:
        """(len(sources), N) quotient distances from each source node to every node."""
        labels, g = self._contracted
        d = dijkstra(g, directed=False, indices=labels[np.asarray(sources, dtype=int)])
        return np.atleast_2d(d)[:, labels]

    def shortest_path(self, p: int, q: int) -> Tuple[float, List[int]]:
        """Distance and one representative node per class along a shortest path."""
        labels, g = self._contracted
        d, pred = dijkstra(g, directed=False, indices=int(labels[p]), return_predecessors=True)
        target = int(labels[q])
        if not np.isfinite(d[target]):
            raise DisconnectedError(f"net nodes {p} and {q} lie in different components")
        chain = [target]
        while chain[-1] != labels[p]:
            chain.append(int(pred[chain[-1]]))
        chain.reverse()
        reps = {}
        for i in range(self.n_nodes - 1, -1, -1):
            reps[int(labels[i])] = i
        nodes = [reps[c] for c in chain]
        nodes[0], nodes[-1] = p, q
        return float(d[target]), nodes

    def to_json(self) -> Dict[str, Any]:
        """Adjacency export with node coordinates and piece tags."""
        nodes = []
        for i in range(self.n_nodes):
            piece = self.pieces[self.node_piece[i]]
            nodes.append({"id": i, "piece": piece.name, "coord": point_to_json(piece.space, self.node_coords[i])})
        return {
            "epsilon": self.epsilon,
            "nodes": nodes,
            "edges": [[int(a), int(b), float(w)] for (a, b), w in zip(self.edges, self.weights)],
            "skipped_identifications": self.n_skipped,
        }


def quotient_distance(net: NetGraph, p: int, q: int) -> float:
    d = float(net.distances_from([p])[0, q])
    if not math.isfinite(d):
        raise DisconnectedError(f"net nodes {p} and {q} lie in different components")
    return d


# ---- grids ----

def _fiber_max(space: Any, window: Sequence[Tuple[float, float]]) -> float:
    """Largest warp factor over the fiber window box."""
    if not isinstance(space, Warped):
        return 1.0
    corner = [hi if lam > 1 else lo for lam, (lo, hi) in zip(space.warp.lambdas, window)]
    return float(warp_factor(space.warp, np.array(corner)))


def _resolved_window(piece: Piece, cfg: NetConfig) -> List[Tuple[float, float]]:
    chart, nfib = inner_chart(piece.space)
    out = []
    for i, w in enumerate(piece.window):
        if w is not None:
            out.append(w)
        elif i < chart.dim and chart.periodic[i]:
            out.append((0.0, float(chart.periods[i])))
        elif i < chart.dim and np.isfinite(chart.lower[i]):
            out.append((float(chart.lower[i]), float(chart.upper[i])))
        else:
            out.append(tuple(cfg.fiber_window))
    return out


def _circle_resolution(q: QuotientSpace, cfg: NetConfig) -> Dict[float, int]:
    """One grid resolution per circumference, shared by all pieces so covers map grid to grid."""
    res: Dict[float, int] = {}
    for p in q.pieces:
        chart, _ = inner_chart(p.space)
        win = _resolved_window(p, cfg)
        fmax = _fiber_max(p.space, win[chart.dim:])
        for i in np.flatnonzero(chart.periodic):
            c = float(chart.periods[i])
            m = int(math.ceil(c * chart.weights[i] * fmax / cfg.epsilon - 1e-9))
            res[c] = max(res.get(c, 1), m, 3)
    return res


def _axis(piece: Piece, i: int, win: Tuple[float, float], fmax: float, circles: Dict[float, int],
          cfg: NetConfig) -> np.ndarray:
    chart, _ = inner_chart(piece.space)
    eps = cfg.epsilon
    lo, hi = win
    if i < chart.dim and chart.periodic[i]:
        c = float(chart.periods[i])
        m = circles[c]
        vals = np.arange(m) * (c / m)
        return vals[(vals >= lo - CHART_TOL) & (vals <= hi + CHART_TOL)]
    if i < chart.dim and np.isfinite(chart.lower[i]):
        n = max(1, int(math.ceil((hi - lo) * chart.weights[i] * fmax / eps - 1e-9)))
        return np.linspace(lo, hi, n + 1)
    # unbounded: grid aligned to integers so unit shifts map nodes to nodes
    w = chart.weights[i] * fmax if i < chart.dim else 1.0
    h = 1.0 / math.ceil(w / eps - 1e-9)
    start = math.floor(lo / h + 1e-9)
    stop = math.ceil(hi / h - 1e-9)
    return np.arange(start, stop + 1) * h


def _piece_grid(piece: Piece, circles: Dict[float, int], cfg: NetConfig):
    chart, _ = inner_chart(piece.space)
    win = _resolved_window(piece, cfg)
    fmax = _fiber_max(piece.space, win[chart.dim:])
    axes = [_axis(piece, i, w, fmax, circles, cfg) for i, w in enumerate(win)]
    if any(len(a) == 0 for a in axes):
        raise SchemaError(f"piece {piece.name!r}: empty sampling window")
    shape = tuple(len(a) for a in axes)
    idx = np.indices(shape).reshape(len(shape), -1).T
    coords = np.column_stack([axes[j][idx[:, j]] for j in range(len(axes))]) if axes else np.zeros((1, 0))
    wrap = [bool(i < chart.dim and chart.periodic[i] and len(axes[i]) == circles[float(chart.periods[i])])
            for i in range(len(axes))]
    return coords, idx, shape, wrap


def _stencil_edges(piece: Piece, coords, idx, shape, wrap, cfg: NetConfig):
    radius = cfg.edge_radius * cfg.epsilon
    reach = max(1, min(3, int(math.ceil(cfg.edge_radius))))
    d = len(shape)
    flat = np.ravel_multi_index(idx.T, shape) if d else np.zeros(1, dtype=int)
    src_all, dst_all, w_all = [], [], []
    for off in itertools.product(range(-reach, reach + 1), repeat=d):
        # half-space: the first nonzero offset component is positive
        nz = [o for o in off if o != 0]
        if not nz or nz[0] < 0:
            continue
        nb = idx + np.array(off)
        ok = np.ones(len(idx), dtype=bool)
        for j in range(d):
            if wrap[j]:
                nb[:, j] %= shape[j]
            else:
                ok &= (nb[:, j] >= 0) & (nb[:, j] < shape[j])
        if not ok.any():
            continue
        src = flat[ok]
        dst = np.ravel_multi_index(nb[ok].T, shape)
        keep = src != dst
        src, dst = src[keep], dst[keep]
        w = segment_distance(piece.space, coords[src], coords[dst])
        sel = (w <= radius * (1 + 1e-12)) & (w > 0)
        src_all.append(src[sel]); dst_all.append(dst[sel]); w_all.append(w[sel])
    if not src_all:
        return np.zeros((0, 2), dtype=int), np.zeros(0)
    e = np.column_stack([np.concatenate(src_all), np.concatenate(dst_all)])
    w = np.concatenate(w_all)
    lo, hi = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
    _, first = np.unique(lo * len(coords) + hi, return_index=True)
    return np.column_stack([lo, hi])[first], w[first]


# ---- building ----

class _Builder:
    def __init__(self, q: QuotientSpace, cfg: NetConfig):
        self.q = q
        self.cfg = cfg
        self.coords: List[np.ndarray] = []   # per piece (n_i, d_i)
        self.offsets: List[int] = []
        self.lookup: List[Dict[Tuple[float, ...], int]] = []
        self.aux: List[Tuple[int, np.ndarray]] = []   # (piece index, coords) in id order
        self.edges: List[np.ndarray] = []
        self.weights: List[np.ndarray] = []
        self.zero: List[Tuple[int, int]] = []
        self.n_skipped = 0

    @staticmethod
    def _key(x: np.ndarray) -> Tuple[float, ...]:
        return tuple(np.round(x, _KEY_DIGITS) + 0.0)

    def grids(self) -> None:
        circles = _circle_resolution(self.q, self.cfg)

        def one(piece: Piece):
            coords, idx, shape, wrap = _piece_grid(piece, circles, self.cfg)
            e, w = _stencil_edges(piece, coords, idx, shape, wrap, self.cfg)
            return coords, e, w

        with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
            results = list(pool.map(one, self.q.pieces))
        total = 0
        for piece, (coords, e, w) in zip(self.q.pieces, results):
            self.offsets.append(total)
            self.coords.append(coords)
            self.lookup.append({self._key(c): total + k for k, c in enumerate(coords)})
            self.edges.append(e + total)
            self.weights.append(w)
            total += len(coords)
            log.debug("piece %s: %d grid nodes, %d edges", piece.name, len(coords), len(e))
        self.n_grid = total

    def _inside(self, pi: int, x: np.ndarray) -> bool:
        win = _resolved_window(self.q.pieces[pi], self.cfg)
        return all(lo - CHART_TOL <= v <= hi + CHART_TOL for v, (lo, hi) in zip(x, win))

    def node_for(self, pi: int, x: np.ndarray, force: bool = False) -> Optional[int]:
        """Existing node at x, or a new auxiliary node; None when x is outside the window."""
        piece = self.q.pieces[pi]
        x = normalize_point(piece.space, x, tol=CHART_TOL)
        key = self._key(x)
        if key in self.lookup[pi]:
            return self.lookup[pi][key]
        if not force and not self._inside(pi, x):
            return None
        nid = self.n_grid + len(self.aux)
        self.aux.append((pi, x))
        self.lookup[pi][key] = nid
        return nid

    def _grid_nodes_on(self, pi: int, chart) -> np.ndarray:
        return self.coords[pi][chart.contains(self.coords[pi])]

    def identifications(self) -> None:
        names = {p.name: i for i, p in enumerate(self.q.pieces)}
        for ident in self.q.identifications:
            si, ti = names[ident.source.piece], names[ident.target.piece]
            for chart, pi in ((ident.source, si), (ident.target, ti)):
                win = _resolved_window(self.q.pieces[pi], self.cfg)
                for i, v in chart.fixed:
                    lo, hi = win[i]
                    if not lo - CHART_TOL <= v <= hi + CHART_TOL:
                        raise SchemaError(f"identification {ident.label!r}: chart on {chart.piece!r} "
                                          f"fixes coordinate {i} = {v}, outside window {win[i]}")
            pairs = []
            for x in self._grid_nodes_on(si, ident.source):
                for y in ident.forward(x):
                    pairs.append((x, y))
            for y in self._grid_nodes_on(ti, ident.target):
                for x in ident.backward(y):
                    pairs.append((x, y))
            if not pairs:
                log.warning("identification %r touches no net nodes", ident.label)
            for x, y in pairs:
                a = self.node_for(si, x)
                b = self.node_for(ti, y)
                if a is None or b is None:
                    self.n_skipped += 1
                elif a != b:
                    self.zero.append((a, b))

    def extra(self, points: Sequence[Tuple[str, np.ndarray]]) -> List[int]:
        names = {p.name: i for i, p in enumerate(self.q.pieces)}
        ids = []
        for name, x in points:
            if name not in names:
                raise SchemaError(f"unknown piece {name!r}")
            ids.append(self.node_for(names[name], np.asarray(x, dtype=float), force=True))
        return ids

    def link_aux(self) -> None:
        """Join auxiliary nodes to every node of their piece within the edge radius."""
        radius = self.cfg.edge_radius * self.cfg.epsilon
        aux_piece = np.array([pi for pi, _ in self.aux], dtype=int)
        for k, (pi, x) in enumerate(self.aux):
            nid = self.n_grid + k
            space = self.q.pieces[pi].space
            grid_ids = self.offsets[pi] + np.arange(len(self.coords[pi]))
            # aux-aux pairs once: only later aux nodes of the same piece
            later = np.flatnonzero(aux_piece[k + 1:] == pi) + k + 1
            others = np.vstack([self.coords[pi]] + [self.aux[j][1][None, :] for j in later])
            ids = np.concatenate([grid_ids, self.n_grid + later])
            w = segment_distance(space, x, others)
            sel = (w <= radius) & (w > _ZERO)
            self.edges.append(np.column_stack([np.full(int(sel.sum()), nid), ids[sel]]))
            self.weights.append(w[sel])

    def finish(self, extra_ids: Sequence[int]) -> NetGraph:
        node_piece = np.concatenate(
            [np.full(len(c), i) for i, c in enumerate(self.coords)] + [np.array([pi for pi, _ in self.aux], dtype=int)])
        coords = [c.copy() for block in self.coords for c in block] + [x.copy() for _, x in self.aux]
        zero = np.array(self.zero, dtype=int).reshape(-1, 2)
        edges = np.vstack(self.edges + [zero]) if self.edges else zero
        weights = np.concatenate(self.weights + [np.zeros(len(zero))])
        for c in coords:
            c.setflags(write=False)
        return NetGraph(self.cfg.epsilon, self.q.pieces, node_piece.astype(int), tuple(coords), edges.astype(int),
                        weights, tuple(extra_ids), self.n_skipped)


def build_net(space: Any, cfg: Optional[NetConfig] = None,
              extra_points: Sequence[Tuple[str, Any]] = ()) -> NetGraph:
    """
    ε-net of any space (quotients, cylinders, warped quotients, or a single
    flat piece). `extra_points` are (piece, coord) query points inserted as
    nodes; their ids are returned in `NetGraph.extra_ids`.
    """
    cfg = cfg or NetConfig()
    q = as_quotient(space)
    b = _Builder(q, cfg)
    b.grids()
    b.identifications()
    extra_ids = b.extra(extra_points)
    b.link_aux()
    net = b.finish(extra_ids)
    log.info("net: %d nodes, %d edges, epsilon=%g", net.n_nodes, len(net.edges), cfg.epsilon)
    if net.n_skipped:
        log.debug("net: %d identification images fell outside the windows", net.n_skipped)
    return net


def lonely_nodes(net: NetGraph) -> int:
    """Nodes with no same-piece neighbour within 2ε."""
    e, w = net.edges, net.weights
    same = net.node_piece[e[:, 0]] == net.node_piece[e[:, 1]]
    close = same & (w > 0) & (w <= 2 * net.epsilon * (1 + 1e-12))
    has = np.zeros(net.n_nodes, dtype=bool)
    has[e[close, 0]] = True
    has[e[close, 1]] = True
    return int(np.sum(~has))


def parse_piece_point(q: QuotientSpace, p: Any) -> Tuple[str, np.ndarray]:
    """{"piece": name, "coord": [...]} or [name, coord]; bare coordinates for single-piece spaces."""
    if isinstance(p, dict):
        if "piece" not in p or "coord" not in p:
            raise SchemaError(f"quotient point needs 'piece' and 'coord': {p!r}")
        name, coord = str(p["piece"]), p["coord"]
    elif isinstance(p, (list, tuple)) and len(p) == 2 and isinstance(p[0], str):
        name, coord = p
    elif len(q.pieces) == 1:
        name, coord = q.pieces[0].name, p
    else:
        raise SchemaError(f"point {p!r} does not name a piece")
    return name, normalize_point(q.piece(name).space, coord)


def net_geodesic(space: Any, p: Any, q: Any, cfg: Optional[NetConfig] = None):
    from ..geodesic.solver import GeodesicResult

    cfg = cfg or NetConfig()
    quot = as_quotient(space)
    pp, qq = parse_piece_point(quot, p), parse_piece_point(quot, q)
    net = build_net(quot, cfg, [pp, qq])
    a, b = net.extra_ids
    length, nodes = net.shortest_path(a, b)
    route = tuple((net.node(i)[0], net.node(i)[1]) for i in nodes)
    return GeodesicResult(length, None, True, 0, epsilon=cfg.epsilon, method="net", net_path=route)
