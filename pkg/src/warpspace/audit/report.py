"""
Batch audits: comparison triangles, symmetry and triangle-inequality spot
checks, plus the structural checks that apply to the space at hand
(collars of cylinders, identifications and net axioms of quotients,
convexity of a supplied subspace). Everything lands in an AuditReport;
nothing here raises on a failed check.
"""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import AuditConfig, NetConfig, SolverConfig, thread_cap
from ..errors import CertificationError, DegenerateTriangleError
from ..jsonio import save_json
from ..logs import get_logger
from ..quotient.net import build_net
from ..quotient.space import QuotientSpace, as_quotient, check_identification
from ..spaces.descriptors import Warped, dim, is_primitive, normalize_point, sample_points
from .checks import convexity_check, net_pseudometric_check
from .triangles import (DistanceFn, cat0_check, comparison_vertices, cross_side_slack, exact_distance_fn,
                        make_triangle, solver_distance_fn)

log = get_logger("audit.report")

AUDIT_SOLVER = SolverConfig(n_waypoints=65, restarts=0)
CSV_COLUMNS = ("index", "diameter", "a0", "a1", "a2", "slack", "note")


@dataclass
class AuditReport:
    space_id: str
    seed: int
    mode: str
    radius: float
    tol: float
    effective_tol: float
    large_triangles: bool
    epsilon: Optional[float] = None
    n_triangles: int = 0
    n_degenerate: int = 0
    n_unconverged: int = 0
    n_cat0_violations: int = 0
    max_cat0_violation: Optional[float] = None
    n_large: int = 0
    max_slack_large: Optional[float] = None
    n_symmetry_failures: int = 0
    n_triangle_inequality_failures: int = 0
    collar: Optional[Dict[str, Any]] = None
    boundary: Optional[Dict[str, Any]] = None
    convexity: Optional[Dict[str, Any]] = None
    pseudometric: Optional[Dict[str, Any]] = None
    identifications: Optional[Dict[str, Any]] = None
    triangles: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def violations(self) -> int:
        n = self.n_cat0_violations + self.n_symmetry_failures + self.n_triangle_inequality_failures
        if self.collar is not None and not self.collar["passed"]:
            n += 1
        if self.boundary is not None and not self.boundary["convex"]:
            n += 1
        if self.convexity is not None and not self.convexity["convex"]:
            n += 1
        if self.pseudometric is not None and not self.pseudometric["passed"]:
            n += 1
        if self.identifications is not None:
            n += len(self.identifications["failures"])
        return n

    def add_triangle(self, row: Dict[str, Any], thin_diameter: float) -> None:
        self.triangles.append(row)
        self.n_triangles += 1
        self.n_symmetry_failures += row.pop("_asym")
        self.n_triangle_inequality_failures += row.pop("_ineq")
        if row["note"] == "unconverged":
            self.n_unconverged += 1
        elif row["note"]:
            self.n_degenerate += 1
        slack = row["slack"]
        if slack is None:
            return
        if self.max_cat0_violation is None or slack > self.max_cat0_violation:
            self.max_cat0_violation = slack
        if slack > self.effective_tol:
            self.n_cat0_violations += 1
        if row["diameter"] >= thin_diameter:
            self.n_large += 1
            if self.max_slack_large is None or slack > self.max_slack_large:
                self.max_slack_large = slack

    def to_json(self) -> Dict[str, Any]:
        out = {k: v for k, v in self.__dict__.items()}
        out["violations"] = self.violations
        return out

    def write_csv(self, p: Path) -> None:
        p = Path(p)
        p.parent.mkdir(parents=True, exist_ok=True)
        with p.open("w", encoding="utf-8", newline="") as f:
            w = csv.writer(f)
            w.writerow(CSV_COLUMNS)
            for row in self.triangles:
                a = row["lengths"] or [None, None, None]
                w.writerow([row["index"], row["diameter"], *a, row["slack"], row["note"]])

    def save(self, out_dir: Path) -> Tuple[Path, Path]:
        out_dir = Path(out_dir)
        json_path, csv_path = out_dir / "audit_report.json", out_dir / "audit_triangles.csv"
        save_json(self.to_json(), json_path)
        self.write_csv(csv_path)
        return json_path, csv_path


def _row(index: int, lengths, slack: Optional[float], note: str, asym: int, ineq: int) -> Dict[str, Any]:
    lengths = None if lengths is None else [float(a) for a in lengths]
    return {"index": index, "lengths": lengths, "diameter": max(lengths) if lengths else 0.0,
            "slack": None if slack is None else float(slack), "note": note, "_asym": asym, "_ineq": ineq}


# ---- flat pieces and their warps ----

def _sample_vertices(space: Any, rng: np.random.Generator, cfg: AuditConfig) -> np.ndarray:
    if cfg.large_triangles:
        return sample_points(space, rng, 3, cfg.window)
    c = sample_points(space, rng, 1, cfg.window)[0]
    d = len(c)
    out = []
    for _ in range(3):
        u = rng.normal(size=d)
        u /= max(float(np.linalg.norm(u)), 1e-300)
        r = cfg.radius * rng.uniform() ** (1.0 / d)
        out.append(normalize_point(space, c + r * u, tol=np.inf))
    return np.array(out)


def _chart_triangle(space: Any, index: int, verts: np.ndarray, dist: DistanceFn, solver_cfg: SolverConfig,
                    cfg: AuditConfig) -> Dict[str, Any]:
    tri = make_triangle(space, verts, solver_cfg, cfg.fractions)
    a = tri.lengths
    asym = sum(int(abs(dist(verts[(i + 1) % 3], verts[i]) - a[i]) > cfg.tol * max(1.0, a[i])) for i in range(3))
    ineq = int(tri.inequality_gap() > cfg.tol)
    if not all(s.converged for s in tri.sides):
        return _row(index, a, None, "unconverged", asym, ineq)
    try:
        slack = cat0_check(space, tri, cfg.tol, dist)
    except DegenerateTriangleError as e:
        return _row(index, a, None, f"degenerate: {e}", asym, ineq)
    return _row(index, a, slack, "", asym, ineq)


def _audit_charted(space: Any, report: AuditReport, n: int, rng: np.random.Generator, cfg: AuditConfig,
                   solver_cfg: SolverConfig) -> None:
    dist = exact_distance_fn(space, solver_cfg) if cfg.mode == "exact" else solver_distance_fn(space, solver_cfg)
    vertex_sets = [_sample_vertices(space, rng, cfg) for _ in range(n)]
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        rows = list(pool.map(lambda kv: _chart_triangle(space, kv[0], kv[1], dist, solver_cfg, cfg),
                             enumerate(vertex_sets)))
    for row in rows:
        report.add_triangle(row, cfg.thin_diameter)


# ---- quotients, on their nets ----

def _net_triangle(net, index: int, nodes: np.ndarray, cfg: AuditConfig, tol: float) -> Dict[str, Any]:
    d = net.distances_from(nodes)
    a = np.array([d[i, nodes[(i + 1) % 3]] for i in range(3)])
    scale = max(1.0, float(np.max(a)))
    asym = sum(int(abs(d[i, nodes[j]] - d[j, nodes[i]]) > 1e-12 * scale) for i in range(3) for j in range(i + 1, 3))
    ineq = int(float(np.max(2 * a - a.sum())) > tol)
    try:
        comp = comparison_vertices(a)
    except DegenerateTriangleError as e:
        return _row(index, a, None, f"degenerate: {e}", asym, ineq)
    samples, sample_nodes = [], []
    for i in range(3):
        _, route = net.shortest_path(int(nodes[i]), int(nodes[(i + 1) % 3]))
        cum = d[i, route]
        for s in cfg.fractions:
            j = int(np.argmin(np.abs(cum - s * a[i])))
            samples.append((i, float(cum[j] / a[i])))
            sample_nodes.append(route[j])
    pair = net.distances_from(sample_nodes)[:, sample_nodes]
    return _row(index, a, cross_side_slack(comp, samples, pair), "", asym, ineq)


def _audit_net(q: QuotientSpace, report: AuditReport, n: int, rng: np.random.Generator, cfg: AuditConfig,
               net_cfg: NetConfig, seed: int) -> None:
    net = build_net(q, net_cfg)
    report.pseudometric = net_pseudometric_check(net, seed=seed).to_json()
    failures, worst = [], 0.0
    for ident in q.identifications:
        try:
            worst = max(worst, check_identification(q, ident, seed=seed))
        except CertificationError as e:
            failures.append({"label": ident.label, "message": str(e)})
    report.identifications = {"checked": len(q.identifications), "max_deviation": worst, "failures": failures}
    for k in range(n):
        center = int(rng.integers(net.n_nodes))
        d0 = net.distances_from([center])[0]
        near = np.isfinite(d0) if cfg.large_triangles else d0 <= cfg.radius
        pool = np.flatnonzero(near & (np.arange(net.n_nodes) != center))
        if len(pool) < 2:
            report.add_triangle(_row(k, None, None, "degenerate: fewer than three net nodes in the ball", 0, 0),
                                cfg.thin_diameter)
            continue
        nodes = np.concatenate([[center], rng.choice(pool, size=2, replace=False)]).astype(int)
        report.add_triangle(_net_triangle(net, k, nodes, cfg, report.effective_tol), cfg.thin_diameter)


def _has_chart(space: Any) -> bool:
    return is_primitive(space) or (isinstance(space, Warped) and is_primitive(space.inner))


def run_audit(space: Any, n_triangles: int = 100, seed: int = 0, cfg: Optional[AuditConfig] = None,
              solver_cfg: Optional[SolverConfig] = None, net_cfg: Optional[NetConfig] = None,
              space_id: str = "", subspace: Optional[Tuple[Callable, Callable]] = None) -> AuditReport:
    """
    Deterministic for fixed seed and configs. `subspace` is an optional
    (sampler, projector) pair handed to convexity_check.
    """
    cfg = cfg or AuditConfig()
    solver_cfg = solver_cfg or AUDIT_SOLVER
    net_cfg = net_cfg or NetConfig()
    rng = np.random.default_rng(seed)
    charted = _has_chart(space)
    report = AuditReport(space_id or type(space).__name__, seed, cfg.mode, cfg.radius, cfg.tol,
                         cfg.tol if charted else max(cfg.tol, 2 * net_cfg.epsilon), cfg.large_triangles,
                         None if charted else net_cfg.epsilon)
    if charted:
        if dim(space) == 1:
            report.notes.append("one-dimensional space: comparison triangles are collinear unless they wrap")
        _audit_charted(space, report, n_triangles, rng, cfg, solver_cfg)
    else:
        report.notes.append(f"distances read off an epsilon-net (epsilon={net_cfg.epsilon:g}); "
                            f"comparison tolerance widened to {report.effective_tol:g}")
        _audit_net(as_quotient(space), report, n_triangles, rng, cfg, net_cfg, seed)
    if getattr(space, "kind", None) == "cylinder":
        from ..complexes.cylinders import check_boundary_convexity, check_straight_collars

        report.collar = check_straight_collars(space, None, cfg.collar_samples, net_cfg, seed=seed).to_json()
        report.boundary = check_boundary_convexity(space, cfg.collar_samples // 2, cfg=net_cfg, seed=seed).to_json()
    if subspace is not None:
        sampler, projector = subspace
        report.convexity = convexity_check(space, sampler, projector, solver_cfg, min(20, n_triangles), seed,
                                           cfg.tol).to_json()
    if report.n_degenerate:
        report.notes.append(f"{report.n_degenerate} degenerate triangles skipped")
    log.info("audit %s: %d triangles, %d violations, max slack %s", report.space_id, report.n_triangles,
             report.violations, report.max_cat0_violation)
    return report
