import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from warpspace import logs
from warpspace.audit.report import AUDIT_SOLVER, run_audit
from warpspace.complexes.graph_of_spaces import (GraphOfSpacesSpec, build_multiwarp_space,
                                                 build_total_space_combinatorial)
from warpspace.config import (AuditConfig, NetConfig, RunConfig, SolverConfig, from_dict, load_config_file,
                              override)
from warpspace.errors import SchemaError, WarpspaceError
from warpspace.geodesic.solver import distance
from warpspace.groups.graph_of_groups import GraphOfGroupsSpec, is_graph_of_groups
from warpspace.groups.presentation import serre_presentation
from warpspace.groups.realize import realize_graph_of_groups
from warpspace.jsonio import dumps, load_json, save_json
from warpspace.spaces.resolve import space_from_document

DEFAULT_OUT_ROOT = Path("data/outputs")
COMMANDS = ("build", "distance", "geodesic", "audit", "presentation")

log = logs.get_logger("pipeline")


# -----------------------------
# Arguments and configuration
# -----------------------------

def _window(s: Optional[str]) -> Optional[Tuple[float, float]]:
    if s is None:
        return None
    try:
        lo, hi = (float(v) for v in s.split(","))
    except ValueError as e:
        raise SchemaError(f"--window expects 'lo,hi', got {s!r}") from e
    return lo, hi


def _point(s: Optional[str], flag: str) -> Any:
    if s is None:
        raise SchemaError(f"{flag} is required")
    try:
        return json.loads(s)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{flag}: invalid JSON point {s!r} ({e})") from e


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Defaults < --config file < flags."""
    file_cfg = load_config_file(Path(args.config) if args.config else None)
    solver = from_dict(SolverConfig, file_cfg.get("solver"))
    net = from_dict(NetConfig, file_cfg.get("net"))
    audit = from_dict(AuditConfig, file_cfg.get("audit"))
    if args.tol is not None and not args.tol > 0:
        raise SchemaError(f"--tol must be positive, got {args.tol}")
    if args.samples < 1:
        raise SchemaError(f"--samples must be positive, got {args.samples}")
    window = _window(args.window)
    solver = override(solver, {"rng_seed": args.seed,
                               "length_tol": args.tol if args.command in ("distance", "geodesic") else None})
    net = override(net, {"epsilon": args.epsilon, "fiber_window": window})
    audit = override(audit, {"tol": args.tol if args.command == "audit" else None, "radius": args.radius,
                             "window": window, "mode": args.mode,
                             "large_triangles": True if args.large_triangles else None})
    return RunConfig(args.command, Path(args.input), Path(args.output) if args.output else None,
                     args.seed if args.seed is not None else 0, args.samples, solver, net, audit)


def output_dir(run: RunConfig) -> Path:
    # name output dir by input file name
    return run.output if run.output else DEFAULT_OUT_ROOT / run.input.stem


# -----------------------------
# Loading
# -----------------------------

def load_any(doc: Dict[str, Any]) -> Tuple[Any, Optional[Dict[str, Any]]]:
    """A space from a graph-of-groups, graph-of-spaces or space document; plus extras to print."""
    if is_graph_of_groups(doc):
        real = realize_graph_of_groups(GraphOfGroupsSpec.from_json(doc))
        return real.space, {"presentation": real.presentation.to_json(), "claims": list(real.claims)}
    if isinstance(doc, dict) and "vertices" in doc:
        spec = GraphOfSpacesSpec.from_json(doc)
        return build_multiwarp_space(spec), {"combinatorics": build_total_space_combinatorial(spec)}
    return space_from_document(doc), None


# -----------------------------
# Commands
# -----------------------------

def cmd_build(run: RunConfig) -> Tuple[Dict[str, Any], int]:
    space, extras = load_any(load_json(run.input))
    out = {"space": space.to_json()}
    out.update(extras or {})
    out_file = output_dir(run) / "space.json"
    save_json(out, out_file)
    log.info("Saved space → %s", out_file)
    return out, 0


def cmd_distance(run: RunConfig, p: Any, q: Any, with_path: bool) -> Tuple[Dict[str, Any], int]:
    space, _ = load_any(load_json(run.input))
    res = distance(space, p, q, run.solver, run.net)
    out = res.to_json(space, with_path=with_path)
    if run.output:
        save_json(out, run.output / ("geodesic.json" if with_path else "distance.json"))
    return out, 0


def cmd_audit(run: RunConfig) -> Tuple[Dict[str, Any], int]:
    space, _ = load_any(load_json(run.input))
    solver = override(AUDIT_SOLVER, {"rng_seed": run.seed})
    report = run_audit(space, run.samples, run.seed, run.audit, solver, run.net, space_id=run.input.stem)
    json_path, csv_path = report.save(output_dir(run))
    log.info("Wrote audit report → %s", json_path)
    log.info("Wrote triangle table → %s", csv_path)
    out = report.to_json()
    if report.violations:
        log.warning("audit found %d violations", report.violations)
        return out, 5
    return out, 0


def cmd_presentation(run: RunConfig) -> Tuple[Dict[str, Any], int]:
    doc = load_json(run.input)
    if not is_graph_of_groups(doc):
        raise SchemaError(f"{run.input}: not a graph-of-groups document")
    return serre_presentation(GraphOfGroupsSpec.from_json(doc)).to_json(), 0


def dispatch(args: argparse.Namespace) -> int:
    run = build_run_config(args)
    if run.command == "build":
        out, code = cmd_build(run)
    elif run.command in ("distance", "geodesic"):
        out, code = cmd_distance(run, _point(args.p, "--p"), _point(args.q, "--q"), run.command == "geodesic")
    elif run.command == "audit":
        out, code = cmd_audit(run)
    else:
        out, code = cmd_presentation(run)
    sys.stdout.write(dumps(out) + "\n")
    return code


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Warped products, mapping cylinders and graph-of-spaces quotients.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="Space, graph-of-spaces or graph-of-groups JSON file.")
    parser.add_argument("--output", help="Directory for generated files (default: data/outputs/<input name>).")
    parser.add_argument("--config", help="JSON config with optional solver / net / audit sections.")
    parser.add_argument("--p", help="First point as JSON, e.g. '[0, 0]' or '{\"piece\": \"X\", \"coord\": [0.1, 0]}'.")
    parser.add_argument("--q", help="Second point as JSON.")
    parser.add_argument("--tol", type=float, help="Solver length tolerance, or the audit tolerance for 'audit'.")
    parser.add_argument("--seed", type=int, help="Random seed.")
    parser.add_argument("--samples", type=int, default=100, help="Number of audit triangles.")
    parser.add_argument("--window", help="Sampling window 'lo,hi' for unbounded coordinates.")
    parser.add_argument("--radius", type=float, help="Audit ball radius.")
    parser.add_argument("--epsilon", type=float, help="Net resolution for quotient spaces.")
    parser.add_argument("--mode", choices=("exact", "solver"), help="Audit distance mode.")
    parser.add_argument("--large-triangles", action="store_true", help="Sample audit triangles over the whole window.")
    parser.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logs.configure(args.verbose)
    try:
        return dispatch(args)
    except WarpspaceError as e:
        log.error("%s", e)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
