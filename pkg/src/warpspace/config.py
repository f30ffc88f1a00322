"""
Configuration records for the solver, the quotient nets and the auditor.

Precedence is defaults < config file < command-line flags. The thread cap
comes from WARPSPACE_THREADS; a .env file in the working directory is read
first.
"""

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from dotenv import find_dotenv, load_dotenv

from .errors import SchemaError
from .jsonio import load_json

T = TypeVar("T")


@dataclass(frozen=True)
class SolverConfig:
    n_waypoints: int = 33
    max_iters: int = 2000
    step_tol: float = 1e-8
    length_tol: float = 1e-6
    restarts: int = 3
    rng_seed: int = 0
    fd_step: float = 1e-5
    max_winding: int = 2
    refine_tol: float = 1e-9
    respace_rounds: int = 2

    def __post_init__(self):
        if self.n_waypoints < 2:
            raise SchemaError(f"n_waypoints must be >= 2, got {self.n_waypoints}")
        if self.max_iters < 1:
            raise SchemaError("max_iters must be positive")
        if self.restarts < 0 or self.max_winding < 0 or self.respace_rounds < 0:
            raise SchemaError("restarts, max_winding and respace_rounds must be nonnegative")
        _require_positive(self, ("step_tol", "length_tol", "fd_step", "refine_tol"))


@dataclass(frozen=True)
class NetConfig:
    epsilon: float = 0.05
    edge_radius: float = 3.0           # in units of epsilon
    fiber_window: Tuple[float, float] = (-2.0, 2.0)

    def __post_init__(self):
        _require_positive(self, ("epsilon", "edge_radius"))
        lo, hi = self.fiber_window
        if not lo < hi:
            raise SchemaError(f"fiber_window must satisfy lo < hi, got {self.fiber_window}")


@dataclass(frozen=True)
class AuditConfig:
    radius: float = 0.5
    fractions: Tuple[float, ...] = (0.25, 0.5, 0.75)
    tol: float = 1e-4
    window: Tuple[float, float] = (-2.0, 2.0)
    large_triangles: bool = False
    collar_samples: int = 40
    thin_diameter: float = 0.5
    mode: str = "exact"                # exact: closed forms where they exist; solver: always optimize

    def __post_init__(self):
        _require_positive(self, ("radius", "tol", "thin_diameter"))
        if any(not 0.0 <= s <= 1.0 for s in self.fractions):
            raise SchemaError(f"fractions must lie in [0, 1], got {self.fractions}")
        if self.mode not in ("exact", "solver"):
            raise SchemaError(f"audit mode must be 'exact' or 'solver', got {self.mode!r}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[Path] = None
    output: Optional[Path] = None
    seed: int = 0
    samples: int = 100
    solver: SolverConfig = field(default_factory=SolverConfig)
    net: NetConfig = field(default_factory=NetConfig)
    audit: AuditConfig = field(default_factory=AuditConfig)


def _require_positive(obj: Any, names: Tuple[str, ...]) -> None:
    for n in names:
        v = getattr(obj, n)
        if not v > 0:
            raise SchemaError(f"{type(obj).__name__}.{n} must be positive, got {v!r}")


def override(cfg: T, values: Optional[Dict[str, Any]]) -> T:
    """Return cfg with the known, non-None keys of values replaced."""
    if not values:
        return cfg
    known = {f.name: f for f in fields(cfg)}
    changes: Dict[str, Any] = {}
    for k, v in values.items():
        if v is None:
            continue
        if k not in known:
            raise SchemaError(f"unknown {type(cfg).__name__} option: {k!r}")
        if isinstance(v, list):
            v = tuple(v)
        changes[k] = v
    return replace(cfg, **changes)


def from_dict(cls: Type[T], values: Optional[Dict[str, Any]]) -> T:
    return override(cls(), values)


def load_config_file(path: Optional[Path]) -> Dict[str, Dict[str, Any]]:
    """Read {"solver": {...}, "net": {...}, "audit": {...}} sections."""
    if path is None:
        return {}
    data = load_json(Path(path))
    unknown = set(data) - {"solver", "net", "audit"}
    if unknown:
        raise SchemaError(f"{path}: unknown config sections {sorted(unknown)}")
    return data


def thread_cap() -> int:
    load_dotenv(find_dotenv(usecwd=True))
    raw = os.getenv("WARPSPACE_THREADS")
    if raw is None:
        return max(1, min(8, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError as e:
        raise SchemaError(f"WARPSPACE_THREADS must be an integer, got {raw!r}") from e
    return max(1, n)
