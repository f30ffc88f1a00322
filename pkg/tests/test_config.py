import json

import pytest

from pipeline import build_run_config, make_parser, output_dir
from warpspace.config import (AuditConfig, NetConfig, SolverConfig, from_dict, load_config_file, override,
                              thread_cap)
from warpspace.errors import SchemaError


def parse(*argv):
    return build_run_config(make_parser().parse_args(list(argv)))


def test_defaults():
    run = parse("audit", "--input", "data/specs/flat_plane.json")
    assert run.seed == 0 and run.samples == 100
    assert run.net == NetConfig()
    assert run.audit == AuditConfig()
    assert output_dir(run).as_posix() == "data/outputs/flat_plane"


def test_flags_win_over_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"net": {"epsilon": 0.2, "fiber_window": [-1, 1]},
                               "audit": {"radius": 0.3, "tol": 1e-3}}), encoding="utf-8")
    run = parse("audit", "--input", "x.json", "--config", str(cfg), "--epsilon", "0.1", "--tol", "1e-5")
    assert run.net.epsilon == 0.1
    assert run.net.fiber_window == (-1, 1)
    assert run.audit.radius == 0.3
    assert run.audit.tol == 1e-5


def test_tol_goes_to_the_solver_for_distances():
    run = parse("distance", "--input", "x.json", "--tol", "1e-4", "--seed", "3")
    assert run.solver.length_tol == 1e-4
    assert run.solver.rng_seed == 3
    assert run.audit.tol == AuditConfig().tol


def test_window_feeds_net_and_audit():
    run = parse("audit", "--input", "x.json", "--window=-1,3", "--large-triangles", "--mode", "solver")
    assert run.net.fiber_window == (-1.0, 3.0)
    assert run.audit.window == (-1.0, 3.0)
    assert run.audit.large_triangles and run.audit.mode == "solver"


def test_unknown_section(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"plot": {}}', encoding="utf-8")
    with pytest.raises(SchemaError, match="unknown config sections"):
        load_config_file(cfg)


def test_override_rejects_unknown_keys():
    with pytest.raises(SchemaError):
        override(SolverConfig(), {"waypoints": 9})
    assert override(SolverConfig(), {"n_waypoints": 9, "restarts": None}) == SolverConfig(n_waypoints=9)


@pytest.mark.parametrize("cls,values", [
    (SolverConfig, {"n_waypoints": 1}),
    (SolverConfig, {"restarts": -1}),
    (NetConfig, {"epsilon": 0.0}),
    (NetConfig, {"fiber_window": [1.0, 1.0]}),
    (AuditConfig, {"mode": "fast"}),
    (AuditConfig, {"fractions": [0.5, 1.5]}),
])
def test_invalid_values(cls, values):
    with pytest.raises(SchemaError):
        from_dict(cls, values)


def test_thread_cap_from_environment(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("WARPSPACE_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("WARPSPACE_THREADS", "0")
    assert thread_cap() == 1
    monkeypatch.setenv("WARPSPACE_THREADS", "x")
    with pytest.raises(SchemaError):
        thread_cap()


def test_thread_cap_from_dotenv(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("WARPSPACE_THREADS", raising=False)
    (tmp_path / ".env").write_text("WARPSPACE_THREADS=2\n", encoding="utf-8")
    assert thread_cap() == 2
    monkeypatch.delenv("WARPSPACE_THREADS", raising=False)
