import json
from pathlib import Path
from typing import Any, Dict

from .errors import SchemaError


def load_json(p: Path) -> Dict[str, Any]:
    try:
        return json.loads(Path(p).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{p}: invalid JSON ({e})") from e
    except OSError as e:
        raise SchemaError(f"{p}: cannot read input ({e})") from e


def dumps(obj: Any) -> str:
    # sort_keys keeps stdout byte-identical across runs
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True)


def save_json(obj: Any, p: Path) -> None:
    p = Path(p)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps(obj) + "\n", encoding="utf-8")
