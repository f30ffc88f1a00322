import logging
import sys

ROOT_LOGGER = "warpspace"
_FORMAT = "[%(levelname)s] %(message)s"


class _TagFormatter(logging.Formatter):
    """Console tags as the pipeline prints them: [INFO], [WARN], [ERROR]."""

    def format(self, record: logging.LogRecord) -> str:
        if record.levelname == "WARNING":
            record.levelname = "WARN"
        return super().format(record)


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def configure(verbose: bool = False) -> None:
    """Install the stderr handler once; stdout stays reserved for JSON."""
    root = logging.getLogger(ROOT_LOGGER)
    if not any(isinstance(h, _StderrHandler) for h in root.handlers):
        handler = _StderrHandler()
        handler.setFormatter(_TagFormatter(_FORMAT))
        root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False


def get_logger(name: str) -> logging.Logger:
    if not name.startswith(ROOT_LOGGER):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)
