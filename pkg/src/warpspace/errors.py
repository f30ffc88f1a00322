from typing import Optional, Tuple


class WarpspaceError(RuntimeError):
    """Base error; `exit_code` is what the CLI exits with when this escapes."""
    exit_code = 1


class SchemaError(WarpspaceError):
    exit_code = 2


class NonPrimitiveError(SchemaError):
    """Raised by base_distance for descriptors without a closed-form metric."""


class CertificationError(WarpspaceError):
    exit_code = 3


class DisconnectedError(WarpspaceError):
    exit_code = 4


class ConvergenceError(WarpspaceError):
    exit_code = 1

    def __init__(self, message: str, estimates: Optional[Tuple[float, float]] = None):
        if estimates is not None:
            message = f"{message} (last estimates: {estimates[0]!r}, {estimates[1]!r})"
        super().__init__(message)
        self.estimates = estimates


class DegenerateTriangleError(WarpspaceError):
    """Comparison triangle with collinear vertices; the auditor skips it with a note."""
