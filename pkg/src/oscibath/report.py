"""Verification report record and its JSON form."""

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

__all__ = ["VerificationReport", "compare", "timed"]


def _encode(value):
    if isinstance(value, complex):
        return {"re": float(value.real), "im": float(value.imag)}
    return float(value)


@dataclass
class VerificationReport:
    """Outcome of one named numerical check."""

    check_name: str
    expected: complex | float
    computed: complex | float
    abs_error: float
    rel_error: float
    passed: bool
    runtime_ms: int | None = None
    detail: str = ""
    failure_kind: str | None = field(default=None)

    def to_dict(self, timing=False):
        out = {
            "check_name": self.check_name,
            "expected": _encode(self.expected),
            "computed": _encode(self.computed),
            "abs_error": float(self.abs_error),
            "rel_error": float(self.rel_error),
            "pass": bool(self.passed),
        }
        if timing and self.runtime_ms is not None:
            out["runtime_ms"] = int(self.runtime_ms)
        if self.detail:
            out["detail"] = self.detail
        if self.failure_kind:
            out["failure_kind"] = self.failure_kind
        return out


def compare(name, expected, computed, tol, *, absolute=False, detail=""):
    """Build a report; relative test unless ``absolute`` or the target is ~0."""
    abs_err = float(abs(computed - expected))
    scale = abs(expected)
    rel_err = abs_err / scale if scale > 0 else math.inf if abs_err else 0.0
    use_abs = absolute or scale < 1e-300
    passed = (abs_err if use_abs else rel_err) <= tol
    if isinstance(expected, complex) or isinstance(computed, complex):
        expected, computed = complex(expected), complex(computed)
    else:
        expected, computed = float(expected), float(computed)
    return VerificationReport(name, expected, computed, abs_err, rel_err, bool(passed), detail=detail)


@contextmanager
def timed():
    """Yield a one-element list that receives elapsed milliseconds."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int(round(1000 * (time.perf_counter() - start)))
