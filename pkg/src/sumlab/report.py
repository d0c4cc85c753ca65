"""Verification reports and their JSON form."""
from dataclasses import asdict, dataclass, field
import json
import math
import time

VARIANTS = ("printed", "corrected")


def check_variant(variant):
    """Reject anything other than the two supported readings of a formula."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def _encode(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _encode(value.item())
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    return value


def _decode(value):
    if isinstance(value, dict):
        if set(value) == {"re", "im"}:
            return complex(value["re"], value["im"])
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of evaluating both sides of one identity.

    ``passed`` holds when either the absolute or the relative error is
    within ``tolerance``; ``rel_err`` divides by the larger side.
    """

    identity_id: str
    parameters: dict
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    diagnostics: list = field(default_factory=list)
    tolerance: float = 1e-8
    passed: bool = False
    wall_time: float = 0.0

    @classmethod
    def build(cls, identity_id, parameters, lhs, rhs, tolerance, diagnostics=(), start=None):
        if not tolerance > 0:
            raise ValueError("tolerance must be positive")
        lhs, rhs = complex(lhs), complex(rhs)
        abs_err = abs(lhs - rhs)
        rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
        passed = bool(abs_err <= tolerance or rel_err <= tolerance)
        elapsed = 0.0 if start is None else time.perf_counter() - start
        return cls(
            identity_id,
            dict(parameters),
            lhs,
            rhs,
            abs_err,
            rel_err,
            [(str(k), v) for k, v in diagnostics],
            float(tolerance),
            passed,
            elapsed,
        )

    def diagnostic(self, label):
        for k, v in self.diagnostics:
            if k == label:
                return v
        raise KeyError(label)

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.identity_id:<18} {status}  abs_err={self.abs_err:.3e}  rel_err={self.rel_err:.3e}"
            f"  tol={self.tolerance:.1e}  time={self.wall_time:.2f}s"
        )

    def to_dict(self):
        d = asdict(self)
        d["diagnostics"] = [[k, v] for k, v in self.diagnostics]
        return _encode(d)

    def to_json(self, **kwargs):
        # json writes floats with repr, which round-trips exactly
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data):
        d = _decode(data)
        d["diagnostics"] = [(k, v) for k, v in d["diagnostics"]]
        d["lhs"], d["rhs"] = complex(d["lhs"]), complex(d["rhs"])
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def consistent(self):
        """Recompute the error fields and the verdict from lhs/rhs."""
        abs_err = abs(self.lhs - self.rhs)
        rel_err = abs_err / max(abs(self.lhs), abs(self.rhs), 1e-300)
        same = math.isclose(abs_err, self.abs_err, rel_tol=1e-12, abs_tol=0) and math.isclose(
            rel_err, self.rel_err, rel_tol=1e-12, abs_tol=0
        )
        return same and self.passed == (abs_err <= self.tolerance or rel_err <= self.tolerance)
