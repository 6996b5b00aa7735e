"""Verdict records shared by every check in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any


class Verdict(str, Enum):
    CERTIFIED = "CERTIFIED"
    REFUTED = "REFUTED"
    PASSED_BUDGET = "PASSED_BUDGET"


class Method(str, Enum):
    EXHAUSTIVE = "EXHAUSTIVE"
    SPECTRAL = "SPECTRAL"
    SAMPLING = "SAMPLING"
    LOCAL_SEARCH = "LOCAL_SEARCH"


@dataclass
class Certificate:
    """Outcome of a check.

    ``witness`` is whatever object makes the verdict checkable: a vertex
    subset, a pair of pair-sets, a clique, a transversal.  ``deviation`` is the
    statistic the check optimised, exact when the method allows it.
    ``details`` carries method-specific extras (node counts, constants, traces).
    """

    verdict: Verdict
    method: Method
    witness: Any = None
    deviation: Fraction | float | int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "method": self.method.value,
            "witness": jsonable(self.witness),
            "deviation": jsonable(self.deviation),
            "details": jsonable(self.details),
        }


def jsonable(obj: Any) -> Any:
    """Convert nested results into JSON-ready values; rationals become ``"p/q"`` plus a float."""
    import numpy as np

    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return {"exact": f"{obj.numerator}/{obj.denominator}", "float": float(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(x) for x in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def as_fraction(x: Any) -> Fraction:
    """Exact rational from an int, Fraction, ``"p/q"`` string or decimal float (``0.05`` is ``1/20``)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)
