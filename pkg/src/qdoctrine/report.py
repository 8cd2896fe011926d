"""Law-check outcomes and the exception hierarchy shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class StructureReport:
    """Outcome of a law check.

    ``checked`` counts the instances examined; ``skipped`` counts instances
    that fell outside the enumerable scope (a fiber too large to list).
    A failing report always carries a ``counterexample`` mapping that names
    the objects, arrows and fiber elements involved plus the violated clause.
    """

    name: str
    passed: bool
    checked: int = 0
    skipped: int = 0
    counterexample: dict[str, Any] | None = None
    scope: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, name, checked=0, skipped=0, scope="", **details):
        return cls(name, True, checked, skipped, None, scope, details)

    @classmethod
    def fail(cls, name, counterexample, checked=0, skipped=0, scope="", **details):
        return cls(name, False, checked, skipped, counterexample, scope, details)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": "pass" if self.passed else "fail",
            "checked": self.checked,
            "skipped": self.skipped,
            "scope": self.scope,
            "counterexample": _plain(self.counterexample),
            "details": _plain(self.details),
        }

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" skipped={self.skipped}" if self.skipped else ""
        text = f"{verdict} {self.name} (checked={self.checked}{extra})"
        if self.scope:
            text += f" [{self.scope}]"
        if not self.passed:
            text += f" counterexample={_plain(self.counterexample)}"
        return text


def _plain(value):
    """Turn a witness into something json/yaml can carry."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, StructureReport):
        return value.to_dict()
    return repr(value)


class DoctrineError(Exception):
    """Base class for every error raised by the package."""


class MalformedInput(DoctrineError, ValueError):
    pass


class NotFound(DoctrineError, LookupError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoAdjoint(NotFound):
    pass


class FiberTooLarge(DoctrineError):
    """Raised when a fiber would have to be enumerated beyond the size limit."""


class PreconditionViolated(DoctrineError):
    pass


class NotAnEquivalenceRelation(PreconditionViolated):
    pass


class ProductNotPreserved(PreconditionViolated):
    pass


class MissingWeakComprehension(NotFound):
    pass


class NoWeakEvaluation(NotFound):
    pass


class MissingPullback(NotFound):
    pass


class BudgetExhausted(DoctrineError):
    def __init__(self, message, coverage=None):
        super().__init__(message)
        self.coverage = coverage


class InvariantViolation(DoctrineError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
