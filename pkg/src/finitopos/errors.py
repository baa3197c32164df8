"""Exception types and the check report shared by every module."""

import os
from dataclasses import dataclass, field

DEFAULT_BUDGET = 2_000_000


class WorkbenchError(Exception):
    pass


class FormatError(WorkbenchError, ValueError):
    """Malformed input: unknown identifiers, duplicates, missing table entries."""


class PreconditionError(WorkbenchError, ValueError):
    """Well-formed input that violates an operation's precondition."""


class BudgetExceeded(WorkbenchError, RuntimeError):
    def __init__(self, what, bound):
        super().__init__(f"{what}: enumeration budget of {bound} exceeded")
        self.what = what
        self.bound = bound


def default_budget():
    raw = os.environ.get("WORKBENCH_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise FormatError(f"WORKBENCH_BUDGET must be an integer, got {raw!r}")


class Budget:
    """Counter of search steps; raises once `bound` steps have been spent."""

    def __init__(self, what, bound=None):
        self.what = what
        self.bound = default_budget() if bound is None else bound
        self.used = 0

    def tick(self, n=1):
        self.used += n
        if self.used > self.bound:
            raise BudgetExceeded(self.what, self.bound)


@dataclass(frozen=True, eq=False)
class Report:
    """Outcome of a law check.

    `failure` names the first violated law and `witness` holds the offending
    elements; both are empty on success. Truthiness follows `ok`.
    """

    ok: bool
    check: str
    failure: str | None = None
    witness: tuple = ()
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls, check, **details):
        return cls(True, check, details=details)

    @classmethod
    def failed(cls, check, failure, witness=(), **details):
        return cls(False, check, failure, tuple(witness), details)

    def as_dict(self):
        out = {"check": self.check, "ok": self.ok}
        if not self.ok:
            out["failure"] = self.failure
            out["witness"] = list(self.witness)
        if self.details:
            out["details"] = self.details
        return out
