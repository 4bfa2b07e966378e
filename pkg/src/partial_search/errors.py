"""Exception hierarchy shared by the engines, oracles and CLI."""

from __future__ import annotations

from typing import Any


class ReductionError(Exception):
    """Base class. ``kind`` is the machine-readable error tag, ``exit_code`` the CLI status."""

    kind = "error"
    exit_code = 1

    def __init__(self, message: str, record: dict[str, Any] | None = None):
        super().__init__(message)
        self.record = record

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"error": self.kind, "message": str(self)}
        if self.record is not None:
            out["record"] = self.record
        return out


class ParseError(ReductionError):
    kind = "parse-error"
    exit_code = 2


class OracleViolation(ReductionError):
    """An oracle answer broke its contract; ``record`` is the offending loop's trace entry."""

    kind = "oracle-violation"
    exit_code = 3


class PlantedViolation(OracleViolation):
    kind = "planted-violation"


class NoWitness(ReductionError):
    """The oracle has no legal answer (no consistent cycle / graphs not isomorphic)."""

    kind = "no-witness"
    exit_code = 3


class NotIsomorphic(NoWitness):
    kind = "not-isomorphic"


class InstanceTooLarge(ReductionError):
    kind = "instance-too-large"
    exit_code = 4


class InternalInvariantFailure(ReductionError):
    kind = "internal-invariant-failure"
    exit_code = 5


class ContractionError(InternalInvariantFailure):
    kind = "contraction-error"


class FixtureNotFound(InternalInvariantFailure):
    kind = "fixture-not-found"


class ReplayMismatch(InternalInvariantFailure):
    kind = "replay-mismatch"
