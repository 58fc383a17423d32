"""Exception hierarchy.

Every validation failure carries a short ``code`` so that the CLI and the
tests can tell the failure kinds apart without string matching.
"""
from __future__ import annotations


class SdBuchiError(Exception):
    code = "E_GENERIC"
    exit_status = 1

    def __init__(self, message: str, *, where: str | None = None, item=None):
        self.message = message
        self.where = where
        self.item = item
        super().__init__(f"{where}: {message}" if where else message)

    def located(self, where: str) -> "SdBuchiError":
        """Return a copy of this error anchored at ``where``."""
        err = type(self)(self.message, where=where, item=self.item)
        return err


class ValidationError(SdBuchiError, ValueError):
    code = "E_VALIDATION"
    exit_status = 2


class ParseError(ValidationError):
    code = "E_SYNTAX"


class UnknownVertexError(ValidationError):
    code = "E_UNDECLARED"


class PartitionError(ValidationError):
    code = "E_PARTITION"


class AlternationError(ValidationError):
    code = "E_ALTERNATION"


class BuchiPlacementError(ValidationError):
    code = "E_BUCHI"


class OpenEndError(ValidationError):
    code = "E_OPEN_END"


class EntrancePredecessorError(OpenEndError):
    code = "E_ENTRANCE_PRED"


class ExitSuccessorError(OpenEndError):
    code = "E_EXIT_SUCC"


class ArityError(ValidationError):
    code = "E_ARITY"


class UnknownLeafError(ValidationError):
    code = "E_UNKNOWN_LEAF"


class StrategyError(ValidationError):
    code = "E_STRATEGY"


class ContractError(SdBuchiError, ValueError):
    """A precondition of an operation does not hold (e.g. strategy is not no-lose)."""

    code = "E_CONTRACT"
    exit_status = 2


class SizeGuardError(SdBuchiError):
    code = "E_SIZE_GUARD"
    exit_status = 3


class InvariantViolation(SdBuchiError, AssertionError):
    code = "E_INVARIANT"
    exit_status = 4
