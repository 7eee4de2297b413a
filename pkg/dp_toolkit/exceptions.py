"""Exception hierarchy for the DP toolkit.

Every error carries a stable ``error_code``, a ``context`` dict for structured logging and the
process ``exit_code`` the command line maps it to.
"""

from typing import Any, Dict, Optional, Sequence, Tuple

from .constants import ExitCode


class ToolkitError(Exception):
    """Base exception for all toolkit errors."""

    exit_code: int = ExitCode.PRECONDITION

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for logging."""
        return {
            "type": self.__class__.__name__,
            "message": self.message,
            "error_code": self.error_code,
            "context": self.context,
        }


class FormulaSyntaxError(ToolkitError):
    """Malformed formula or sequent text."""

    def __init__(self, message: str, text: Optional[str] = None, position: Optional[int] = None):
        context: Dict[str, Any] = {}
        if text is not None:
            context["text"] = text
        if position is not None:
            context["position"] = position
        self.position = position
        super().__init__(message, "SYNTAX_ERROR", context)


class DerivationFormatError(ToolkitError):
    """Malformed derivation, sequent-set, clause or machine file."""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        context: Dict[str, Any] = {}
        if line is not None:
            context["line"] = line
        if source:
            context["source"] = source
        super().__init__(message, "FORMAT_ERROR", context)


class DerivationCheckError(ToolkitError):
    """A derivation node is not locally correct."""

    def __init__(self, message: str, path: Sequence[int] = (), reason: Optional[str] = None):
        self.path: Tuple[int, ...] = tuple(path)
        self.reason = reason or message
        super().__init__(message, "CHECK_ERROR", {"path": list(self.path), "reason": self.reason})


class GraftError(ToolkitError):
    """Grafting inputs do not fit together."""

    def __init__(self, message: str, hypothesis: Optional[str] = None):
        context = {"hypothesis": hypothesis} if hypothesis else {}
        super().__init__(message, "GRAFT_ERROR", context)


class ChoiceVectorError(ToolkitError):
    """Choice vector does not match the disjunction enumeration it indexes."""

    def __init__(self, message: str, expected: Optional[int] = None, actual: Optional[int] = None):
        context: Dict[str, Any] = {}
        if expected is not None:
            context["expected"] = expected
        if actual is not None:
            context["actual"] = actual
        super().__init__(message, "CHOICE_ERROR", context)


class PreconditionError(ToolkitError):
    """An operation was called outside its precondition."""

    def __init__(self, message: str, operation: Optional[str] = None, **details: Any):
        context: Dict[str, Any] = dict(details)
        if operation:
            context["operation"] = operation
        super().__init__(message, "PRECONDITION_ERROR", context)


class BoundednessViolation(ToolkitError):
    """Neither disjunct is immediately derivable from the derivation's sequents."""

    exit_code = ExitCode.BOUNDEDNESS

    def __init__(self, message: str, sequent: Optional[str] = None, base_size: Optional[int] = None):
        context: Dict[str, Any] = {}
        if sequent:
            context["sequent"] = sequent
        if base_size is not None:
            context["base_size"] = base_size
        super().__init__(message, "BOUNDEDNESS_VIOLATION", context)


class FuelExhaustedError(ToolkitError):
    """Normalization ran out of fuel; the partial derivation is attached."""

    exit_code = ExitCode.FUEL_EXHAUSTED

    def __init__(self, message: str, steps: int, partial: Any = None, fuel: Optional[int] = None):
        self.steps = steps
        self.partial = partial
        context: Dict[str, Any] = {"steps": steps}
        if fuel is not None:
            context["fuel"] = fuel
        super().__init__(message, "FUEL_EXHAUSTED", context)


class OracleCapExceeded(ToolkitError):
    """Sequent too large for the validity oracle."""

    def __init__(self, message: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(message, "ORACLE_CAP", {"size": size, "cap": cap})


class HornEncodingError(ToolkitError):
    """Formula is not a conjunction of Horn clauses."""

    def __init__(self, message: str, formula: Optional[str] = None):
        context = {"formula": formula} if formula else {}
        super().__init__(message, "HORN_ENCODING_ERROR", context)


class TmSpecError(ToolkitError):
    """Inconsistent machine description."""

    def __init__(self, message: str, line: Optional[int] = None):
        context = {"line": line} if line is not None else {}
        super().__init__(message, "TM_SPEC_ERROR", context)


class TmInvariantError(ToolkitError):
    """The local rule broke a configuration invariant."""

    def __init__(
        self,
        message: str,
        triple: Optional[Tuple[str, str, str]] = None,
        time: Optional[int] = None,
        position: Optional[int] = None,
    ):
        self.triple = triple
        context: Dict[str, Any] = {}
        if triple is not None:
            context["triple"] = list(triple)
        if time is not None:
            context["time"] = time
        if position is not None:
            context["position"] = position
        super().__init__(message, "TM_INVARIANT", context)


class TmInputError(ToolkitError):
    """Input word outside the machine's input alphabet."""

    def __init__(self, message: str, symbol: Optional[str] = None):
        context = {"symbol": symbol} if symbol is not None else {}
        super().__init__(message, "TM_INPUT_ERROR", context)


class ConfigurationError(ToolkitError):
    """Configuration failed validation."""

    exit_code = ExitCode.USAGE

    def __init__(self, message: str, errors: Optional[Sequence[str]] = None):
        super().__init__(message, "CONFIG_ERROR", {"errors": list(errors or [])})
