"""Error taxonomy shared across the engine.

Every domain error carries a stable machine-readable ``code`` so HTTP
handlers, trace events, and the CLI can report failures uniformly.
"""

from __future__ import annotations


class FrmError(Exception):
    """Base class for all domain errors."""

    code = "FRM_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- model -----------------------------------------------------------------

class PayloadUnparsable(FrmError):
    code = "PAYLOAD_UNPARSABLE"


class PayloadTooLarge(FrmError):
    code = "PAYLOAD_TOO_LARGE"


class MissingPath(FrmError):
    code = "MISSING_PATH"


class DuplicateAttribute(FrmError):
    code = "DUPLICATE_ATTRIBUTE"


class TypeMismatch(FrmError):
    code = "TYPE_MISMATCH"


class MissingAttribute(FrmError):
    code = "MISSING_ATTRIBUTE"


class AttributeConflict(FrmError):
    code = "ATTRIBUTE_CONFLICT"


class RecordInvalid(FrmError):
    code = "RECORD_INVALID"


# --- rules -----------------------------------------------------------------

class RuleSyntaxError(FrmError):
    """Parse failure with 1-based position and the token set expected there."""

    code = "RULE_SYNTAX"

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.expected = expected


class RuleSemanticError(FrmError):
    code = "RULE_SEMANTIC"


class NoRoute(FrmError):
    code = "NO_ROUTE"


class EmptyPlan(FrmError):
    code = "EMPTY_PLAN"


# --- lifecycle -------------------------------------------------------------

class UnknownKind(FrmError):
    code = "UNKNOWN_KIND"


class IllegalTransition(FrmError):
    code = "ILLEGAL_TRANSITION"


class UnknownRequest(FrmError):
    code = "UNKNOWN_REQUEST"


# --- plan amendments -------------------------------------------------------

class DepthExceeded(FrmError):
    code = "DEPTH_EXCEEDED"


class CycleDetected(FrmError):
    code = "CYCLE_DETECTED"


class UnknownNode(FrmError):
    code = "UNKNOWN_NODE"


# --- adapters --------------------------------------------------------------

class DuplicateName(FrmError):
    code = "DUPLICATE_NAME"


class ActivationFailed(FrmError):
    code = "ACTIVATION_FAILED"


class UnknownAdapter(FrmError):
    code = "UNKNOWN_ADAPTER"


class UnknownOperation(FrmError):
    code = "UNKNOWN_OPERATION"


class AdapterUnavailable(FrmError):
    code = "ADAPTER_UNAVAILABLE"


class ScriptExhausted(FrmError):
    code = "SCRIPT_EXHAUSTED"


# --- store -----------------------------------------------------------------

class SequenceGap(FrmError):
    code = "SEQUENCE_GAP"


# --- config ----------------------------------------------------------------

class ConfigInvalid(FrmError):
    code = "CONFIG_INVALID"
