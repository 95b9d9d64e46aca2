"""Structured error taxonomy shared by the tokenizer, parser, evaluator and CLI.

Every error carries a stable ``code`` (used by the CLI JSON output and the
foreign bindings) and an optional ``span`` of byte offsets into the source.
"""

from __future__ import annotations


class DiceError(Exception):
    """Base class for every structured error raised by this package."""

    code = "DICE_ERROR"
    #: CLI exit status: 2 = user error, 3 = internal resource limit.
    exit_status = 2

    def __init__(self, message: str, span: tuple[int, int] | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "span": list(self.span) if self.span is not None else None,
        }

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.message} (at {self.span[0]}..{self.span[1]})"
        return self.message


# --- lexing ---------------------------------------------------------------

class LexError(DiceError):
    code = "LEX_ERROR"

    def __init__(self, message, span=None, found=None):
        super().__init__(message, span)
        self.found = found


class SymbolTooLong(LexError):
    code = "SYMBOL_TOO_LONG"


# --- parsing --------------------------------------------------------------

class ParseError(DiceError):
    code = "PARSE_ERROR"

    def __init__(self, message, span=None, expected=None, found=None):
        super().__init__(message, span)
        self.expected = expected
        self.found = found


class NegativeSides(ParseError):
    code = "NEGATIVE_SIDES"


class NegativeKeepCount(ParseError):
    code = "NEGATIVE_KEEP_COUNT"


class MissingSides(ParseError):
    code = "MISSING_SIDES"


class MixedFaces(ParseError):
    code = "MIXED_FACES"


class EmptyRange(ParseError):
    code = "EMPTY_RANGE"


# --- evaluation -----------------------------------------------------------

class UndefinedMacro(DiceError):
    code = "UNDEFINED_MACRO"


class MacroDepthExceeded(DiceError):
    code = "MACRO_DEPTH_EXCEEDED"


class SymbolicOrderingError(DiceError):
    code = "SYMBOLIC_ORDERING"


class ValueTypeError(DiceError):
    """Arithmetic or a typed dice operation applied to the wrong kind of value."""

    code = "TYPE_ERROR"


class DivisionByZero(DiceError):
    code = "DIVISION_BY_ZERO"


class NegativeCount(DiceError):
    code = "NEGATIVE_COUNT"


# --- resource limits (CLI exit status 3) ----------------------------------

class PoolTooLarge(DiceError):
    code = "POOL_TOO_LARGE"
    exit_status = 3


class StateSpaceTooLarge(DiceError):
    code = "STATE_SPACE_TOO_LARGE"
    exit_status = 3


class ScriptExhausted(DiceError):
    """A ScriptedSource ran out of predetermined indices (test plumbing)."""

    code = "SCRIPT_EXHAUSTED"
    exit_status = 3
