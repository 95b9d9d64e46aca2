"""Tokenizer for the dice notation language.

Notation keywords are single lowercase letters; macro names are uppercase.
Inside a ``{...}`` face list, letter runs become SYMBOL tokens instead of
keywords so faces like ``d{CLUBS,HEARTS}`` do not collide with macro names.
Quoted symbols (``'+'``) are accepted anywhere a symbol is.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import LexError, SymbolTooLong

MAX_SYMBOL_LEN = 100


class TokenKind(enum.Enum):
    INT = "integer"
    D = "d"
    K = "k"
    H = "h"
    L = "l"
    R = "r"
    O = "o"
    P = "p"
    F = "f"
    C = "c"
    U = "u"
    BANG = "!"
    PERCENT = "%"
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    BACKSLASH = "\\"
    LPAREN = "("
    RPAREN = ")"
    LBRACE = "{"
    RBRACE = "}"
    COMMA = ","
    RANGE = ".."
    SEMICOLON = ";"
    HASH = "#"
    AT = "@"
    EQUALS = "="
    EQ = "=="
    NEQ = "!="
    LT = "<"
    GT = ">"
    LE = "<="
    GE = ">="
    MACRO_NAME = "macro name"
    SYMBOL = "symbol"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


_KEYWORDS = {
    "d": TokenKind.D,
    "k": TokenKind.K,
    "h": TokenKind.H,
    "l": TokenKind.L,
    "r": TokenKind.R,
    "o": TokenKind.O,
    "p": TokenKind.P,
    "f": TokenKind.F,
    "c": TokenKind.C,
    "u": TokenKind.U,
}

_PUNCT = {
    "%": TokenKind.PERCENT,
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "\\": TokenKind.BACKSLASH,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMICOLON,
    "#": TokenKind.HASH,
    "@": TokenKind.AT,
}

_TWO_CHAR = {
    "..": TokenKind.RANGE,
    "==": TokenKind.EQ,
    "!=": TokenKind.NEQ,
    "<=": TokenKind.LE,
    ">=": TokenKind.GE,
}


_ASCII_DIGITS = frozenset("0123456789")


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() or ch in _ASCII_DIGITS or ch == "_"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, or raise LexError at the first bad char."""
    tokens: list[Token] = []
    i = 0
    n = len(source)
    brace_depth = 0

    def emit(kind: TokenKind, start: int, end: int):
        tokens.append(Token(kind, source[start:end], start, end))

    while i < n:
        ch = source[i]

        if ch.isspace():
            i += 1
            continue

        if ch in _ASCII_DIGITS:
            j = i
            while j < n and source[j] in _ASCII_DIGITS:
                j += 1
            emit(TokenKind.INT, i, j)
            i = j
            continue

        if ch == "'":
            j = i + 1
            while j < n and source[j] != "'":
                j += 1
            if j >= n:
                raise LexError("unterminated symbol quote", (i, n), found="'")
            text = source[i + 1:j]
            if len(text) > MAX_SYMBOL_LEN:
                raise SymbolTooLong(
                    f"symbol exceeds {MAX_SYMBOL_LEN} characters", (i, j + 1))
            tokens.append(Token(TokenKind.SYMBOL, text, i, j + 1))
            i = j + 1
            continue

        two = source[i:i + 2]
        if two in _TWO_CHAR:
            emit(_TWO_CHAR[two], i, i + 2)
            i += 2
            continue

        if ch == "<":
            emit(TokenKind.LT, i, i + 1)
            i += 1
            continue
        if ch == ">":
            emit(TokenKind.GT, i, i + 1)
            i += 1
            continue
        if ch == "=":
            emit(TokenKind.EQUALS, i, i + 1)
            i += 1
            continue
        if ch == "!":
            emit(TokenKind.BANG, i, i + 1)
            i += 1
            continue

        if ch == "{":
            brace_depth += 1
            emit(TokenKind.LBRACE, i, i + 1)
            i += 1
            continue
        if ch == "}":
            brace_depth = max(0, brace_depth - 1)
            emit(TokenKind.RBRACE, i, i + 1)
            i += 1
            continue

        if ch in _PUNCT:
            emit(_PUNCT[ch], i, i + 1)
            i += 1
            continue

        if ch.isalpha() or ch == "_":
            if brace_depth > 0:
                # Face-list context: any bare word is a symbol.
                j = i
                while j < n and _is_word_char(source[j]):
                    j += 1
                if j - i > MAX_SYMBOL_LEN:
                    raise SymbolTooLong(
                        f"symbol exceeds {MAX_SYMBOL_LEN} characters", (i, j))
                emit(TokenKind.SYMBOL, i, j)
                i = j
                continue
            if ch.isupper():
                j = i + 1
                while j < n and (source[j].isupper()
                                 or source[j] in _ASCII_DIGITS
                                 or source[j] == "_"):
                    j += 1
                emit(TokenKind.MACRO_NAME, i, j)
                i = j
                continue
            kind = _KEYWORDS.get(ch)
            if kind is None:
                raise LexError(
                    f"unexpected character {ch!r}", (i, i + 1), found=ch)
            emit(kind, i, i + 1)
            i += 1
            continue

        raise LexError(f"unexpected character {ch!r}", (i, i + 1), found=ch)

    return tokens
