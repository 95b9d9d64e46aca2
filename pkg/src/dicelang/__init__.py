"""Dice-notation parsing and rolling with injectable, replayable randomness.

Quick start::

    >>> import dicelang
    >>> dicelang.roll("2d20kh+2", seed=7).groups  # doctest: +SKIP
    [19]
"""

from __future__ import annotations

from . import errors, nodes
from .dice import (DiceSpec, FaceSet, Pool, RollRecord, count_active, explode,
                   filter_pool, keep_drop, resolve_faces, roll_pool, unique)
from .dice import reroll as reroll_pool
from .errors import DiceError
from .evaluator import (Limits, MacroTable, RollResult, builtin_macro_table,
                        evaluate, parse_macro_text)
from .nodes import RollExpression, expand_special, unparse
from .parser import parse, parse_tokens
from .rng import RandomSource, ScriptedSource, SeededSource, seeded_source
from .tokens import Token, TokenKind, tokenize

__version__ = "0.1.0"

__all__ = [
    "DiceError", "DiceSpec", "FaceSet", "Limits", "MacroTable", "Pool",
    "RandomSource", "RollExpression", "RollRecord", "RollResult",
    "ScriptedSource", "SeededSource", "Token", "TokenKind",
    "builtin_macro_table", "count_active", "errors", "evaluate",
    "expand_special", "explode", "filter_pool", "keep_drop", "parse",
    "parse_macro_text", "parse_tokens", "reroll_pool", "resolve_faces",
    "roll", "roll_pool", "seeded_source", "tokenize", "unique", "unparse",
]


def roll(expression: str, *, seed: int | None = None,
         rng: RandomSource | None = None,
         macros: dict[str, str] | None = None,
         limits: Limits | None = None,
         default_sides: int | None = None) -> RollResult:
    """Parse and evaluate ``expression`` in one call.

    ``macros`` maps names to expression strings, layered over the built-in
    macro pack.  Provide either ``seed`` or a ready ``rng``.
    """
    table = builtin_macro_table()
    if macros:
        for name, body in macros.items():
            statements = parse(body).statements
            if len(statements) != 1 or isinstance(statements[0],
                                                  nodes.MacroDefinition):
                raise errors.ValueTypeError(
                    f"macro {name} body must be a single expression")
            table.define(name, statements[0])
    ast = parse(expression, default_sides=default_sides)
    source = rng if rng is not None else SeededSource(seed)
    return evaluate(ast, macros=table, rng=source, limits=limits)
