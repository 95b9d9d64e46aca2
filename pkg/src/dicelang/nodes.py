"""AST node types for parsed roll expressions, plus unparsing.

All nodes are immutable so parsed expressions can be shared between
evaluations and stored in macro tables without defensive copies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

# --- face specifications ----------------------------------------------------


@dataclass(frozen=True)
class StandardSides:
    """Plain y-sided die with faces 1..y."""

    sides: int
    # True when the side count came from the parser's lenient default rather
    # than the source text; excluded from equality so round-trips compare equal.
    defaulted: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class NumericFaces:
    values: tuple[int, ...]


@dataclass(frozen=True)
class SymbolicFaces:
    symbols: tuple[str, ...]


@dataclass(frozen=True)
class Percent:
    """The d% shorthand."""


@dataclass(frozen=True)
class Coin:
    """The c shorthand."""


@dataclass(frozen=True)
class Fate:
    """The df shorthand."""


Faces = Union[StandardSides, NumericFaces, SymbolicFaces, Percent, Coin, Fate]


def expand_special(faces: Faces) -> Faces:
    """Resolve a shorthand face spec into its concrete face list."""
    if isinstance(faces, Percent):
        return StandardSides(100)
    if isinstance(faces, Coin):
        return SymbolicFaces(("HEADS", "TAILS"))
    if isinstance(faces, Fate):
        return SymbolicFaces(("-", "-", "0", "0", "+", "+"))
    return faces


# --- dice operations ---------------------------------------------------------


@dataclass(frozen=True)
class Condition:
    comparator: str  # one of ==, !=, <, >, <=, >=
    threshold: int | str


@dataclass(frozen=True)
class KeepDrop:
    which: str  # "keep" | "drop"
    end: str    # "high" | "low"
    z: int = 1


@dataclass(frozen=True)
class Filter:
    cond: Condition


@dataclass(frozen=True)
class Reroll:
    cond: Condition
    repeated: bool


@dataclass(frozen=True)
class Explode:
    mode: str  # "plain" | "once" | "penetrating"


@dataclass(frozen=True)
class Count:
    pass


@dataclass(frozen=True)
class Unique:
    pass


DiceOp = Union[KeepDrop, Filter, Reroll, Explode, Count, Unique]


# --- expression nodes --------------------------------------------------------


@dataclass(frozen=True)
class IntLiteral:
    value: int


@dataclass(frozen=True)
class DiceNode:
    count: "Expr | None"  # None means 1
    faces: Faces


@dataclass(frozen=True)
class DiceOpNode:
    child: "Expr"
    op: DiceOp


@dataclass(frozen=True)
class BinaryMath:
    op: str  # + - * / \
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class UnaryNegate:
    child: "Expr"


@dataclass(frozen=True)
class MacroAccess:
    name: str


@dataclass(frozen=True)
class Seq:
    """Semicolon-separated expressions inside a parenthesized group."""

    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Group:
    child: "Expr"


Expr = Union[IntLiteral, DiceNode, DiceOpNode, BinaryMath, UnaryNegate,
             MacroAccess, Seq, Group]


@dataclass(frozen=True)
class MacroDefinition:
    name: str
    body: Expr


Statement = Union[MacroDefinition, Expr]


@dataclass(frozen=True)
class RollExpression:
    statements: tuple[Statement, ...]


# --- unparsing ---------------------------------------------------------------

_BARE_SYMBOL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _symbol_text(sym: str) -> str:
    if _BARE_SYMBOL.match(sym):
        return sym
    return f"'{sym}'"


def _faces_text(faces: Faces) -> str:
    if isinstance(faces, StandardSides):
        return f"d{faces.sides}"
    if isinstance(faces, NumericFaces):
        return "d{" + ",".join(str(v) for v in faces.values) + "}"
    if isinstance(faces, SymbolicFaces):
        return "d{" + ",".join(_symbol_text(s) for s in faces.symbols) + "}"
    if isinstance(faces, Percent):
        return "d%"
    if isinstance(faces, Fate):
        return "df"
    raise TypeError(f"not a dice face spec: {faces!r}")


def _cond_text(cond: Condition) -> str:
    if isinstance(cond.threshold, str):
        return cond.comparator + _symbol_text(cond.threshold)
    return cond.comparator + str(cond.threshold)


def _op_text(op: DiceOp) -> str:
    if isinstance(op, KeepDrop):
        letters = ("k" if op.which == "keep" else "d") + \
            ("h" if op.end == "high" else "l")
        # Always write the count: "kh1-1" is unambiguous where "kh-1" would
        # read as a signed keep count.
        return letters + str(op.z)
    if isinstance(op, Filter):
        return "f" + _cond_text(op.cond)
    if isinstance(op, Reroll):
        return ("rr" if op.repeated else "r") + _cond_text(op.cond)
    if isinstance(op, Explode):
        return {"plain": "!", "once": "!o", "penetrating": "!p"}[op.mode]
    if isinstance(op, Count):
        return "c"
    if isinstance(op, Unique):
        return "u"
    raise TypeError(f"not a dice operation: {op!r}")


def unparse_expr(node: Expr) -> str:
    if isinstance(node, IntLiteral):
        return str(node.value)
    if isinstance(node, DiceNode):
        if isinstance(node.faces, Coin):
            prefix = "" if node.count is None else unparse_expr(node.count)
            return prefix + "c"
        prefix = "" if node.count is None else unparse_expr(node.count)
        return prefix + _faces_text(node.faces)
    if isinstance(node, DiceOpNode):
        return unparse_expr(node.child) + _op_text(node.op)
    if isinstance(node, BinaryMath):
        return unparse_expr(node.lhs) + node.op + unparse_expr(node.rhs)
    if isinstance(node, UnaryNegate):
        return "-" + unparse_expr(node.child)
    if isinstance(node, MacroAccess):
        return "@" + node.name
    if isinstance(node, Seq):
        return ";".join(unparse_expr(item) for item in node.items)
    if isinstance(node, Group):
        return "(" + unparse_expr(node.child) + ")"
    raise TypeError(f"not an expression node: {node!r}")


def unparse(expr: RollExpression) -> str:
    """Emit text that re-parses to a structurally identical AST."""
    parts = []
    for stmt in expr.statements:
        if isinstance(stmt, MacroDefinition):
            parts.append(f"#{stmt.name}={unparse_expr(stmt.body)}")
        else:
            parts.append(unparse_expr(stmt))
    return ";".join(parts)
