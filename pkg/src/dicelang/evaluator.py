"""Bottom-up resolution of a parsed roll expression.

Resolution order per statement: dice terms roll first, postfix dice
operations transform the pool, pools collapse to values, element-wise math
applies (padding shorter operands with the operator's identity), and finally
statement results are concatenated into the ordered output groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from . import dice, nodes
from .errors import (DivisionByZero, MacroDepthExceeded, NegativeCount,
                     UndefinedMacro, ValueTypeError)
from .parser import parse
from .rng import RandomSource, SeededSource

Value = int | str


@dataclass
class Limits:
    chain_limit: int = dice.DEFAULT_CHAIN_LIMIT
    max_pool: int = dice.DEFAULT_MAX_POOL
    max_enumeration: int = 10_000_000
    macro_depth: int = 16


@dataclass
class RollResult:
    groups: list[Value]
    records: list[dice.RollRecord]
    warnings: list[str]

    def text(self) -> str:
        return ",".join(str(g) for g in self.groups)

    def to_dict(self) -> dict:
        return {
            "groups": list(self.groups),
            "records": [
                {
                    "history": list(r.history),
                    "status": r.status,
                    "limit_hit": r.limit_hit,
                }
                for r in self.records
            ],
            "warnings": list(self.warnings),
        }


class MacroTable:
    """Uppercase-name -> stored (unevaluated) expression body."""

    def __init__(self, entries: dict[str, nodes.Expr] | None = None):
        self.entries: dict[str, nodes.Expr] = dict(entries or {})

    def define(self, name: str, body: nodes.Expr) -> bool:
        """Store a body; returns True when an existing entry was replaced."""
        replaced = name in self.entries
        self.entries[name] = body
        return replaced

    def lookup(self, name: str) -> nodes.Expr:
        try:
            return self.entries[name]
        except KeyError:
            raise UndefinedMacro(f"macro @{name} is not defined") from None

    def copy(self) -> "MacroTable":
        return MacroTable(self.entries)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)


_IDENTITY = {"+": 0, "-": 0, "*": 1, "/": 1, "\\": 1}


def _builtin_entries() -> dict[str, nodes.Expr]:
    text = resources.files("dicelang").joinpath(
        "data/builtin_macros.dice").read_text(encoding="utf-8")
    return parse_macro_text(text).entries


_BUILTIN_CACHE: dict[str, nodes.Expr] | None = None


def builtin_macro_table() -> MacroTable:
    """Fresh table preloaded with the shipped macro pack (D66 etc.)."""
    global _BUILTIN_CACHE
    if _BUILTIN_CACHE is None:
        _BUILTIN_CACHE = _builtin_entries()
    return MacroTable(_BUILTIN_CACHE)


def parse_macro_text(text: str) -> MacroTable:
    """Parse a macro file: one ``#NAME = expr`` definition per line."""
    table = MacroTable()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        statements = parse(line).statements
        for stmt in statements:
            if not isinstance(stmt, nodes.MacroDefinition):
                raise ValueTypeError(
                    f"macro file line {lineno} is not a #NAME = expr "
                    f"definition")
            table.define(stmt.name, stmt.body)
    return table


@dataclass
class _Context:
    macros: MacroTable
    rng: RandomSource
    limits: Limits
    records: list[dice.RollRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def evaluate(expr: nodes.RollExpression,
             macros: MacroTable | None = None,
             rng: RandomSource | None = None,
             limits: Limits | None = None) -> RollResult:
    """Resolve statements left to right into a RollResult.

    Macro definitions mutate ``macros`` and contribute no output groups.
    """
    ctx = _Context(
        macros=macros if macros is not None else builtin_macro_table(),
        rng=rng if rng is not None else SeededSource(),
        limits=limits if limits is not None else Limits(),
    )
    groups: list[Value] = []
    for stmt in expr.statements:
        if isinstance(stmt, nodes.MacroDefinition):
            if ctx.macros.define(stmt.name, stmt.body):
                ctx.warnings.append(f"macro {stmt.name} was redefined")
        else:
            groups.extend(_collapse(_eval(stmt, ctx, 0), ctx))
    return RollResult(groups, ctx.records, ctx.warnings)


def _collapse(value, ctx: _Context) -> list[Value]:
    if isinstance(value, dice.Pool):
        kept = value.active_values()
        if value.is_symbolic:
            return [" ".join(str(v) for v in kept)]
        return [sum(kept)]
    return value


def _eval(node: nodes.Expr, ctx: _Context, depth: int):
    if isinstance(node, nodes.IntLiteral):
        return [node.value]

    if isinstance(node, nodes.DiceNode):
        return _eval_dice(node, ctx, depth)

    if isinstance(node, nodes.DiceOpNode):
        pool = _eval(node.child, ctx, depth)
        if not isinstance(pool, dice.Pool):
            raise ValueTypeError(
                "dice operation applied to a plain value, not a dice pool")
        return _apply_op(pool, node.op, ctx)

    if isinstance(node, nodes.BinaryMath):
        lhs = _collapse(_eval(node.lhs, ctx, depth), ctx)
        rhs = _collapse(_eval(node.rhs, ctx, depth), ctx)
        return _binary(node.op, lhs, rhs)

    if isinstance(node, nodes.UnaryNegate):
        values = _collapse(_eval(node.child, ctx, depth), ctx)
        _require_numeric(values)
        return [-v for v in values]

    if isinstance(node, nodes.MacroAccess):
        if depth >= ctx.limits.macro_depth:
            raise MacroDepthExceeded(
                f"macro expansion deeper than {ctx.limits.macro_depth}")
        body = ctx.macros.lookup(node.name)
        return _eval(body, ctx, depth + 1)

    if isinstance(node, nodes.Seq):
        out: list[Value] = []
        for item in node.items:
            out.extend(_collapse(_eval(item, ctx, depth), ctx))
        return out

    if isinstance(node, nodes.Group):
        return _eval(node.child, ctx, depth)

    raise TypeError(f"cannot evaluate node: {node!r}")


def _eval_dice(node: nodes.DiceNode, ctx: _Context, depth: int):
    if node.count is None:
        count = 1
    elif isinstance(node.count, nodes.IntLiteral):
        count = node.count.value
    else:
        values = _collapse(_eval(node.count, ctx, depth), ctx)
        if len(values) != 1 or not isinstance(values[0], int):
            raise ValueTypeError(
                "dice count must resolve to a single number")
        count = values[0]
    if count < 0:
        raise NegativeCount("dice count cannot be negative")
    faces = dice.resolve_faces(node.faces)
    if isinstance(node.faces, nodes.StandardSides) and node.faces.defaulted:
        ctx.warnings.append(
            f"dice term without sides defaulted to d{node.faces.sides}")
    pool = dice.roll_pool(dice.DiceSpec(count, faces), ctx.rng,
                          ctx.limits.max_pool)
    ctx.records.extend(pool.records)
    return pool


def _apply_op(pool: dice.Pool, op: nodes.DiceOp, ctx: _Context):
    if isinstance(op, nodes.KeepDrop):
        dice.keep_drop(pool, op.which, op.end, op.z)
    elif isinstance(op, nodes.Filter):
        dice.filter_pool(pool, op.cond)
    elif isinstance(op, nodes.Reroll):
        dice.reroll(pool, op.cond, op.repeated, ctx.rng,
                    ctx.limits.chain_limit)
    elif isinstance(op, nodes.Explode):
        dice.explode(pool, op.mode, ctx.rng, ctx.limits.chain_limit)
    elif isinstance(op, nodes.Unique):
        dice.unique(pool)
    elif isinstance(op, nodes.Count):
        ctx.warnings.extend(pool.warnings)
        pool.warnings.clear()
        return [dice.count_active(pool)]
    else:
        raise TypeError(f"unknown dice operation: {op!r}")
    ctx.warnings.extend(pool.warnings)
    pool.warnings.clear()
    return pool


def _require_numeric(values: list[Value]):
    for v in values:
        if not isinstance(v, int):
            raise ValueTypeError(
                f"arithmetic on symbolic value {v!r} is not defined")


def _binary(op: str, lhs: list[Value], rhs: list[Value]) -> list[Value]:
    _require_numeric(lhs)
    _require_numeric(rhs)
    identity = _IDENTITY[op]
    width = max(len(lhs), len(rhs))
    a = lhs + [identity] * (width - len(lhs))
    b = rhs + [identity] * (width - len(rhs))
    out = []
    for x, y in zip(a, b):
        if op == "+":
            out.append(x + y)
        elif op == "-":
            out.append(x - y)
        elif op == "*":
            out.append(x * y)
        else:
            if y == 0:
                raise DivisionByZero("division by zero")
            if op == "/":
                out.append(x // y)  # round toward negative infinity
            else:
                out.append(-((-x) // y))  # round toward positive infinity
    return out
