"""Dice pools and the operations applied to them.

A Pool is created by rolling an ``xdy`` term and then mutated in place by
keep/drop, filter, reroll, explode and unique.  Operations never delete
records or rewrite histories; they only change each record's status, so the
full audit trail survives every transformation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import nodes
from .errors import (PoolTooLarge, SymbolicOrderingError, ValueTypeError)
from .nodes import Condition, Faces, expand_special
from .rng import RandomSource

KEPT = "kept"
DROPPED = "dropped"
FILTERED = "filtered_out"

DEFAULT_CHAIN_LIMIT = 20
DEFAULT_MAX_POOL = 10_000_000

FaceValue = int | str


class FaceSet:
    """Resolved face list.

    Standard y-sided dice keep faces implicit (1..y) so large side counts
    never materialize a list; arbitrary face lists store their values.
    """

    __slots__ = ("values", "sides")

    def __init__(self, values: tuple[FaceValue, ...] | None = None,
                 sides: int | None = None):
        if (values is None) == (sides is None):
            raise ValueError("FaceSet needs exactly one of values/sides")
        self.values = values
        self.sides = sides

    def __len__(self) -> int:
        return self.sides if self.values is None else len(self.values)

    def __getitem__(self, i: int) -> FaceValue:
        if self.values is None:
            return i + 1
        return self.values[i]

    @property
    def symbolic(self) -> bool:
        return self.values is not None and bool(self.values) and \
            isinstance(self.values[0], str)

    @property
    def max_value(self) -> int:
        if self.values is None:
            return self.sides
        if self.symbolic:
            raise SymbolicOrderingError(
                "symbolic dice have no maximum face")
        return max(self.values)


def resolve_faces(faces: Faces) -> FaceSet:
    """Expand shorthands and produce a concrete FaceSet."""
    faces = expand_special(faces)
    if isinstance(faces, nodes.StandardSides):
        return FaceSet(sides=faces.sides)
    if isinstance(faces, nodes.NumericFaces):
        return FaceSet(values=faces.values)
    if isinstance(faces, nodes.SymbolicFaces):
        return FaceSet(values=faces.symbols)
    raise TypeError(f"cannot resolve faces: {faces!r}")


@dataclass
class RollRecord:
    die_index: int
    history: list[FaceValue]
    status: str = KEPT
    contribution: FaceValue = 0
    limit_hit: bool = False

    @property
    def current(self) -> FaceValue:
        """Latest raw face shown by the die (ignores explosion accumulation)."""
        return self.history[-1]


@dataclass(frozen=True)
class DiceSpec:
    count: int
    faces: FaceSet


@dataclass
class Pool:
    records: list[RollRecord]
    faces: FaceSet
    warnings: list[str] = field(default_factory=list)

    @property
    def is_symbolic(self) -> bool:
        return self.faces.symbolic

    def active(self) -> list[RollRecord]:
        return [r for r in self.records if r.status == KEPT]

    def active_values(self) -> list[FaceValue]:
        return [r.contribution for r in self.active()]


def roll_pool(spec: DiceSpec, rng: RandomSource,
              max_pool: int = DEFAULT_MAX_POOL) -> Pool:
    """Roll ``spec.count`` dice, drawing each face uniformly by index."""
    if spec.count > max_pool:
        raise PoolTooLarge(
            f"pool of {spec.count} dice exceeds the limit of {max_pool}")
    n = len(spec.faces)
    records = []
    for i in range(spec.count):
        value = spec.faces[rng.next_index(n)]
        records.append(RollRecord(i, [value], KEPT, value))
    return Pool(records, spec.faces)


def _matches(cond: Condition, value: FaceValue) -> bool:
    threshold = cond.threshold
    if isinstance(value, str) or isinstance(threshold, str):
        if not (isinstance(value, str) and isinstance(threshold, str)):
            raise ValueTypeError(
                "condition compares a symbol with a number")
        if cond.comparator == "==":
            return value == threshold
        if cond.comparator == "!=":
            return value != threshold
        raise SymbolicOrderingError(
            f"symbols cannot be ordered with {cond.comparator!r}")
    ops = {
        "==": value == threshold,
        "!=": value != threshold,
        "<": value < threshold,
        ">": value > threshold,
        "<=": value <= threshold,
        ">=": value >= threshold,
    }
    return ops[cond.comparator]


def keep_drop(pool: Pool, which: str, end: str, z: int) -> Pool:
    """Keep or drop the z highest/lowest active dice.

    Ties are broken earliest-rolled-first so audit records are reproducible.
    Keep with z >= pool size is a no-op; drop with z >= pool size drops all.
    """
    if pool.is_symbolic:
        raise SymbolicOrderingError(
            "keep/drop needs an ordering and symbolic dice have none")
    active_idx = [i for i, r in enumerate(pool.records) if r.status == KEPT]
    if end == "high":
        ordered = sorted(
            active_idx,
            key=lambda i: (-pool.records[i].contribution, i))
    else:
        ordered = sorted(
            active_idx,
            key=lambda i: (pool.records[i].contribution, i))
    if which == "keep":
        if z >= len(active_idx):
            return pool
        for i in ordered[z:]:
            pool.records[i].status = DROPPED
    else:
        for i in ordered[:z]:
            pool.records[i].status = DROPPED
    return pool


def filter_pool(pool: Pool, cond: Condition) -> Pool:
    """Mark active records that fail the condition as filtered out."""
    for record in pool.records:
        if record.status == KEPT and not _matches(cond, record.contribution):
            record.status = FILTERED
    return pool


def reroll(pool: Pool, cond: Condition, repeated: bool, rng: RandomSource,
           limit: int = DEFAULT_CHAIN_LIMIT) -> Pool:
    """Reroll active dice whose value satisfies the condition.

    ``repeated=False`` rerolls exactly once and the new value stands even if
    it still satisfies the condition; ``repeated=True`` keeps rerolling until
    the condition fails or the chain limit is reached (flagged, not an error).
    """
    n = len(pool.faces)
    for record in pool.records:
        if record.status != KEPT or not _matches(cond, record.current):
            continue
        if not repeated:
            value = pool.faces[rng.next_index(n)]
            record.history.append(value)
            record.contribution = value
            continue
        steps = 0
        value = record.current
        while _matches(cond, value) and steps < limit:
            value = pool.faces[rng.next_index(n)]
            record.history.append(value)
            steps += 1
        record.contribution = value
        if _matches(cond, value):
            record.limit_hit = True
            pool.warnings.append(
                f"die {record.die_index}: reroll chain stopped at the "
                f"limit of {limit}")
    return pool


def explode(pool: Pool, mode: str, rng: RandomSource,
            limit: int = DEFAULT_CHAIN_LIMIT) -> Pool:
    """Accumulate extra rolls on dice showing the maximum face.

    plain: chain while the maximum keeps coming up, capped at ``limit``.
    once: at most one extra roll.
    penetrating: the i-th explosion contributes its roll minus (i-1); the
    chain also stops once the potential addition would reach 0, and a final
    non-maximum roll is added unadjusted.
    """
    if pool.is_symbolic:
        raise SymbolicOrderingError(
            "explosions need a maximum face and symbolic dice have none")
    max_face = pool.faces.max_value
    n = len(pool.faces)
    for record in pool.records:
        if record.status != KEPT or record.current != max_face:
            continue
        if mode == "once":
            value = pool.faces[rng.next_index(n)]
            record.history.append(value)
            record.contribution += value
            continue
        if mode == "plain":
            chains = 0
            while record.current == max_face and chains < limit:
                value = pool.faces[rng.next_index(n)]
                record.history.append(value)
                record.contribution += value
                chains += 1
            if record.current == max_face:
                record.limit_hit = True
                pool.warnings.append(
                    f"die {record.die_index}: explosion chain stopped at "
                    f"the limit of {limit}")
            continue
        # penetrating
        penalty = 0
        chains = 0
        while (record.current == max_face and chains < limit
               and max_face - penalty > 0):
            value = pool.faces[rng.next_index(n)]
            record.history.append(value)
            chains += 1
            if value == max_face:
                record.contribution += value - penalty
                penalty += 1
            else:
                record.contribution += value
        if record.current == max_face and chains >= limit:
            record.limit_hit = True
            pool.warnings.append(
                f"die {record.die_index}: explosion chain stopped at "
                f"the limit of {limit}")
    return pool


def unique(pool: Pool) -> Pool:
    """Filter out repeated values, keeping the first occurrence of each."""
    seen: set[FaceValue] = set()
    for record in pool.records:
        if record.status != KEPT:
            continue
        if record.contribution in seen:
            record.status = FILTERED
        else:
            seen.add(record.contribution)
    return pool


def count_active(pool: Pool) -> int:
    return len(pool.active())
