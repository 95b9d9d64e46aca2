"""Brute-force verification of the evaluator.

The enumerator drives the *real* evaluator with a probing randomness source:
whenever the evaluator asks for a draw beyond the scripted prefix, the walk
branches over every possible face index.  It therefore shares no evaluation
logic with the code under test beyond the evaluator itself.  Reroll and
explosion chains are truncated at the same limit the evaluator uses, so
unbounded expressions have matching finite supports.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from scipy import stats

from .errors import StateSpaceTooLarge
from .evaluator import Limits, MacroTable, builtin_macro_table, evaluate
from .nodes import RollExpression
from .parser import parse
from .rng import SeededSource


class _NeedChoice(Exception):
    def __init__(self, n: int):
        super().__init__(n)
        self.n = n


class _ProbingSource:
    """Replays a prefix of indices, then signals that a branch is needed."""

    def __init__(self, prefix: list[int]):
        self.prefix = prefix
        self.pos = 0

    def next_index(self, n: int) -> int:
        if self.pos < len(self.prefix):
            value = self.prefix[self.pos]
            self.pos += 1
            return value
        raise _NeedChoice(n)


@dataclass
class OutcomeDistribution:
    probabilities: dict[tuple, Fraction]

    @property
    def support_size(self) -> int:
        return len(self.probabilities)

    def total(self) -> Fraction:
        return sum(self.probabilities.values(), Fraction(0))

    def probability(self, outcome: tuple) -> Fraction:
        return self.probabilities.get(outcome, Fraction(0))


def _as_ast(expr: RollExpression | str) -> RollExpression:
    return parse(expr) if isinstance(expr, str) else expr


def enumerate_outcomes(expr: RollExpression | str,
                       limits: Limits | None = None) -> OutcomeDistribution:
    """Exhaustively enumerate every outcome sequence of a small expression."""
    ast = _as_ast(expr)
    limits = limits if limits is not None else Limits()
    probabilities: dict[tuple, Fraction] = {}
    leaves = 0

    stack: list[tuple[list[int], Fraction]] = [([], Fraction(1))]
    while stack:
        prefix, p = stack.pop()
        source = _ProbingSource(prefix)
        try:
            result = evaluate(ast, macros=builtin_macro_table(),
                              rng=source, limits=limits)
        except _NeedChoice as need:
            if leaves + len(stack) + need.n > limits.max_enumeration:
                raise StateSpaceTooLarge(
                    f"enumeration exceeds {limits.max_enumeration} outcomes"
                ) from None
            share = p / need.n
            for i in range(need.n):
                stack.append((prefix + [i], share))
            continue
        leaves += 1
        if leaves > limits.max_enumeration:
            raise StateSpaceTooLarge(
                f"enumeration exceeds {limits.max_enumeration} outcomes")
        key = tuple(result.groups)
        probabilities[key] = probabilities.get(key, Fraction(0)) + p

    return OutcomeDistribution(probabilities)


@dataclass
class CompareReport:
    expression: str
    samples: int
    support_size: int
    chi_square: float
    p_value: float
    degrees_of_freedom: int
    passed: bool

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.expression!r}: chi2={self.chi_square:.3f} "
                f"p={self.p_value:.6g} dof={self.degrees_of_freedom} "
                f"support={self.support_size} samples={self.samples}")


def compare(expr: RollExpression | str, samples: int = 100_000,
            seed: int = 0, limits: Limits | None = None,
            significance: float = 1e-3) -> CompareReport:
    """Chi-square seeded evaluator samples against the exact distribution."""
    text = expr if isinstance(expr, str) else "<ast>"
    ast = _as_ast(expr)
    limits = limits if limits is not None else Limits()
    distribution = enumerate_outcomes(ast, limits)

    rng = SeededSource(seed)
    table = builtin_macro_table()
    counts: Counter[tuple] = Counter()
    for _ in range(samples):
        result = evaluate(ast, macros=table, rng=rng, limits=limits)
        counts[tuple(result.groups)] += 1

    # Any sampled outcome outside the exact support is an immediate failure.
    stray = set(counts) - set(distribution.probabilities)
    if stray:
        return CompareReport(text, samples, distribution.support_size,
                             float("inf"), 0.0, 0, False)

    # Merge low-expectation buckets so the chi-square approximation holds.
    items = sorted(distribution.probabilities.items(),
                   key=lambda kv: (-kv[1], repr(kv[0])))
    observed: list[int] = []
    expected: list[float] = []
    tail_obs = 0
    tail_exp = 0.0
    for key, prob in items:
        e = float(prob) * samples
        if e >= 5.0:
            observed.append(counts.get(key, 0))
            expected.append(e)
        else:
            tail_obs += counts.get(key, 0)
            tail_exp += e
    if tail_exp > 0:
        if tail_exp >= 5.0 or not expected:
            observed.append(tail_obs)
            expected.append(tail_exp)
        else:
            observed[-1] += tail_obs
            expected[-1] += tail_exp

    if len(expected) < 2:
        return CompareReport(text, samples, distribution.support_size,
                             0.0, 1.0, 0, True)

    scale = samples / sum(expected)
    expected = [e * scale for e in expected]
    chi2, p_value = stats.chisquare(observed, expected)
    dof = len(expected) - 1
    return CompareReport(text, samples, distribution.support_size,
                         float(chi2), float(p_value), dof,
                         bool(p_value >= significance))
