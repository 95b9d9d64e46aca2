import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dicelang import ScriptedSource
from dicelang.dice import (DROPPED, FILTERED, KEPT, DiceSpec, FaceSet,
                           count_active, explode, filter_pool, keep_drop,
                           reroll, roll_pool, unique)
from dicelang.errors import (PoolTooLarge, ScriptExhausted,
                             SymbolicOrderingError)
from dicelang.nodes import Condition

D6 = FaceSet(sides=6)


def pool_of(*values, faces=D6):
    if faces.values is None:
        indices = [v - 1 for v in values]
    else:
        indices = [faces.values.index(v) for v in values]
    return roll_pool(DiceSpec(len(values), faces), ScriptedSource(indices))


# --- rolling ----------------------------------------------------------------

def test_roll_two_d6():
    pool = pool_of(2, 6)
    assert pool.active_values() == [2, 6]
    assert sum(pool.active_values()) == 8
    assert [r.history for r in pool.records] == [[2], [6]]


def test_zero_dice_pool_is_empty():
    pool = roll_pool(DiceSpec(0, D6), ScriptedSource([]))
    assert pool.records == []
    assert count_active(pool) == 0


def test_arbitrary_faces_drawn_by_index():
    faces = FaceSet(values=(1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100))
    pool = roll_pool(DiceSpec(1, faces), ScriptedSource([2]))
    assert pool.active_values() == [3]


def test_duplicate_faces_equiprobable_by_index():
    fate = FaceSet(values=("-", "-", "0", "0", "+", "+"))
    pool = roll_pool(DiceSpec(3, fate), ScriptedSource([0, 3, 5]))
    assert pool.active_values() == ["-", "0", "+"]


def test_pool_size_guard():
    with pytest.raises(PoolTooLarge):
        roll_pool(DiceSpec(101, D6), ScriptedSource([]), max_pool=100)


def test_scripted_source_exhaustion():
    with pytest.raises(ScriptExhausted):
        roll_pool(DiceSpec(3, D6), ScriptedSource([0]))


# --- keep/drop ---------------------------------------------------------------

def test_keep_highest():
    pool = pool_of(3, 6)
    keep_drop(pool, "keep", "high", 1)
    assert pool.active_values() == [6]


def test_keep_lowest():
    pool = pool_of(3, 6)
    keep_drop(pool, "keep", "low", 1)
    assert pool.active_values() == [3]


def test_drop_high_and_low():
    assert keep_drop(pool_of(3, 6), "drop", "high", 1).active_values() == [3]
    assert keep_drop(pool_of(3, 6), "drop", "low", 1).active_values() == [6]


def test_keep_more_than_pool_is_no_effect():
    pool = pool_of(2, 3)
    keep_drop(pool, "keep", "high", 3)
    assert pool.active_values() == [2, 3]
    assert sum(pool.active_values()) == 5


def test_drop_more_than_pool_drops_everything():
    pool = pool_of(2, 3)
    keep_drop(pool, "drop", "high", 3)
    assert pool.active_values() == []


def test_tie_break_keeps_earliest_rolled():
    pool = pool_of(5, 5, 5)
    keep_drop(pool, "keep", "high", 1)
    statuses = [r.status for r in pool.records]
    assert statuses == [KEPT, DROPPED, DROPPED]


def test_chained_middle_selection():
    pool = pool_of(3, 6, 4)
    keep_drop(pool, "drop", "low", 1)
    keep_drop(pool, "drop", "high", 1)
    assert pool.active_values() == [4]


def test_keep_drop_symbolic_rejected():
    coin = FaceSet(values=("HEADS", "TAILS"))
    pool = roll_pool(DiceSpec(2, coin), ScriptedSource([0, 1]))
    with pytest.raises(SymbolicOrderingError):
        keep_drop(pool, "keep", "high", 1)


# --- filter -------------------------------------------------------------------

def test_filter_keeps_matching():
    pool = pool_of(4, 1, 2, 5)
    filter_pool(pool, Condition("<", 3))
    assert pool.active_values() == [1, 2]
    assert [r.status for r in pool.records] == [
        FILTERED, KEPT, KEPT, FILTERED]


def test_filter_not_equal():
    pool = pool_of(4, 1, 2, 5)
    filter_pool(pool, Condition("!=", 2))
    assert pool.active_values() == [4, 1, 5]


def test_filter_empty_pool():
    pool = roll_pool(DiceSpec(0, D6), ScriptedSource([]))
    assert filter_pool(pool, Condition("<", 3)).active_values() == []


def test_filter_symbolic_equality():
    coin = FaceSet(values=("HEADS", "TAILS"))
    pool = roll_pool(DiceSpec(3, coin), ScriptedSource([0, 1, 0]))
    filter_pool(pool, Condition("==", "HEADS"))
    assert pool.active_values() == ["HEADS", "HEADS"]


def test_filter_symbolic_ordering_rejected():
    coin = FaceSet(values=("HEADS", "TAILS"))
    pool = roll_pool(DiceSpec(1, coin), ScriptedSource([0]))
    with pytest.raises(SymbolicOrderingError):
        filter_pool(pool, Condition("<", "HEADS"))


# --- reroll --------------------------------------------------------------------

def test_reroll_not_triggered():
    pool = pool_of(2)
    reroll(pool, Condition("<", 2), False, ScriptedSource([]))
    assert pool.active_values() == [2]
    assert pool.records[0].history == [2]


def test_reroll_once_keeps_new_value_even_if_it_triggers():
    pool = pool_of(1)
    reroll(pool, Condition("<", 2), False, ScriptedSource([0]))
    assert pool.records[0].history == [1, 1]
    assert pool.active_values() == [1]


def test_reroll_repeated_until_condition_fails():
    pool = pool_of(1)
    reroll(pool, Condition("<", 2), True, ScriptedSource([0, 0, 3]))
    assert pool.records[0].history == [1, 1, 1, 4]
    assert pool.active_values() == [4]


def test_reroll_repeated_hits_limit_and_flags():
    pool = pool_of(1)
    reroll(pool, Condition("<", 2), True, ScriptedSource([0] * 5), limit=5)
    record = pool.records[0]
    assert record.limit_hit
    assert len(record.history) == 6
    assert pool.warnings


# --- explode --------------------------------------------------------------------

def test_explode_plain_accumulates():
    pool = pool_of(6)
    explode(pool, "plain", ScriptedSource([5, 3]))
    assert pool.records[0].history == [6, 6, 4]
    assert pool.active_values() == [16]


def test_explode_no_max_no_chain():
    pool = pool_of(3)
    explode(pool, "plain", ScriptedSource([]))
    assert pool.active_values() == [3]


def test_explode_once():
    pool = pool_of(6)
    explode(pool, "once", ScriptedSource([5]))
    assert pool.records[0].history == [6, 6]
    assert pool.active_values() == [12]


def test_explode_penetrating():
    pool = pool_of(6)
    explode(pool, "penetrating", ScriptedSource([5, 5, 1]))
    assert pool.records[0].history == [6, 6, 6, 2]
    assert pool.active_values() == [6 + (6 - 0) + (6 - 1) + 2]


def test_explode_penetrating_stops_when_addition_reaches_zero():
    two_sided = FaceSet(sides=2)
    pool = roll_pool(DiceSpec(1, two_sided), ScriptedSource([1]))
    # Potential additions: 2-0=2, then 2-1=1, then 2-2=0 stops the chain.
    explode(pool, "penetrating", ScriptedSource([1, 1]))
    assert pool.records[0].history == [2, 2, 2]
    assert pool.active_values() == [2 + 2 + 1]
    assert not pool.records[0].limit_hit


def test_explode_plain_limit_flag():
    pool = pool_of(6)
    explode(pool, "plain", ScriptedSource([5, 5, 5]), limit=3)
    assert pool.records[0].limit_hit
    assert pool.active_values() == [24]


def test_explode_arbitrary_faces_triggers_on_max():
    faces = FaceSet(values=(1, 3, 5))
    pool = roll_pool(DiceSpec(1, faces), ScriptedSource([2]))
    explode(pool, "plain", ScriptedSource([0]))
    assert pool.active_values() == [6]


def test_explode_symbolic_rejected():
    coin = FaceSet(values=("HEADS", "TAILS"))
    pool = roll_pool(DiceSpec(1, coin), ScriptedSource([0]))
    with pytest.raises(SymbolicOrderingError):
        explode(pool, "plain", ScriptedSource([]))


# --- unique / count ----------------------------------------------------------------

def test_unique_all_distinct():
    pool = pool_of(4, 1, 2, 5)
    unique(pool)
    assert pool.active_values() == [4, 1, 2, 5]
    assert count_active(pool) == 4


def test_unique_collapses_duplicates_keeping_first():
    pool = pool_of(3, 3, 3)
    unique(pool)
    assert [r.status for r in pool.records] == [KEPT, FILTERED, FILTERED]


def test_unique_empty():
    pool = roll_pool(DiceSpec(0, D6), ScriptedSource([]))
    assert unique(pool).active_values() == []


def test_count_after_filter():
    pool = pool_of(4, 1, 2, 5)
    filter_pool(pool, Condition("!=", 2))
    assert count_active(pool) == 3


# --- properties ---------------------------------------------------------------------

values_strategy = st.lists(st.integers(min_value=1, max_value=6),
                           min_size=0, max_size=12)


@given(values_strategy, st.integers(min_value=1, max_value=12),
       st.sampled_from(["keep", "drop"]), st.sampled_from(["high", "low"]))
@settings(max_examples=200, deadline=None)
def test_keep_drop_conserves_records_and_histories(values, z, which, end):
    pool = pool_of(*values)
    before = [list(r.history) for r in pool.records]
    keep_drop(pool, which, end, z)
    assert len(pool.records) == len(values)
    assert [list(r.history) for r in pool.records] == before


@given(st.lists(st.integers(min_value=1, max_value=100), min_size=1,
                max_size=10, unique=True), st.data())
@settings(max_examples=200, deadline=None)
def test_keep_high_equals_drop_low_complement(values, data):
    z = data.draw(st.integers(min_value=1, max_value=len(values)))
    faces = FaceSet(sides=100)
    a = pool_of(*values, faces=faces)
    b = pool_of(*values, faces=faces)
    keep_drop(a, "keep", "high", z)
    keep_drop(b, "drop", "low", len(values) - z)
    assert a.active_values() == b.active_values()


@given(values_strategy, st.integers(min_value=1, max_value=6),
       st.sampled_from(["==", "!=", "<", ">", "<=", ">="]))
@settings(max_examples=200, deadline=None)
def test_filter_idempotent(values, threshold, comparator):
    cond = Condition(comparator, threshold)
    pool = pool_of(*values)
    filter_pool(pool, cond)
    once = [r.status for r in pool.records]
    filter_pool(pool, cond)
    assert [r.status for r in pool.records] == once


@given(values_strategy)
@settings(max_examples=200, deadline=None)
def test_unique_idempotent(values):
    pool = pool_of(*values)
    unique(pool)
    once = [r.status for r in pool.records]
    unique(pool)
    assert [r.status for r in pool.records] == once


@given(values_strategy)
@settings(max_examples=100, deadline=None)
def test_all_roll_values_are_faces(values):
    pool = pool_of(*values)
    for record in pool.records:
        for shown in record.history:
            assert 1 <= shown <= 6
