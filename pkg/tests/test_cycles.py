from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paritylab.cycles import (
    CycleRecord,
    QTower,
    build_qn,
    cycle_decomposition,
    cycle_labels,
    cycle_of,
    doublings_needed,
    enumerate_ergodic_sets,
    is_ever_doubling,
    is_ever_doubling_direct,
    lift_classification,
    measure_summary,
    permutation_order,
    project_table,
    traced_cycle_lengths,
)
from paritylab.qmap import q_mod

BASE_CYCLES = {
    (5, 1, (5, 17)),
    (6, 2, (9, 29, 25, 13)),
    (6, 2, (41, 61, 57, 45)),
    (8, 2, (27, 251, 219, 59)),
    (8, 2, (91, 187, 155, 123)),
}
ERGODIC_COUNTS = [0, 0, 0, 3, 0, 2, 10, 11, 11, 29, 54, 91, 118, 213, 282, 436]


@pytest.fixture(scope="module")
def tower():
    return QTower(18)


def walk(x, n):
    out = [x]
    y = q_mod(x, n)
    while y != x:
        out.append(y)
        y = q_mod(y, n)
    return out


def test_table_agrees_with_scalar_q():
    t = build_qn(8)
    for x in range(256):
        assert t(x) == q_mod(x, 8)


def test_projection():
    top = build_qn(12)
    for m in (1, 5, 9, 12):
        assert np.array_equal(project_table(top, m).mapping, build_qn(m).mapping)


@pytest.mark.parametrize("n", range(1, 17))
def test_cycle_lengths_are_powers_of_two(n):
    _, length = cycle_labels(build_qn(n).mapping)
    assert np.all(length & (length - 1) == 0)


def test_orders():
    orders = [permutation_order(build_qn(n)) for n in range(1, 17)]
    assert orders[:5] == [1, 1, 2, 2, 4]
    assert orders[5:] == [1 << (n - 4) for n in range(6, 17)]


def test_labels_match_walks():
    t = build_qn(10)
    label, length = cycle_labels(t.mapping)
    for i in range(0, len(t), 37):
        cyc = walk(2 * i + 1, 10)
        assert length[i] == len(cyc)
        assert 2 * label[i] + 1 == min(cyc)


def test_decomposition_covers_odd_residues():
    for n in (4, 7, 11):
        cycles = cycle_decomposition(build_qn(n))
        assert sum(c.length for c in cycles) == 1 << (n - 1)
        assert sum((c.measure for c in cycles), Fraction(0)) == Fraction(1, 2)


def test_q6_cycles():
    t = build_qn(6)
    assert cycle_of(t, 29).elements == (9, 29, 25, 13)
    assert cycle_of(t, 45).elements == (41, 61, 57, 45)
    with pytest.raises(ValueError):
        cycle_of(t, 4)


@given(st.integers(min_value=0, max_value=2**14 - 1))
def test_even_residues_repeat_odd_ones(x):
    t = build_qn(14)
    assert t(x) == q_mod(x, 14)


def test_lift_classification():
    c = cycle_of(build_qn(5), 5)
    kind, children = lift_classification(c, build_qn(6))
    assert kind == "splits" or kind == "doubles"
    assert sum(ch.length for ch in children) == 2 * c.length


def test_doublings_needed():
    assert [doublings_needed(j) for j in range(5)] == [4, 3, 2, 2, 2]


def test_traced_lengths(tower):
    reps = np.array([5, 9, 27, 91], dtype=np.uint64)
    got = traced_cycle_lengths(reps, 14, 1 << 14)
    assert list(got) == [tower.cycle_length(14, int(r)) for r in reps]
    assert traced_cycle_lengths(reps, 14, 1)[0] == 0


def test_table1_cycles_are_ever_doubling(tower):
    for m, j, elems in BASE_CYCLES:
        c = CycleRecord(m, elems)
        assert c.log_length == j
        assert is_ever_doubling(c, tower)
        assert is_ever_doubling_direct(c, tower)
        assert is_ever_doubling(c) is True  # traced only


def test_not_ever_doubling(tower):
    c = cycle_of(tower.table(4), 1)
    assert is_ever_doubling(c, tower) is False
    assert not is_ever_doubling_direct(c, tower)
    assert is_ever_doubling(CycleRecord(61, (1,)), max_level=62) is None


def test_criterion_agrees_with_definition(tower):
    """Two doublings decide; checked against doubling all the way to the cap."""
    for m in range(2, 12):
        for c in cycle_decomposition(tower.table(m)):
            if c.level + doublings_needed(c.log_length) + 4 <= tower.cap:
                assert is_ever_doubling(c, tower) == is_ever_doubling_direct(c, tower)


def oracle_ergodic_sets(level, max_k, tower):
    """Residue sets, at a fixed high level, of the cycles that keep doubling.

    Each odd ergodic set of measure 2^-k is a single cycle of length 2^(level-k)
    once the level is past the set's birth, so counting cycles at one level
    needs no deduplication across levels.
    """
    out = {}
    for c in cycle_decomposition(tower.table(level)):
        k = level - c.log_length
        if k <= max_k and is_ever_doubling_direct(c, tower):
            out.setdefault(k, []).append(c.residue_set())
    return out


def lifted(record, level):
    step = 1 << record.level
    return frozenset(e + t * step for e in record.base_cycle.elements
                     for t in range(1 << (level - record.level)))


def test_enumeration_matches_oracle(tower):
    census = enumerate_ergodic_sets(8, 18, tower=tower)
    assert census.complete
    oracle = oracle_ergodic_sets(13, 8, tower)
    assert [len(oracle.get(k, [])) for k in range(1, 9)] == ERGODIC_COUNTS[:8]
    for k in range(1, 9):
        mine = sorted(sorted(lifted(r, 13)) for r in census.records if r.k == k)
        theirs = sorted(sorted(s) for s in oracle.get(k, []))
        assert mine == theirs


def test_base_cycles_of_large_measure():
    census = enumerate_ergodic_sets(6, 18)
    got = {(r.level, r.base_cycle.log_length, r.base_cycle.elements) for r in census.records}
    assert got == BASE_CYCLES


def test_ergodic_counts_to_12():
    census = enumerate_ergodic_sets(12, 18)
    assert census.complete
    assert list(census.counts.values()) == ERGODIC_COUNTS[:12]
    assert '"complete": true' in census.to_json()


def test_measure_summary():
    census = enumerate_ergodic_sets(6, 18)
    odd, full = measure_summary(census.records)
    assert odd == Fraction(3, 16) + Fraction(2, 64)
    assert full == 2 * odd
