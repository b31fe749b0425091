"""Cycle structure of the permutations Q_n induced by Q on Z/2^n.

Only odd residues are tabulated: Q preserves parity and Q(2x) = 2Q(x), so
the even side of Q_n is a copy of the odd side of lower levels. Index ``i``
of a table stands for the odd residue ``2i + 1``.

A cycle of Q_m lifts to level m+1 either as one cycle of twice the length
("doubles") or as two cycles of the same length ("splits"). A cycle that
doubles at every level has an *ever-doubling* period and the union of its
2-adic balls is an ergodic set of measure ``length / 2^m``. A cycle of
length ``2^j >= 4`` that doubles twice in a row is already known to double
forever, which turns the infinite condition into a finite test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .qmap import q_mod_array

MAX_LEVEL = 24
MAX_TRACE_LEVEL = 62


@dataclass(frozen=True)
class PermutationTable:
    """Q_n on the odd residues mod 2^n."""

    level: int
    mapping: np.ndarray  # uint32, index (x-1)/2 -> (Q_n(x)-1)/2

    def __len__(self) -> int:
        return len(self.mapping)

    def __call__(self, x: int) -> int:
        """Q_n(x) for an odd residue, or 2^a times the odd part's image for even x."""
        mod = 1 << self.level
        x %= mod
        if x == 0:
            return 0
        a = (x & -x).bit_length() - 1
        if a == 0:
            return 2 * int(self.mapping[x >> 1]) + 1
        sub = self.level - a
        y = x >> a
        image = 2 * int(self.mapping[(y % (1 << sub)) >> 1]) + 1
        return (image << a) % mod

    def residues(self) -> np.ndarray:
        return 2 * np.arange(len(self.mapping), dtype=np.int64) + 1

    def is_bijective(self) -> bool:
        seen = np.zeros(len(self.mapping), dtype=bool)
        seen[self.mapping] = True
        return bool(seen.all())


def build_qn(n: int, max_level: int = MAX_LEVEL) -> PermutationTable:
    if not 1 <= n <= max_level:
        raise ValueError(f"level {n} outside 1..{max_level}")
    odd = np.arange(1, 1 << n, 2, dtype=np.uint64)
    mapping = (q_mod_array(odd, n) >> np.uint64(1)).astype(np.uint32)
    table = PermutationTable(n, mapping)
    if not table.is_bijective():
        raise AssertionError(f"Q_{n} is not a permutation")
    return table


def project_table(table: PermutationTable, m: int) -> PermutationTable:
    """Q_m read off a higher-level table (Q_m(x) = Q_n(x) mod 2^m)."""
    if not 1 <= m <= table.level:
        raise ValueError(f"cannot project level {table.level} to {m}")
    half = 1 << (m - 1)
    return PermutationTable(m, (table.mapping[:half] & np.uint32(half - 1)))


def cycle_labels(mapping: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Label every index by the smallest index on its cycle; also return
    each index's cycle length.

    Pointer doubling: after t rounds ``label[i]`` is the minimum over the
    next 2^t elements of the cycle through i.
    """
    size = len(mapping)
    label = np.arange(size, dtype=np.uint32)
    p = mapping.astype(np.uint32, copy=True)
    while True:
        nxt = np.minimum(label, label[p])
        if np.array_equal(nxt, label):
            break
        label = nxt
        p = p[p]
    counts = np.bincount(label, minlength=size)
    return label, counts[label]


def _log2_exact(lengths: np.ndarray, level: int) -> np.ndarray:
    lengths = np.asarray(lengths, dtype=np.int64)
    if np.any(lengths & (lengths - 1)):
        bad = int(lengths[(lengths & (lengths - 1)) != 0][0])
        raise AssertionError(f"Q_{level} has a cycle of length {bad}, not a power of two")
    return np.log2(lengths).astype(np.int8)


@dataclass(frozen=True)
class CycleRecord:
    """A cycle of Q_m on odd residues, listed from its smallest element."""

    level: int
    elements: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.elements)

    @property
    def log_length(self) -> int:
        return self.length.bit_length() - 1

    @property
    def measure(self) -> Fraction:
        """2-adic measure of the union of the balls B(c, 2^-m)."""
        return Fraction(self.length, 1 << self.level)

    def residue_set(self) -> frozenset[int]:
        return frozenset(self.elements)


def _walk(table: PermutationTable, start_index: int) -> tuple[int, ...]:
    out = []
    i = start_index
    while True:
        out.append(2 * i + 1)
        i = int(table.mapping[i])
        if i == start_index:
            return tuple(out)


def cycle_of(table: PermutationTable, x: int) -> CycleRecord:
    """The cycle of Q_n through the odd residue x, rotated to start at its minimum."""
    x %= 1 << table.level
    if x % 2 == 0:
        raise ValueError("only odd residues are tabulated")
    elems = _walk(table, x >> 1)
    i = elems.index(min(elems))
    return CycleRecord(table.level, elems[i:] + elems[:i])


def cycle_decomposition(table: PermutationTable) -> list[CycleRecord]:
    label, length = cycle_labels(table.mapping)
    _log2_exact(length, table.level)
    heads = np.flatnonzero(label == np.arange(len(label)))
    return [CycleRecord(table.level, _walk(table, int(h))) for h in heads]


def permutation_order(table: PermutationTable) -> int:
    """Order of Q_n, i.e. its longest cycle (all lengths are powers of two).

    The even side only repeats odd cycles of lower levels, which are never
    longer, so the odd side decides.
    """
    _, length = cycle_labels(table.mapping)
    _log2_exact(length, table.level)
    return int(length.max())


def lift_classification(cycle: CycleRecord, upper: PermutationTable) -> tuple[str, list[CycleRecord]]:
    """Trace the 2L lifts of a level-m cycle in Q_{m+1}: "doubles" or "splits"."""
    if upper.level != cycle.level + 1:
        raise ValueError("need the table one level up")
    first = cycle_of(upper, cycle.elements[0])
    if first.length == 2 * cycle.length:
        return "doubles", [first]
    other = cycle_of(upper, cycle.elements[0] + (1 << cycle.level))
    if first.length != cycle.length or other.length != cycle.length:
        raise AssertionError("lift is neither a doubling nor a split")
    return "splits", [first, other]


def doublings_needed(log_length: int) -> int:
    """Levels to climb before the two-doublings criterion settles the question.

    The criterion applies from length 4 on; shorter cycles first have to
    double up to length 4.
    """
    return max(2, 4 - log_length)


class QTower:
    """Q_1 .. Q_cap, all projected from a single table of Q_cap.

    Cycle data per level is computed lazily and cached as log2 cycle lengths
    (one byte per odd residue).
    """

    def __init__(self, cap: int = MAX_LEVEL):
        if not 1 <= cap <= MAX_LEVEL:
            raise ValueError(f"level cap must be in 1..{MAX_LEVEL}")
        self.cap = cap
        self.top = build_qn(cap)
        self._labels: dict[int, np.ndarray] = {}
        self._loglen: dict[int, np.ndarray] = {}

    def table(self, m: int) -> PermutationTable:
        return project_table(self.top, m)

    def _cycles(self, m: int) -> None:
        if m not in self._loglen:
            label, length = cycle_labels(self.table(m).mapping)
            self._labels[m] = label
            self._loglen[m] = _log2_exact(length, m)

    def labels(self, m: int) -> np.ndarray:
        self._cycles(m)
        return self._labels[m]

    def log_lengths(self, m: int) -> np.ndarray:
        self._cycles(m)
        return self._loglen[m]

    def drop_labels(self, m: int) -> None:
        self._labels.pop(m, None)

    def cycle_length(self, m: int, x: int) -> int:
        return 1 << int(self.log_lengths(m)[(x % (1 << m)) >> 1])


def traced_cycle_lengths(residues, level: int, limit: int) -> np.ndarray:
    """Cycle lengths of Q_level through each residue, found by walking the
    cycle with :func:`q_mod_array`; no table of the level is built.

    Walks stop after ``limit`` steps; unfinished walks report 0.
    """
    start = np.asarray(residues, dtype=np.uint64) & np.uint64((1 << level) - 1)
    x = start.copy()
    length = np.zeros(len(start), dtype=np.int64)
    for step in range(1, limit + 1):
        x = q_mod_array(x, level)
        done = (x == start) & (length == 0)
        length[done] = step
        if (length > 0).all():
            break
    return length


def is_ever_doubling(cycle: CycleRecord, tower: Optional[QTower] = None,
                     max_level: int = MAX_TRACE_LEVEL) -> Optional[bool]:
    """Decide whether ``cycle`` has an ever-doubling period.

    Levels inside the tower are read from its tables, higher ones are traced
    directly. None means the test would need a level above ``max_level``.
    """
    j = cycle.log_length
    m = cycle.level
    for t in range(1, doublings_needed(j) + 1):
        if m + t > max_level:
            return None
        want = cycle.length << t
        if tower is not None and m + t <= tower.cap:
            got = tower.cycle_length(m + t, cycle.elements[0])
        else:
            got = int(traced_cycle_lengths([cycle.elements[0]], m + t, want)[0])
        if got != want:
            return False
    return True


def is_ever_doubling_direct(cycle: CycleRecord, tower: QTower) -> bool:
    """Check the defining property up to the cap: doubling at every level."""
    for t in range(1, tower.cap - cycle.level + 1):
        if tower.cycle_length(cycle.level + t, cycle.elements[0]) != cycle.length << t:
            return False
    return True


@dataclass(frozen=True)
class ErgodicSetRecord:
    """One odd ergodic set, identified by its cycle at the lowest level where
    a cycle of the same measure exists."""

    base_cycle: CycleRecord

    @property
    def level(self) -> int:
        return self.base_cycle.level

    @property
    def k(self) -> int:
        return self.level - self.base_cycle.log_length

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 1 << self.k)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "m0": self.level,
            "length": self.base_cycle.length,
            "elements": list(self.base_cycle.elements),
            "measure": f"1/2^{self.k}",
        }


@dataclass
class ErgodicCensus:
    max_k: int
    level_cap: int
    records: list[ErgodicSetRecord] = field(default_factory=list)
    complete: bool = False
    highest_level: int = 0

    @property
    def counts(self) -> dict[int, int]:
        out = {k: 0 for k in range(1, self.max_k + 1)}
        for r in self.records:
            out[r.k] += 1
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "max_k": self.max_k,
                "level_cap": self.level_cap,
                "complete": self.complete,
                "highest_level": self.highest_level,
                "counts": {str(k): v for k, v in self.counts.items()},
                "sets": [r.as_dict() for r in self.records],
            },
            indent=1,
        )


def _lengths_at(tower: QTower, level: int, reps: np.ndarray, log_want: np.ndarray) -> np.ndarray:
    """log2 of the Q_level cycle length through each odd residue in ``reps``.

    Read from the tower when possible. Above it the cycles are walked, giving
    up after ``2**log_want`` steps (reported as -1 when the walk is longer).
    """
    out = np.full(len(reps), -1, dtype=np.int64)
    if level <= tower.cap:
        out[:] = tower.log_lengths(level)[reps >> 1]
        return out
    for w in np.unique(log_want):
        sel = log_want == w
        got = traced_cycle_lengths(reps[sel], level, 1 << int(w))
        out[sel] = np.where(got > 0, np.log2(np.maximum(got, 1)).astype(np.int64), -1)
    return out


def _cycle_elements(tower: QTower, level: int, rep: int) -> tuple[int, ...]:
    if level <= tower.cap:
        return cycle_of(tower.table(level), rep).elements
    from .qmap import q_mod
    out = [rep]
    x = q_mod(rep, level)
    while x != rep:
        out.append(x)
        x = q_mod(x, level)
    i = out.index(min(out))
    return tuple(out[i:] + out[:i])


def enumerate_ergodic_sets(max_k: int, level_cap: int = MAX_LEVEL,
                           tower: Optional[QTower] = None) -> ErgodicCensus:
    """All odd ergodic sets of measure 2^-k for k <= max_k.

    Each set is reported once, by the cycle at the level where it is born: a
    cycle produced by a split (not by the doubling of its parent) that then
    passes the two-doublings test.

    The search follows lineages of cycles upward from level 1. A lineage
    that is not ever-doubling splits within four levels, and a split halves
    the measure, so once measures drop below 2^-max_k nothing is left to
    follow and the census is complete. Q_1..Q_level_cap come from tables;
    higher levels are explored by walking individual cycles.
    """
    if level_cap < 1:
        raise ValueError("level cap must be positive")
    if tower is None or tower.cap < level_cap:
        tower = QTower(min(level_cap, MAX_LEVEL))
    census = ErgodicCensus(max_k, tower.cap)
    # per level: representatives (odd residues) and log2 lengths
    born_rep = np.array([1], dtype=np.int64)
    born_j = np.array([0], dtype=np.int64)
    live_rep = np.zeros(0, dtype=np.int64)
    live_j = np.zeros(0, dtype=np.int64)
    m = 1
    while len(born_rep) or len(live_rep):
        if m + 4 > MAX_TRACE_LEVEL:
            census.highest_level = m
            return census
        census.highest_level = m
        k = m - born_j
        keep = k <= max_k
        born_rep, born_j, k = born_rep[keep], born_j[keep], k[keep]
        t = np.maximum(2, 4 - born_j)
        doubling = np.ones(len(born_rep), dtype=bool)
        for tt in np.unique(t):
            sel = t == tt
            got = _lengths_at(tower, m + int(tt), born_rep[sel], born_j[sel] + tt)
            doubling[sel] = got == born_j[sel] + tt
        for rep in born_rep[doubling]:
            census.records.append(ErgodicSetRecord(CycleRecord(m, _cycle_elements(tower, m, int(rep)))))
        # newborn cycles that split again only matter if their halves still count
        follow = ~doubling & (k < max_k)
        live_rep = np.concatenate([live_rep, born_rep[follow]])
        live_j = np.concatenate([live_j, born_j[follow]])

        got = _lengths_at(tower, m + 1, live_rep, live_j + 1)
        doubled = got == live_j + 1
        split = got == live_j
        if not np.all(doubled | split):
            raise AssertionError(f"a cycle of Q_{m} neither doubles nor splits")
        born_rep = np.concatenate([live_rep[split], live_rep[split] + (1 << m)])
        born_j = np.concatenate([live_j[split], live_j[split]])
        live_rep, live_j = live_rep[doubled], live_j[doubled] + 1
        m += 1
    census.complete = True
    census.records.sort(key=lambda r: (r.k, r.level, r.base_cycle.elements))
    return census


def measure_summary(records: Iterable[ErgodicSetRecord]) -> tuple[Fraction, Fraction]:
    """(odd-side measure, whole-domain measure).

    Each odd set of measure 2^-k yields even sets of measure 2^-(k+a) for
    every a >= 1 through Q(2x) = 2Q(x), so the whole domain is twice the odd side.
    """
    odd = sum((r.measure for r in records), Fraction(0))
    return odd, 2 * odd
