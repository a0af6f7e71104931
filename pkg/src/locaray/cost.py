"""Incremental coverage index and the annealing cost function.

The search cost of an array is ``weight * U + C`` where U counts t-way
interactions covered by no row and C counts interactions that share their
(non-empty) covering row set with another interaction.  The cost is zero,
for any positive weight, exactly when the array is a locating array.

The index keeps, per interaction, its covering row set as a bit mask, plus
a grouping of equal non-empty masks so both counters can be maintained in
O(1) per touched interaction.  A single entry change (row i, factor j) can
only affect interactions containing factor j whose other pairs match row i,
so a move touches O(C(k-1, t-1)) interactions rather than all of I_t.
"""

import os
from dataclasses import dataclass
from itertools import combinations
from random import Random

from .model import Interaction, TestArray, enumerate_interactions, interaction_count

DEFAULT_MEM_BUDGET_MB = 512
MEM_BUDGET_ENV = "LOCARAY_MEM_BUDGET_MB"
# rough per-interaction footprint of the index structures (mask + group slot
# + sample-set slot), used only for the fail-fast capacity check
_BYTES_PER_INTERACTION = 150


class CapacityError(Exception):
    """The interaction catalog would exceed the configured memory budget."""

    def __init__(self, n_interactions: int, budget_mb: int):
        self.n_interactions = n_interactions
        self.budget_mb = budget_mb
        super().__init__(
            f"{n_interactions} interactions exceed the {budget_mb} MiB index budget "
            f"(override with {MEM_BUDGET_ENV})"
        )


class _SampleSet:
    """Set of ints supporting O(1) add/discard and uniform random pick."""

    __slots__ = ("_items", "_pos")

    def __init__(self):
        self._items: list[int] = []
        self._pos: dict[int, int] = {}

    def add(self, x: int) -> None:
        if x not in self._pos:
            self._pos[x] = len(self._items)
            self._items.append(x)

    def discard(self, x: int) -> None:
        i = self._pos.pop(x, None)
        if i is None:
            return
        last = self._items.pop()
        if i < len(self._items):
            self._items[i] = last
            self._pos[last] = i

    def pick(self, rng: Random) -> int:
        return self._items[rng.randrange(len(self._items))]

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, x: int) -> bool:
        return x in self._pos


@dataclass(frozen=True)
class Move:
    """A candidate array change, recorded with enough state to undo it.

    ``assignments`` lists (row, factor, old_value, new_value) in application
    order.  ``kind`` is "entry" for a single-entry change or "row" for a row
    overwritten with an interaction (only the interaction's factors change).
    """

    kind: str
    assignments: tuple[tuple[int, int, int, int], ...]
    row: int
    interaction: Interaction | None = None


def entry_move(array: TestArray, i: int, j: int, value: int, interaction: Interaction | None = None) -> Move:
    old = array.rows[i][j]
    if value == old:
        raise ValueError("entry move must change the value")
    return Move(kind="entry", assignments=((i, j, old, value),), row=i, interaction=interaction)


def overwrite_move(array: TestArray, i: int, interaction: Interaction) -> Move:
    assignments = tuple(
        (i, j, array.rows[i][j], v) for j, v in interaction.pairs if array.rows[i][j] != v
    )
    return Move(kind="row", assignments=assignments, row=i, interaction=interaction)


class CoverageIndex:
    """Covering row sets of every strength-t interaction of one array.

    Bound to a single search run; mutated in lock step with its array via
    ``apply_move``/``undo_move``.  ``uncovered_count`` and
    ``collision_count`` are the two cost components.
    """

    def __init__(self, array: TestArray, t: int, memory_budget_mb: int | None = None):
        model = array.model
        if not 1 <= t <= model.k:
            raise ValueError(f"strength {t} out of range for a {model.k}-factor model")
        n = interaction_count(model, t)
        budget = memory_budget_mb
        if budget is None:
            budget = int(os.environ.get(MEM_BUDGET_ENV, DEFAULT_MEM_BUDGET_MB))
        if n * _BYTES_PER_INTERACTION > budget * (1 << 20):
            raise CapacityError(n, budget)

        self.model = model
        self.strength = t
        self.m = array.m
        self.catalog = enumerate_interactions(model, t)
        self.rowsets: list[int] = [0] * n
        self.uncovered_count = 0
        self.collision_count = 0
        self.uncovered_ids = _SampleSet()
        self.colliding_ids = _SampleSet()
        self._groups: dict[int, set[int]] = {}
        self._others = [
            tuple(j2 for j2 in range(model.k) if j2 != j) for j in range(model.k)
        ]
        # fast index arithmetic for the hot t=2 path: the id of the pair
        # {(j1,v1),(j2,v2)} with j1<j2 is pair_base[j1][j2] + v1*v[j2] + v2
        self._pair_base: list[list[int]] | None = None
        if t == 2:
            base = [[0] * model.k for _ in range(model.k)]
            for pos, (j1, j2) in enumerate(self.catalog.combos):
                base[j1][j2] = self.catalog.offsets[pos]
            self._pair_base = base

        self._build(array)

    # --- construction --------------------------------------------------

    def _build(self, array: TestArray) -> None:
        rowsets = self.rowsets
        catalog = self.catalog
        for i, row in enumerate(array.rows):
            bit = 1 << i
            for pos, combo in enumerate(catalog.combos):
                idx = catalog.offsets[pos]
                for d, j in enumerate(combo):
                    idx += row[j] * catalog.strides[pos][d]
                rowsets[idx] |= bit
        groups = self._groups
        for tid, rs in enumerate(rowsets):
            if rs == 0:
                self.uncovered_count += 1
                self.uncovered_ids.add(tid)
                continue
            members = groups.get(rs)
            if members is None:
                groups[rs] = {tid}
            else:
                if len(members) == 1:
                    self.collision_count += 2
                    self.colliding_ids.add(next(iter(members)))
                else:
                    self.collision_count += 1
                members.add(tid)
                self.colliding_ids.add(tid)

    # --- incremental maintenance ----------------------------------------

    def _retarget(self, tid: int, new_rs: int) -> None:
        # group-size transitions drive the counters: leaving a group of 2
        # clears collision status for both members, joining a group of 1
        # sets it for both; sizes >= 3 move a single member's status.
        old_rs = self.rowsets[tid]
        groups = self._groups
        if old_rs == 0:
            self.uncovered_count -= 1
            self.uncovered_ids.discard(tid)
        else:
            members = groups[old_rs]
            members.discard(tid)
            left = len(members)
            if left == 0:
                del groups[old_rs]
            elif left == 1:
                self.collision_count -= 2
                self.colliding_ids.discard(tid)
                self.colliding_ids.discard(next(iter(members)))
            else:
                self.collision_count -= 1
                self.colliding_ids.discard(tid)
        if new_rs == 0:
            self.uncovered_count += 1
            self.uncovered_ids.add(tid)
        else:
            members = groups.get(new_rs)
            if members is None:
                groups[new_rs] = {tid}
            else:
                if len(members) == 1:
                    self.collision_count += 2
                    self.colliding_ids.add(next(iter(members)))
                else:
                    self.collision_count += 1
                members.add(tid)
                self.colliding_ids.add(tid)
        self.rowsets[tid] = new_rs

    def _entry_changed(self, row, i: int, j: int, old_v: int, new_v: int) -> None:
        """Update after entry (i, j) changed old_v -> new_v; ``row`` already holds new_v."""
        bit = 1 << i
        rowsets = self.rowsets
        if self._pair_base is not None:
            base = self._pair_base
            vals = self.model.values
            vj = vals[j]
            for j2 in self._others[j]:
                if j2 < j:
                    b = base[j2][j] + row[j2] * vj
                    t_old = b + old_v
                    t_new = b + new_v
                else:
                    b = base[j][j2]
                    v2 = vals[j2]
                    t_old = b + old_v * v2 + row[j2]
                    t_new = b + new_v * v2 + row[j2]
                self._retarget(t_old, rowsets[t_old] & ~bit)
                self._retarget(t_new, rowsets[t_new] | bit)
            return
        catalog = self.catalog
        t = self.strength
        for sub in combinations(self._others[j], t - 1):
            combo = tuple(sorted(sub + (j,)))
            pos = catalog._combo_pos[combo]
            stride = catalog.strides[pos]
            base = catalog.offsets[pos]
            t_old = base
            t_new = base
            for d, jj in enumerate(combo):
                if jj == j:
                    t_old += old_v * stride[d]
                    t_new += new_v * stride[d]
                else:
                    t_old += row[jj] * stride[d]
                    t_new += row[jj] * stride[d]
            self._retarget(t_old, rowsets[t_old] & ~bit)
            self._retarget(t_new, rowsets[t_new] | bit)

    # --- queries ---------------------------------------------------------

    def cost(self, weight: float) -> float:
        return weight * self.uncovered_count + self.collision_count

    def is_locating(self) -> bool:
        return self.uncovered_count == 0 and self.collision_count == 0

    def rowset_bits(self, tid: int) -> int:
        return self.rowsets[tid]

    def rho_set(self, tid: int) -> frozenset[int]:
        """Covering rows of interaction ``tid`` as 1-based indices."""
        rs = self.rowsets[tid]
        return frozenset(i + 1 for i in range(self.m) if (rs >> i) & 1)

    def snapshot(self):
        """Comparable state for consistency checks in tests."""
        return (tuple(self.rowsets), self.uncovered_count, self.collision_count)


def build_index(array: TestArray, t: int, memory_budget_mb: int | None = None) -> CoverageIndex:
    """Build the coverage index of ``array`` at strength ``t``.

    Raises CapacityError when |I_t| would blow the memory budget (default
    512 MiB, overridable via the LOCARAY_MEM_BUDGET_MB environment variable
    or the ``memory_budget_mb`` argument).
    """
    return CoverageIndex(array, t, memory_budget_mb)


def uncovered(index: CoverageIndex) -> int:
    """Number of interactions covered by no row (zero iff the array is covering)."""
    return index.uncovered_count


def collisions(index: CoverageIndex) -> int:
    """Number of interactions sharing a non-empty covering row set with another."""
    return index.collision_count


def cost(index: CoverageIndex, weight: float) -> float:
    """weight * uncovered + collisions; zero iff locating, for weight > 0."""
    if weight < 0:
        raise ValueError("weight must be non-negative")
    return index.cost(weight)


def apply_move(index: CoverageIndex, array: TestArray, move: Move, weight: float = 1.0) -> float:
    """Apply ``move`` to array and index; returns the cost delta at ``weight``."""
    before = index.cost(weight)
    rows = array.rows
    for i, j, old, new in move.assignments:
        row = rows[i]
        row[j] = new
        index._entry_changed(row, i, j, old, new)
    return index.cost(weight) - before


def undo_move(index: CoverageIndex, array: TestArray, move: Move) -> None:
    """Exactly revert a previously applied move."""
    rows = array.rows
    for i, j, old, new in reversed(move.assignments):
        row = rows[i]
        row[j] = old
        index._entry_changed(row, i, j, new, old)
