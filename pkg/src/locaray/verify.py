"""Definition-literal verifier for covering/locating properties, plus fault localization.

This module is the independent oracle: it recomputes every covering row set
directly from the definition and never touches the incremental machinery in
``locaray.cost``.  An array of strength t is *covering* when every t-way
interaction is covered by at least one row, and *locating* (for at most one
fault) when, in addition, no two distinct t-way interactions share the same
covering row set.
"""

import itertools
from dataclasses import dataclass

from .model import Interaction, TestArray, covers, enumerate_interactions


@dataclass
class VerifyReport:
    """Outcome of checking one array at one strength.

    ``collisions`` holds every unordered pair of distinct interactions with
    identical covering row sets, the pair ordered canonically, together with
    the shared row set.  Pairs whose shared row set is empty count as
    collisions too (they also show up in ``uncovered``).  ``collision_count``
    is always exact even when the pair list was truncated.
    """

    strength: int
    is_covering: bool
    is_locating_exact1: bool
    is_locating_1bar: bool
    uncovered: list[Interaction]
    collisions: list[tuple[Interaction, Interaction, frozenset[int]]]
    collision_count: int
    collisions_truncated: bool = False


def verify(array: TestArray, t: int, max_collision_pairs: int | None = None) -> VerifyReport:
    """Check the covering and locating properties of ``array`` at strength ``t``.

    Row sets are computed per interaction by scanning the rows, then grouped
    by value; every group of size g contributes all C(g, 2) colliding pairs.
    ``max_collision_pairs`` caps only the materialized pair list (callers
    with pathological inputs), never the reported count.
    """
    if not 1 <= t <= array.model.k:
        raise ValueError(f"strength {t} out of range for a {array.model.k}-factor model")
    catalog = enumerate_interactions(array.model, t)

    groups: dict[frozenset[int], list[Interaction]] = {}
    uncovered: list[Interaction] = []
    for interaction in catalog:
        rows = frozenset(
            i
            for i, row in enumerate(array.rows, start=1)
            if covers(row, interaction)
        )
        groups.setdefault(rows, []).append(interaction)
        if not rows:
            uncovered.append(interaction)

    collision_count = sum(
        len(members) * (len(members) - 1) // 2 for members in groups.values()
    )
    collisions: list[tuple[Interaction, Interaction, frozenset[int]]] = []
    truncated = False
    for rows, members in groups.items():
        if len(members) < 2 or truncated:
            continue
        for a, b in itertools.combinations(members, 2):
            if max_collision_pairs is not None and len(collisions) >= max_collision_pairs:
                truncated = True
                break
            collisions.append((a, b, rows))

    is_covering = not uncovered
    is_locating_exact1 = collision_count == 0
    return VerifyReport(
        strength=t,
        is_covering=is_covering,
        is_locating_exact1=is_locating_exact1,
        is_locating_1bar=is_covering and is_locating_exact1,
        uncovered=uncovered,
        collisions=collisions,
        collision_count=collision_count,
        collisions_truncated=truncated,
    )


def locate_fault(array: TestArray, failing, t: int) -> list[Interaction]:
    """Interactions of strength ``t`` whose covering rows equal the failing set.

    ``failing`` is a set of 1-based row indices (the tests that failed).  On
    a locating array the result has at most one element for a non-empty
    failing set; an empty failing set means no fault and yields [].  The
    caller is responsible for having verified the array first.
    """
    failing = frozenset(failing)
    for i in failing:
        if not 1 <= i <= array.m:
            raise ValueError(f"failing row index {i} out of range 1..{array.m}")
    if not failing:
        return []
    hits = []
    for interaction in enumerate_interactions(array.model, t):
        rows = frozenset(
            i for i, row in enumerate(array.rows, start=1) if covers(row, interaction)
        )
        if rows == failing:
            hits.append(interaction)
    return hits
