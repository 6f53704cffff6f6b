"""Orbit calculus for automorphisms pinned on a finite support.

Whether two tuples lie in the same orbit of the support-fixing
automorphism group is decided by a finite criterion: the map that fixes the
support pointwise and sends one tuple to the other must be a well-defined
partial isomorphism.  Homogeneity of the ambient limit makes this exact, so
no automorphism is ever materialized.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .spaces import FinSpace, PointId, SpaceError

Support = frozenset[PointId]


def _paired(
    stage: FinSpace,
    support: Iterable[PointId],
    t1: Sequence[PointId],
    t2: Sequence[PointId],
) -> list[tuple[PointId, PointId]] | None:
    """Constraint pairs of the candidate map, or None if it is not a
    well-defined injection."""
    if len(t1) != len(t2):
        raise SpaceError("tuples must have equal length")
    for p in list(support) + list(t1) + list(t2):
        if p not in stage:
            raise SpaceError(f"point {p} not in stage")
    assignment: dict[PointId, PointId] = {b: b for b in support}
    for x, y in zip(t1, t2):
        if assignment.get(x, y) != y:
            return None
        assignment[x] = y
    if len(set(assignment.values())) != len(assignment):
        return None
    return sorted(assignment.items())


def same_fix_orbit(
    stage: FinSpace,
    support: Iterable[PointId],
    t1: Sequence[PointId],
    t2: Sequence[PointId],
) -> bool:
    """True iff some automorphism fixing ``support`` pointwise carries t1 to
    t2, decided by checking that support-fixing + t1 -> t2 preserves
    distances and order."""
    pairs = _paired(stage, support, t1, t2)
    if pairs is None:
        return False
    for (x1, y1), (x2, y2) in combinations(pairs, 2):
        if stage.d(x1, x2) != stage.d(y1, y2):
            return False
        if stage.precedes(x1, x2) != stage.precedes(y1, y2):
            return False
    return True


def orbit_traces(
    stage: FinSpace,
    support: Iterable[PointId],
    t: Sequence[PointId],
) -> set[tuple[PointId, ...]]:
    """All tuples of the stage in the same support-fixing orbit as ``t``.

    Backtracks position by position so that stages of a few dozen points
    stay tractable; always contains ``t`` itself.
    """
    base = list(support)
    for p in list(base) + list(t):
        if p not in stage:
            raise SpaceError(f"point {p} not in stage")
    found: set[tuple[PointId, ...]] = set()
    prefix: list[PointId] = []

    def consistent(candidate: PointId, depth: int) -> bool:
        x = t[depth]
        # against the support (fixed pointwise) and earlier tuple entries
        for b in base:
            if stage.d(x, b) != stage.d(candidate, b):
                return False
            if x != b and (stage.precedes(x, b) != stage.precedes(candidate, b)):
                return False
            if x == b and candidate != b:
                return False
        for j, w in enumerate(prefix):
            if stage.d(x, t[j]) != stage.d(candidate, w):
                return False
            if t[j] == x:
                if w != candidate:
                    return False
            elif w == candidate:
                return False
            elif stage.precedes(t[j], x) != stage.precedes(w, candidate):
                return False
        return True

    def descend(depth: int) -> None:
        if depth == len(t):
            found.add(tuple(prefix))
            return
        for candidate in stage.points:
            if consistent(candidate, depth):
                prefix.append(candidate)
                descend(depth + 1)
                prefix.pop()

    descend(0)
    return found
