"""Growing finite stages of the universal homogeneous ordered rational
metric space.

The builder keeps one mutable stage and a fair schedule of one-point
extension requests.  A request names a subset of already-created points (by
creation index), a distance to each of them drawn from the Calkin-Wilf
enumeration of the positive rationals, and an order gap inside the subset.
Requests are consumed in weight order (weight = subset size + creation
indices + rational indices + gap), so every request over every finite
subset is scheduled after finitely many steps; requests that mention points
not created yet wait in a FIFO side queue.  Growth never renames or
reorders existing points, so successive stages form an increasing chain.

Partial isomorphisms between finite subsets extend through the stage by the
usual alternation: images are looked up among existing points in creation
order and freshly realized when nothing fits, which pins one canonical
automorphism to the schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Optional

from .amalgam import InfeasibleExtensionError, feasibility_violation
from .rationals import calkin_wilf
from .spaces import FinSpace, PointId, SpaceError, validate


class FuelExhaustedError(RuntimeError):
    """apply_auto ran out of back-and-forth steps; retry with more fuel."""


@dataclass(frozen=True)
class PartialIso:
    """Finite distance- and order-preserving bijection between subsets.

    ``dom`` and ``cod`` are aligned tuples; listing order carries no
    meaning.  Preservation is checked against a space via
    :func:`partial_iso_ok`.
    """

    dom: tuple[PointId, ...]
    cod: tuple[PointId, ...]

    def __post_init__(self) -> None:
        if len(self.dom) != len(self.cod):
            raise ValueError("dom and cod must have equal length")
        if len(set(self.dom)) != len(self.dom):
            raise ValueError("duplicate point in dom")
        if len(set(self.cod)) != len(self.cod):
            raise ValueError("duplicate point in cod")

    @property
    def mapping(self) -> dict[PointId, PointId]:
        return dict(zip(self.dom, self.cod))

    def __call__(self, p: PointId) -> PointId:
        return self.mapping[p]

    def __len__(self) -> int:
        return len(self.dom)

    def inverse(self) -> "PartialIso":
        return PartialIso(self.cod, self.dom)

    def extended(self, x: PointId, y: PointId) -> "PartialIso":
        return PartialIso(self.dom + (x,), self.cod + (y,))


def compose(outer: PartialIso, inner: PartialIso) -> PartialIso:
    """outer after inner, defined where the image of inner meets outer."""
    outer_map = outer.mapping
    pairs = [
        (x, outer_map[y]) for x, y in zip(inner.dom, inner.cod) if y in outer_map
    ]
    return PartialIso(tuple(x for x, _ in pairs), tuple(y for _, y in pairs))


def partial_iso_ok(space: FinSpace, iso: PartialIso) -> bool:
    """True iff the map lives inside the space and preserves distances and
    the structural order pairwise."""
    for p in iso.dom + iso.cod:
        if p not in space:
            return False
    pairs = list(zip(iso.dom, iso.cod))
    for (x1, y1), (x2, y2) in combinations(pairs, 2):
        if space.d(x1, x2) != space.d(y1, y2):
            return False
        if space.precedes(x1, x2) != space.precedes(y1, y2):
            return False
    return True


@dataclass(frozen=True)
class ExtensionTask:
    """A scheduled request: creation indices, Calkin-Wilf distance indices
    (aligned with the subset), and the order gap inside the subset."""

    subset: tuple[int, ...]
    rational_indices: tuple[int, ...]
    gap: int


def _ascending_tuples(length: int, total: int) -> Iterator[tuple[int, ...]]:
    """Strictly increasing tuples of naturals with the exact sum, lex order."""

    def rec(prefix: list[int], start: int, left: int, budget: int) -> Iterator[tuple[int, ...]]:
        if left == 0:
            if budget == 0:
                yield tuple(prefix)
            return
        smallest = left * start + left * (left - 1) // 2
        if smallest > budget:
            return
        for v in range(start, budget + 1):
            prefix.append(v)
            yield from rec(prefix, v + 1, left - 1, budget - v)
            prefix.pop()

    yield from rec([], 0, length, total)


def _compositions(length: int, total: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for tail in _compositions(length - 1, total - head):
            yield (head,) + tail


def tasks_of_weight(weight: int) -> list[ExtensionTask]:
    """Every task whose components sum to ``weight``, sorted by subset size,
    then subset, then distance indices, then gap.  Each task has exactly one
    weight, so concatenating the levels enumerates all tasks once."""
    found = []
    for size in range(weight + 1):
        budget = weight - size
        for id_sum in range(budget + 1):
            for subset in _ascending_tuples(size, id_sum):
                for gap in range(min(size, budget - id_sum) + 1):
                    for rvec in _compositions(size, budget - id_sum - gap):
                        found.append(ExtensionTask(subset, rvec, gap))
    found.sort(key=lambda t: (len(t.subset), t.subset, t.rational_indices, t.gap))
    return found


class LimitBuilder:
    """Single-owner mutable stage; operations mutate in place and return
    their results.  Snapshots from :meth:`stage` are immutable values."""

    def __init__(self, seed: FinSpace):
        report = validate(seed)
        if not report.is_valid:
            raise SpaceError(
                "seed space is invalid: " + report.violations[0].describe(seed)
            )
        self._order: list[PointId] = list(seed.points)
        self._pos: dict[PointId, int] = {p: i for i, p in enumerate(self._order)}
        self._names: dict[PointId, str] = dict(seed.names)
        self._created: list[PointId] = list(seed.points)
        self._dist: dict[tuple[PointId, PointId], Fraction] = {}
        for p, q in seed.pairs():
            value = seed.d(p, q)
            self._dist[(p, q)] = value
            self._dist[(q, p)] = value
        self._weight = 0
        self._level: list[ExtensionTask] = []
        self._level_pos = 0
        self._waiting: list[ExtensionTask] = []

    # -- stage queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self._order)

    @property
    def created(self) -> tuple[PointId, ...]:
        return tuple(self._created)

    def d(self, p: PointId, q: PointId) -> Fraction:
        if p == q:
            return Fraction(0)
        return self._dist[(p, q)]

    def position(self, p: PointId) -> int:
        return self._pos[p]

    def stage(self) -> FinSpace:
        """Immutable snapshot of the current stage."""
        entries = {
            (p, q): self._dist[(p, q)] for p, q in combinations(self._order, 2)
        }
        return FinSpace(tuple(self._order), entries, dict(self._names))

    def induced(self, keep) -> FinSpace:
        kept = [p for p in self._order if p in set(keep)]
        entries = {(p, q): self._dist[(p, q)] for p, q in combinations(kept, 2)}
        return FinSpace(tuple(kept), entries, {p: self._names[p] for p in kept})

    def _diameter(self) -> Fraction:
        return max(
            (self._dist[(p, q)] for p, q in combinations(self._order, 2)),
            default=Fraction(0),
        )

    # -- growth -------------------------------------------------------------

    def realize(self, dvec: Mapping[PointId, Fraction], gap: int) -> PointId:
        """Add one point with exact distances to the keyed subset and the
        requested order gap inside it; remaining distances are completed by
        shortest path through the subset (the amalgamation rule).
        """
        sub = [p for p in self._order if p in dvec]
        if len(sub) != len(dvec):
            raise SpaceError("dvec keys must be stage points")
        if not 0 <= gap <= len(sub):
            raise SpaceError(f"gap {gap} outside 0..{len(sub)}")
        base = self.induced(sub)
        refusal = feasibility_violation(base, dvec)
        if refusal is not None:
            raise InfeasibleExtensionError(*refusal)

        outside = [p for p in self._order if p not in dvec]
        filler = Fraction(0)
        if not sub and outside:
            filler = 1 + self._diameter()
        cross: dict[PointId, Fraction] = {}
        for r in outside:
            if sub:
                value = min(self._dist[(r, z)] + dvec[z] for z in sub)
                for z in sub:
                    leg = self._dist[(r, z)]
                    if not abs(leg - dvec[z]) <= value <= leg + dvec[z]:
                        raise SpaceError(
                            f"completed distance to {self._names[r]} escapes its bound"
                        )
            else:
                value = filler
            cross[r] = value

        new = (max(self._created) + 1) if self._created else 0
        index = self._pos[sub[gap]] if gap < len(sub) else len(self._order)
        self._order.insert(index, new)
        self._pos = {p: i for i, p in enumerate(self._order)}
        self._created.append(new)
        name = f"u{new}"
        taken = set(self._names.values())
        while name in taken:
            name = name + "_"
        self._names[new] = name
        for z in sub:
            self._dist[(z, new)] = dvec[z]
            self._dist[(new, z)] = dvec[z]
        for r, value in cross.items():
            self._dist[(r, new)] = value
            self._dist[(new, r)] = value
        return new

    def _task_feasible(self, task: ExtensionTask) -> Optional[tuple[dict, int]]:
        """Decode a task against the current stage; None when its distance
        vector violates a triangle bound (such requests name no extension)."""
        sub = [self._created[i] for i in task.subset]
        dvec = {
            p: calkin_wilf(r) for p, r in zip(sub, task.rational_indices)
        }
        base = self.induced(sub)
        if feasibility_violation(base, dvec) is not None:
            return None
        return dvec, task.gap

    def _next_task(self) -> ExtensionTask:
        for i, task in enumerate(self._waiting):
            if all(ix < len(self._created) for ix in task.subset):
                return self._waiting.pop(i)
        while True:
            while self._level_pos >= len(self._level):
                self._level = tasks_of_weight(self._weight)
                self._weight += 1
                self._level_pos = 0
            task = self._level[self._level_pos]
            self._level_pos += 1
            if all(ix < len(self._created) for ix in task.subset):
                return task
            self._waiting.append(task)

    def grow(self, steps: int) -> "LimitBuilder":
        """Realize the next ``steps`` scheduled extensions; the stage grows
        by exactly ``steps`` points."""
        if steps < 0:
            raise ValueError("steps must be nonnegative")
        for _ in range(steps):
            while True:
                decoded = self._task_feasible(self._next_task())
                if decoded is not None:
                    break
            dvec, gap = decoded
            self.realize(dvec, gap)
        return self

    # -- homogeneity engine --------------------------------------------------

    def iso_ok(self, iso: PartialIso) -> bool:
        """Preservation check against the current stage."""
        pairs = list(zip(iso.dom, iso.cod))
        for p in iso.dom + iso.cod:
            if p not in self._pos:
                return False
        for (x1, y1), (x2, y2) in combinations(pairs, 2):
            if self.d(x1, x2) != self.d(y1, y2):
                return False
            if (self.position(x1) < self.position(x2)) != (
                self.position(y1) < self.position(y2)
            ):
                return False
        return True

    def _find_or_realize_image(self, iso: PartialIso, target: PointId) -> PointId:
        """A stage point matching target's distances and order pattern over
        the map, existing points first in creation order, else realized."""
        taken = set(iso.cod)
        pairs = list(zip(iso.dom, iso.cod))
        tpos = self.position(target)
        for w in self._created:
            if w in taken:
                continue
            wpos = self.position(w)
            if all(
                self.d(w, y) == self.d(target, x)
                and (wpos < self.position(y)) == (tpos < self.position(x))
                for x, y in pairs
            ):
                return w
        dvec = {y: self.d(target, x) for x, y in pairs}
        gap = sum(1 for x, _ in pairs if self.position(x) < tpos)
        return self.realize(dvec, gap)

    def back_and_forth_extend(
        self, iso: PartialIso, target: PointId, side: str
    ) -> PartialIso:
        """Extend the map so that ``target`` enters its domain (side
        "forth") or its codomain (side "back"), growing the stage when no
        existing point realizes the transported constraints."""
        if side not in ("forth", "back"):
            raise ValueError("side must be 'forth' or 'back'")
        if target not in self._pos:
            raise SpaceError(f"target {target} not in stage")
        if not self.iso_ok(iso):
            raise SpaceError("partial isomorphism is not valid on the current stage")
        if side == "back":
            return self.back_and_forth_extend(iso.inverse(), target, "forth").inverse()
        if target in set(iso.dom):
            return iso
        image = self._find_or_realize_image(iso, target)
        extended = iso.extended(target, image)
        if not self.iso_ok(extended):
            raise SpaceError("extension broke the partial isomorphism")
        return extended

    def apply_auto(self, iso: PartialIso, x: PointId, fuel: int) -> PointId:
        """Image of ``x`` under the canonical automorphism the schedule
        assigns to ``iso``: alternate forth steps (even) and back steps
        (odd) over uncovered points in creation order until ``x`` is
        determined.  Deterministic in (stage, iso, x, fuel); increasing fuel
        can only extend, never revise, the answer.
        """
        if fuel < 1:
            raise ValueError("fuel must be at least 1")
        if x not in set(self._order):
            raise SpaceError(f"point {x} not in stage")
        current = iso
        if x in set(current.dom):
            return current.mapping[x]
        for step in range(fuel):
            if step % 2 == 0:
                covered = set(current.dom)
                missing = next(p for p in self._created if p not in covered)
                current = self.back_and_forth_extend(current, missing, "forth")
            else:
                covered = set(current.cod)
                missing = next(p for p in self._created if p not in covered)
                current = self.back_and_forth_extend(current, missing, "back")
            if x in set(current.dom):
                return current.mapping[x]
        raise FuelExhaustedError(
            f"image of {self._names[x]} not determined within {fuel} steps"
        )


def new_builder(seed: FinSpace) -> LimitBuilder:
    """Builder whose first stage is ``seed`` (may be empty); invalid seeds
    are rejected."""
    return LimitBuilder(seed)
