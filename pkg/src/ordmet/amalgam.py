"""One-point extensions and strong amalgamation of ordered rational metric
spaces.

A one-point extension is feasible exactly when the requested distances pass
the two-sided triangle test against every base pair.  Amalgamation glues two
spaces along a common subspace: shared points are identified, cross
distances are completed by the shortest path through the overlap, and the
order interleaves deterministically (left-side points before right-side
points inside each overlap gap).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .rationals import format_rational
from .spaces import (
    Embedding,
    FinSpace,
    PointId,
    SpaceError,
    diameter,
    embedding_ok,
    validate,
)


class InfeasibleExtensionError(ValueError):
    """Requested distances break a triangle against a base pair."""

    def __init__(self, pair: tuple[PointId, PointId], message: str):
        super().__init__(message)
        self.pair = pair


class AmalgamError(ValueError):
    """Inputs to amalgamate are not a span of embeddings, or the glued
    space failed its own construction checks."""


@dataclass(frozen=True)
class ExtensionType:
    """A new point described by its distance to every base point plus the
    order gap it occupies (slot s means after s base points)."""

    base: FinSpace
    dvec: Mapping[PointId, Fraction]
    slot: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "dvec", {p: Fraction(v) for p, v in dict(self.dvec).items()}
        )
        if not 0 <= self.slot <= len(self.base):
            raise SpaceError(f"slot {self.slot} outside 0..{len(self.base)}")


def feasibility_violation(
    base: FinSpace, dvec: Mapping[PointId, Fraction]
) -> tuple[tuple[PointId, PointId], str] | None:
    """First base pair whose two-sided triangle bound rejects ``dvec``,
    with a printable reason; None when the extension is feasible."""
    _check_dvec(base, dvec)
    for p, q in base.pairs():
        dpq = base.d(p, q)
        if dpq > dvec[p] + dvec[q]:
            return (p, q), (
                f"pair ({base.name(p)}, {base.name(q)}): "
                f"{format_rational(dpq)} > {format_rational(dvec[p])} + {format_rational(dvec[q])}"
            )
        if abs(dvec[p] - dvec[q]) > dpq:
            return (p, q), (
                f"pair ({base.name(p)}, {base.name(q)}): "
                f"|{format_rational(dvec[p])} - {format_rational(dvec[q])}| > {format_rational(dpq)}"
            )
    return None


def extension_feasible(base: FinSpace, dvec: Mapping[PointId, Fraction]) -> bool:
    """True iff a point with the given distances can be added to ``base``.

    Checks |d(x) - d(y)| <= d(x,y) <= d(x) + d(y) for every base pair; this
    is equivalent to the extended space satisfying every metric axiom.
    """
    return feasibility_violation(base, dvec) is None


def _check_dvec(base: FinSpace, dvec: Mapping[PointId, Fraction]) -> None:
    for p in base.points:
        if p not in dvec:
            raise SpaceError(f"dvec missing entry for point {p}")
    for p, v in dvec.items():
        if p not in base:
            raise SpaceError(f"dvec names unknown point {p}")
        if v <= 0:
            raise SpaceError(f"dvec value for {p} must be positive, got {v}")


def fresh_point_id(space: FinSpace) -> PointId:
    return max(space.points, default=-1) + 1


def _fresh_name(taken: set[str], stem: str) -> str:
    if stem not in taken:
        return stem
    k = 2
    while f"{stem}_{k}" in taken:
        k += 1
    return f"{stem}_{k}"


def extend_one_point(base: FinSpace, ext: ExtensionType) -> FinSpace:
    """Realize a feasible extension; raises InfeasibleExtensionError (naming
    the offending pair) otherwise."""
    dvec = ext.dvec
    refusal = feasibility_violation(base, dvec)
    if refusal is not None:
        raise InfeasibleExtensionError(*refusal)
    new = fresh_point_id(base)
    pts = list(base.points)
    pts.insert(ext.slot, new)
    entries = dict(base.entries)
    for p in base.points:
        entries[(p, new)] = dvec[p]
    names = dict(base.names)
    names[new] = _fresh_name(set(names.values()), f"p{new}")
    return FinSpace(tuple(pts), entries, names)


def cross_distance(
    left: FinSpace,
    right: FinSpace,
    p: PointId,
    q: PointId,
    via: list[tuple[PointId, PointId]],
    fallback: Fraction,
) -> Fraction:
    """Shortest path from p (in left) to q (in right) through paired overlap
    points; the joint-embedding constant when the overlap is empty."""
    if not via:
        return fallback
    return min(left.d(p, za) + right.d(zb, q) for za, zb in via)


def amalgamate(
    a: FinSpace,
    b: FinSpace,
    c: FinSpace,
    e_a: Embedding,
    e_b: Embedding,
) -> tuple[FinSpace, Embedding, Embedding]:
    """Glue ``a`` and ``b`` along ``c`` and return (d, f_a, f_b) with
    f_a . e_a == f_b . e_b.

    The result keeps a's point ids (f_a is the identity map), overlaps the
    two images exactly on the image of c, completes cross distances by
    shortest path through c (or by 1 + max diameter when c is empty), and
    orders each overlap gap with a's points before b's.  The output is
    revalidated; a failure is an internal error.
    """
    for e, src, tgt, tag in ((e_a, c, a, "e_a"), (e_b, c, b, "e_b")):
        if set(e.mapping) != set(src.points):
            raise AmalgamError(f"{tag} is not defined exactly on the overlap space")
        if not set(e.mapping.values()) <= set(tgt.points):
            raise AmalgamError(f"{tag} does not land in its target")
        if not embedding_ok(Embedding(src, tgt, e.mapping)):
            raise AmalgamError(f"{tag} does not preserve structure")

    image_a = {e_a(z): z for z in c.points}  # a-point -> overlap point
    image_b = {e_b(z): z for z in c.points}
    b_extra = [q for q in b.points if q not in image_b]

    # Ids: keep a's; b-only points keep theirs unless taken.
    used = set(a.points)
    ids: dict[PointId, PointId] = {}
    for q in b_extra:
        new = q
        while new in used:
            new = max(used | set(ids.values())) + 1
        ids[q] = new
        used.add(new)

    # Order: slices of a split by overlap points, with each b gap appended
    # in front of the next overlap point (a-side first inside a gap).
    anchors_a = [e_a(z) for z in c.points]  # in overlap order == order in a
    gaps_b: dict[int, list[PointId]] = {i: [] for i in range(len(c) + 1)}
    for q in b_extra:
        gap = sum(1 for z in c.points if b.precedes(e_b(z), q))
        gaps_b[gap].append(q)
    order: list[PointId] = []
    gap = 0
    for p in a.points:
        if gap < len(anchors_a) and p == anchors_a[gap]:
            order.extend(ids[q] for q in gaps_b[gap])
            gap += 1
        order.append(p)
    order.extend(ids[q] for q in gaps_b[len(c)])

    entries: dict[tuple[PointId, PointId], Fraction] = dict(a.entries)
    for q1, q2 in combinations(b_extra, 2):
        entries[(ids[q1], ids[q2])] = b.d(q1, q2)

    via = [(e_a(z), e_b(z)) for z in c.points]
    fallback = Fraction(0)
    if not via and len(a) and len(b):
        fallback = 1 + max(diameter(a), diameter(b))
    for p in a.points:
        for q in b_extra:
            if p in image_a:
                value = b.d(e_b(image_a[p]), q)
            else:
                value = cross_distance(a, b, p, q, via, fallback)
                for za, zb in via:
                    leg_a, leg_b = a.d(p, za), b.d(zb, q)
                    if not abs(leg_a - leg_b) <= value <= leg_a + leg_b:
                        raise AmalgamError(
                            f"cross distance {value} escapes the bound through "
                            f"overlap point {c.name(image_a[za])}"
                        )
            entries[(p, ids[q])] = value

    names = dict(a.names)
    taken = set(names.values())
    for q in b_extra:
        nm = _fresh_name(taken, b.names[q])
        names[ids[q]] = nm
        taken.add(nm)

    glued = FinSpace(tuple(order), entries, names)
    f_a = Embedding(a, glued, {p: p for p in a.points})
    f_b = Embedding(
        b,
        glued,
        {q: ids[q] if q in ids else e_a(image_b[q]) for q in b.points},
    )

    for z in c.points:
        if f_a(e_a(z)) != f_b(e_b(z)):
            raise AmalgamError("amalgam square does not commute")
    report = validate(glued)
    if not report.is_valid:
        raise AmalgamError(
            "amalgam failed validation: " + report.violations[0].describe(glued)
        )
    if not (embedding_ok(f_a) and embedding_ok(f_b)):
        raise AmalgamError("amalgam embeddings do not preserve structure")
    return glued, f_a, f_b
