"""Plain-text space documents.

Canonical form, one fact per line, LF-terminated::

    space
    point <name>          # one per point, in structural order
    dist <p> <q> <num>/<den>   # one per unordered pair, (i, j) positions
                               # in lexicographic order with i before j
    end

Names match [A-Za-z0-9_]+.  Blank lines and ``#`` comments are ignored on
input.  Rationals are written in lowest terms with an explicit denominator;
non-canonical input values are accepted and normalized.  Serializing a
parsed canonical document reproduces it byte for byte.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .rationals import format_rational, parse_rational
from .spaces import FinSpace, PointId, SpaceError

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class SpaceParseError(ValueError):
    """Document does not follow the space format."""


def parse_space(text: str) -> FinSpace:
    """Read a document into a space; structural order is file order.

    Parsing does not validate metric axioms, so broken candidate tables can
    be loaded and then reported by ``validate``.
    """
    names: list[str] = []
    ids: dict[str, PointId] = {}
    entries: dict[tuple[PointId, PointId], Fraction] = {}
    seen_header = False
    seen_end = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if seen_end:
            raise SpaceParseError(f"line {lineno}: content after end")
        tokens = line.split()
        if not seen_header:
            if tokens != ["space"]:
                raise SpaceParseError(f"line {lineno}: expected 'space' header")
            seen_header = True
            continue
        if tokens == ["end"]:
            seen_end = True
            continue
        if tokens[0] == "point":
            if len(tokens) != 2:
                raise SpaceParseError(f"line {lineno}: expected 'point <name>'")
            name = tokens[1]
            if not _NAME_RE.match(name):
                raise SpaceParseError(f"line {lineno}: bad point name {name!r}")
            if name in ids:
                raise SpaceParseError(f"line {lineno}: duplicate point {name!r}")
            ids[name] = len(names)
            names.append(name)
            continue
        if tokens[0] == "dist":
            if len(tokens) != 4:
                raise SpaceParseError(f"line {lineno}: expected 'dist <p> <q> <value>'")
            _, p, q, value = tokens
            for name in (p, q):
                if name not in ids:
                    raise SpaceParseError(f"line {lineno}: unknown point {name!r}")
            if p == q:
                raise SpaceParseError(f"line {lineno}: self distance for {p!r}")
            key = (ids[p], ids[q])
            if key in entries or (key[1], key[0]) in entries:
                raise SpaceParseError(f"line {lineno}: duplicate pair {p} {q}")
            try:
                entries[key] = parse_rational(value)
            except ValueError as exc:
                raise SpaceParseError(f"line {lineno}: {exc}") from None
            continue
        raise SpaceParseError(f"line {lineno}: unrecognized directive {tokens[0]!r}")

    if not seen_header:
        raise SpaceParseError("empty document: missing 'space' header")
    if not seen_end:
        raise SpaceParseError("missing 'end' terminator")
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if (i, j) not in entries and (j, i) not in entries:
                raise SpaceParseError(f"missing distance for pair {names[i]} {names[j]}")
    return FinSpace(
        tuple(range(len(names))), entries, {i: nm for i, nm in enumerate(names)}
    )


def serialize_space(space: FinSpace) -> str:
    """Canonical document for a space with a complete distance table."""
    seen: set[str] = set()
    for p in space.points:
        name = space.names[p]
        if not _NAME_RE.match(name):
            raise SpaceError(f"point name {name!r} not serializable")
        if name in seen:
            raise SpaceError(f"duplicate point name {name!r}")
        seen.add(name)
    lines = ["space"]
    lines.extend(f"point {space.names[p]}" for p in space.points)
    pts = space.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            value = space.d(pts[i], pts[j])
            lines.append(
                f"dist {space.names[pts[i]]} {space.names[pts[j]]} {format_rational(value)}"
            )
    lines.append("end")
    return "\n".join(lines) + "\n"
