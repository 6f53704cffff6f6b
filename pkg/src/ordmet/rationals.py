"""Exact rational helpers: parsing, canonical formatting, and a duplicate-free
enumeration of the positive rationals (Calkin-Wilf order)."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den`` (or a bare integer) into a canonical Fraction.

    Raises ValueError for anything else, including a zero denominator.
    """
    match = _RATIONAL_RE.match(text.strip())
    if match is None:
        raise ValueError(f"malformed rational {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    """Canonical ``num/den`` in lowest terms; integers keep an explicit /1."""
    return f"{q.numerator}/{q.denominator}"


def stern_diatomic(n: int) -> int:
    """Stern's diatomic sequence: s(0)=0, s(1)=1, s(2n)=s(n), s(2n+1)=s(n)+s(n+1)."""
    if n < 0:
        raise ValueError("negative index")
    a, b = 1, 0  # walk the bits of n from most significant; result is b
    for bit in bin(n)[2:] if n else "0":
        if bit == "1":
            b = a + b
        else:
            a = a + b
    return b


def calkin_wilf(index: int) -> Fraction:
    """The positive rational at position ``index`` (0-based) of the Calkin-Wilf
    enumeration 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...

    Every positive rational appears exactly once, so the sequence is a fair
    schedule of candidate distances.
    """
    if index < 0:
        raise ValueError("negative index")
    return Fraction(stern_diatomic(index + 1), stern_diatomic(index + 2))


def calkin_wilf_stream() -> Iterator[Fraction]:
    """Infinite stream q_0, q_1, ... with q_{n+1} = 1/(2*floor(q_n) - q_n + 1)."""
    q = Fraction(1)
    while True:
        yield q
        q = 1 / (2 * (q.numerator // q.denominator) - q + 1)
