"""The configuration showing that the half-radius ball cover of the
rational-distance atom space admits no point-finite refinement over a
finite support.

Around a nonempty support B we plant a chain a_0 .. a_{3k} (k = n*m) of
equally spaced points, each at the same large distance from every support
point and above it in the order.  A candidate refinement member containing
the chain end is represented only by its trace on the chain window; the
admissibility constraints are exactly what openness, refinement and the
support force.  Shifting the trace along the chain then yields n pairwise
distinct members all containing the chain end, which is the finite content
of the non-metacompactness argument.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Union

from .limit import PartialIso
from .spaces import FinSpace, PointId, SpaceError, diameter, validate


class InadmissibleTraceError(ValueError):
    """The trace breaks one of the admissibility constraints."""


class WitnessError(RuntimeError):
    """Internal construction check failed (should never happen)."""


@dataclass(frozen=True, eq=False)
class WitnessConfig:
    """Support plus chain.  ``far`` = support diameter + 4 is the common
    distance from every chain point to every support point; consecutive
    chain points are 1/k apart."""

    support: FinSpace
    n: int
    m: int
    k: int
    chain: tuple[PointId, ...]  # a_0 .. a_{3k} in structural order
    space: FinSpace
    far: Fraction

    @property
    def top(self) -> PointId:
        """The distinguished chain end a_{3k}."""
        return self.chain[-1]

    def chain_point(self, index: int) -> PointId:
        return self.chain[index]

    @property
    def window(self) -> range:
        """Chain indices a diameter-1 member containing the end can meet."""
        return range(2 * self.k, 3 * self.k + 1)

    @property
    def tail(self) -> range:
        """Chain indices inside the open 1/m-ball around the end."""
        return range(3 * self.k - self.n + 1, 3 * self.k + 1)


def build_witness(support: FinSpace, n: int, m: int) -> WitnessConfig:
    """Assemble and revalidate the configuration for the given parameters.

    The support must be valid and nonempty; callers wanting an empty
    support add a dummy point.  Chain names are a0, a1, ...; a support
    using one of those names is rejected.
    """
    if n < 1 or m < 1:
        raise SpaceError("n and m must be at least 1")
    report = validate(support)
    if not report.is_valid:
        raise SpaceError(
            "support is invalid: " + report.violations[0].describe(support)
        )
    if len(support) == 0:
        raise SpaceError("support must be nonempty")

    k = n * m
    far = diameter(support) + 4
    start = max(support.points) + 1
    chain = tuple(range(start, start + 3 * k + 1))

    names = dict(support.names)
    taken = set(names.values())
    for i, p in enumerate(chain):
        name = f"a{i}"
        if name in taken:
            raise SpaceError(f"support uses reserved chain point name {name!r}")
        names[p] = name

    entries = dict(support.entries)
    for i, j in combinations(range(3 * k + 1), 2):
        entries[(chain[i], chain[j])] = Fraction(j - i, k)
    for b in support.points:
        for p in chain:
            entries[(b, p)] = far

    space = FinSpace(tuple(support.points) + chain, entries, names)
    check = validate(space)
    if not check.is_valid:
        raise WitnessError(
            "configuration failed validation: " + check.violations[0].describe(space)
        )
    return WitnessConfig(support, n, m, k, chain, space, far)


def shift_iso(config: WitnessConfig) -> PartialIso:
    """The partial isomorphism fixing the support pointwise and moving every
    chain point one step up (a_i to a_{i+1}, the end excluded)."""
    dom = tuple(config.support.points) + config.chain[:-1]
    cod = tuple(config.support.points) + config.chain[1:]
    return PartialIso(dom, cod)


@dataclass(frozen=True)
class RefinementTrace:
    """Trace of a candidate refinement member on the chain: the set of
    chain indices it contains."""

    members: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))


TraceLike = Union[RefinementTrace, Iterable[int]]


def _members(config: WitnessConfig, trace: TraceLike) -> frozenset[int]:
    members = trace.members if isinstance(trace, RefinementTrace) else frozenset(trace)
    for i in members:
        if not 0 <= i <= 3 * config.k:
            raise SpaceError(f"trace index {i} outside 0..{3 * config.k}")
    return members


def admissible(config: WitnessConfig, trace: TraceLike) -> bool:
    """The three constraints every refinement member containing the chain
    end must satisfy on the chain: it contains the end, it contains the
    whole 1/m-tail, and it stays inside the diameter-1 window."""
    members = _members(config, trace)
    if 3 * config.k not in members:
        return False
    if not set(config.tail) <= members:
        return False
    return members <= set(config.window)


def min_index(config: WitnessConfig, trace: TraceLike) -> int:
    """Smallest chain index in the trace; always lands in
    [2k, 3k - n + 1]."""
    members = _members(config, trace)
    if not admissible(config, trace):
        raise InadmissibleTraceError(f"trace {sorted(members)} is not admissible")
    low = min(members)
    if not 2 * config.k <= low <= 3 * config.k - config.n + 1:
        raise WitnessError(f"minimal index {low} escaped its window")
    return low


class Membership(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


def shifted_trace(
    config: WitnessConfig, trace: TraceLike, shift: int
) -> dict[int, Membership]:
    """Membership of each chain index in the shift-by-j image of the member.

    Index i lies in the image iff i - j lies in the trace; indices below j
    pull back past the chain start, so their membership is not finitely
    determined and stays UNKNOWN.
    """
    if not 0 <= shift < config.n:
        raise SpaceError(f"shift {shift} outside 0..{config.n - 1}")
    members = _members(config, trace)
    out: dict[int, Membership] = {}
    for i in range(3 * config.k + 1):
        if i < shift:
            out[i] = Membership.UNKNOWN
        elif i - shift in members:
            out[i] = Membership.IN
        else:
            out[i] = Membership.OUT
    return out


@dataclass(frozen=True)
class ShiftCheck:
    shift: int
    top_in: bool  # the chain end lies in the shifted member
    determinable: bool  # no UNKNOWN index inside the checked window
    trace_in: tuple[int, ...]  # all determinable indices lying in the member
    pattern: tuple[int, ...]  # indices of {k..L+j} lying in the shifted member
    pattern_ok: bool  # pattern is exactly {L+j}

    @property
    def ok(self) -> bool:
        return self.top_in and self.determinable and self.pattern_ok


@dataclass(frozen=True)
class InjectionReport:
    min_member: int  # L
    checks: tuple[ShiftCheck, ...]
    distinct: bool
    injective: bool

    def lines(self) -> list[str]:
        out = [f"min-index {self.min_member}"]
        for check in self.checks:
            pattern = ",".join(str(i) for i in check.pattern)
            out.append(
                f"shift {check.shift}: end {'in' if check.top_in else 'MISSING'}"
                f" pattern {{{pattern}}} {'ok' if check.ok else 'FAIL'}"
            )
        out.append(f"distinct {'true' if self.distinct else 'false'}")
        out.append(f"injective {'true' if self.injective else 'false'}")
        return out


def verify_injection(config: WitnessConfig, trace: TraceLike) -> InjectionReport:
    """Check that the n shifts of an admissible trace are pairwise distinct
    members all containing the chain end.

    For each shift j: the end index 3k must lie in the image, and the
    window {k, .., L+j} must meet the image exactly in {L+j}.  The patterns
    then separate any two shifts (the smaller one's pattern point is
    excluded from the larger one's window scan), which forces injectivity.
    """
    members = _members(config, trace)
    if not admissible(config, trace):
        raise InadmissibleTraceError(f"trace {sorted(members)} is not admissible")
    low = min_index(config, trace)
    top = 3 * config.k
    traces = [shifted_trace(config, trace, j) for j in range(config.n)]

    checks = []
    for j, tr in enumerate(traces):
        window = range(config.k, low + j + 1)
        determinable = all(tr[i] is not Membership.UNKNOWN for i in window)
        pattern = tuple(i for i in window if tr[i] is Membership.IN)
        checks.append(
            ShiftCheck(
                shift=j,
                top_in=tr[top] is Membership.IN,
                determinable=determinable,
                trace_in=tuple(
                    i for i in sorted(tr) if tr[i] is Membership.IN
                ),
                pattern=pattern,
                pattern_ok=pattern == (low + j,),
            )
        )

    distinct = True
    for j1, j2 in combinations(range(config.n), 2):
        # the smaller shift owns index L+j1; the larger must exclude it
        if not (
            traces[j1][low + j1] is Membership.IN
            and traces[j2][low + j1] is Membership.OUT
        ):
            distinct = False
    injective = distinct and all(check.ok for check in checks)
    return InjectionReport(low, tuple(checks), distinct, injective)


@dataclass(frozen=True)
class ExhaustReport:
    checked: int
    passed: int
    first_failure: Optional[tuple[int, ...]]

    @property
    def all_passed(self) -> bool:
        return self.checked == self.passed

    def lines(self) -> list[str]:
        out = [f"checked {self.checked}", f"passed {self.passed}"]
        if self.first_failure is not None:
            out.append("first-failure " + ",".join(map(str, self.first_failure)))
        out.append(f"verdict {'pass' if self.all_passed else 'fail'}")
        return out


def exhaust_all_traces(config: WitnessConfig) -> ExhaustReport:
    """Run verify_injection on every admissible trace (every superset of
    the tail inside the window; 2^(k+1-n) of them)."""
    free = [i for i in config.window if i not in config.tail]
    tail = frozenset(config.tail)
    checked = passed = 0
    first_failure = None
    for r in range(len(free) + 1):
        for extra in combinations(free, r):
            members = tail | frozenset(extra)
            checked += 1
            report = verify_injection(config, members)
            if report.injective:
                passed += 1
            elif first_failure is None:
                first_failure = tuple(sorted(members))
    return ExhaustReport(checked, passed, first_failure)
