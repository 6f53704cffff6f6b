"""Ordered rational-valued finite metric spaces: exact validation,
embedding search, strong amalgamation, fair limit stages, orbit calculus,
and the ball-cover refinement witness."""

from .amalgam import (
    AmalgamError,
    ExtensionType,
    InfeasibleExtensionError,
    amalgamate,
    extend_one_point,
    extension_feasible,
    feasibility_violation,
)
from .fraisse import FraisseReport, check_fraisse_properties
from .limit import (
    FuelExhaustedError,
    LimitBuilder,
    PartialIso,
    compose,
    new_builder,
    partial_iso_ok,
)
from .orbits import Support, orbit_traces, same_fix_orbit
from .rationals import calkin_wilf, calkin_wilf_stream, format_rational, parse_rational
from .spacefile import SpaceParseError, parse_space, serialize_space
from .spaces import (
    Embedding,
    FinSpace,
    MissingDistanceError,
    PointId,
    SpaceError,
    ValidationReport,
    Violation,
    ball_trace,
    canonical_iso,
    diameter,
    embedding_ok,
    enumerate_embeddings,
    make_space,
    validate,
)
from .witness import (
    ExhaustReport,
    InadmissibleTraceError,
    InjectionReport,
    Membership,
    RefinementTrace,
    WitnessConfig,
    admissible,
    build_witness,
    exhaust_all_traces,
    min_index,
    shift_iso,
    shifted_trace,
    verify_injection,
)

__all__ = [
    "AmalgamError",
    "Embedding",
    "ExhaustReport",
    "ExtensionType",
    "FinSpace",
    "FraisseReport",
    "FuelExhaustedError",
    "InadmissibleTraceError",
    "InfeasibleExtensionError",
    "InjectionReport",
    "LimitBuilder",
    "Membership",
    "MissingDistanceError",
    "PartialIso",
    "PointId",
    "RefinementTrace",
    "SpaceError",
    "SpaceParseError",
    "Support",
    "ValidationReport",
    "Violation",
    "WitnessConfig",
    "admissible",
    "amalgamate",
    "ball_trace",
    "build_witness",
    "calkin_wilf",
    "calkin_wilf_stream",
    "canonical_iso",
    "check_fraisse_properties",
    "compose",
    "diameter",
    "embedding_ok",
    "enumerate_embeddings",
    "exhaust_all_traces",
    "extend_one_point",
    "extension_feasible",
    "feasibility_violation",
    "format_rational",
    "make_space",
    "min_index",
    "new_builder",
    "orbit_traces",
    "parse_rational",
    "parse_space",
    "partial_iso_ok",
    "same_fix_orbit",
    "serialize_space",
    "shift_iso",
    "shifted_trace",
    "validate",
    "verify_injection",
]
