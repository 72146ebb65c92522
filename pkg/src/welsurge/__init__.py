"""Exact-arithmetic relations among Welschinger invariants of real del Pezzo surfaces.

The package evaluates the genus-decreasing relation between counts on two
real surfaces differing by a surgery along a (-2)-sphere, the degeneration
and correspondence relations it factors through, and the combinatorial
identities that collapse the composed coefficients to alternating squares.
Base invariant values are never computed from geometry; they are ingested
into provenance-tagged tables and the relations are evaluated over them
with arbitrary-precision integers.
"""
from .coeffs import (
    IdentityCheck,
    IdentityReport,
    binom_conv,
    check_identities,
    gdf_coefficient,
    u,
    v,
)
from .errors import (
    ConflictingValue,
    DuplicateKey,
    ExcludedClass,
    LatticeMismatch,
    MissingEntry,
    NegativeK,
    OddPairing,
    ParseError,
    PreconditionFailed,
    TangencyMismatch,
    Unbounded,
    UnknownComponent,
    WelsurgeError,
)
from .lattice import (
    QUADRIC,
    HClass,
    LatticeKind,
    SurfaceModel,
    arithmetic_genus,
    blowup_plane,
    degree,
    format_class,
    pair,
    parse_class,
)
from .realform import (
    RP2,
    SPHERE,
    TORUS,
    CheckEntry,
    ComponentTopology,
    ConfigSpec,
    ParityRule,
    RealComponent,
    RealSurfaceModel,
    SurgeryLink,
    ValidationReport,
    klein,
    load_models,
    lsq,
    parse_models,
    parse_topology,
    surgery_check,
    validate_config,
)
from .relations import (
    Classification,
    CoeffSeries,
    ComposeReport,
    RelationResult,
    TangencyVector,
    Term,
    classify_quadric,
    compose_check,
    correspondence,
    format_tangency,
    genus_decreasing,
    invert_relative,
    parse_tangency,
    pullback_class,
    truncation_bound,
    unscrew_relation,
    wall_cross,
)
from .tables import (
    InvariantKey,
    InvariantTable,
    dumps_table,
    load_table,
    loads_table,
    merge,
    save_table,
)

__version__ = "0.1.0"

__all__ = [
    "CheckEntry",
    "Classification",
    "CoeffSeries",
    "ComposeReport",
    "ComponentTopology",
    "ConfigSpec",
    "ConflictingValue",
    "DuplicateKey",
    "ExcludedClass",
    "HClass",
    "IdentityCheck",
    "IdentityReport",
    "InvariantKey",
    "InvariantTable",
    "LatticeKind",
    "LatticeMismatch",
    "MissingEntry",
    "NegativeK",
    "OddPairing",
    "ParityRule",
    "ParseError",
    "PreconditionFailed",
    "QUADRIC",
    "RP2",
    "RealComponent",
    "RealSurfaceModel",
    "RelationResult",
    "SPHERE",
    "SurfaceModel",
    "SurgeryLink",
    "TORUS",
    "TangencyMismatch",
    "TangencyVector",
    "Term",
    "Unbounded",
    "UnknownComponent",
    "ValidationReport",
    "WelsurgeError",
    "arithmetic_genus",
    "binom_conv",
    "blowup_plane",
    "check_identities",
    "classify_quadric",
    "compose_check",
    "correspondence",
    "degree",
    "dumps_table",
    "format_class",
    "format_tangency",
    "gdf_coefficient",
    "genus_decreasing",
    "invert_relative",
    "klein",
    "load_models",
    "load_table",
    "loads_table",
    "lsq",
    "merge",
    "pair",
    "parse_class",
    "parse_models",
    "parse_tangency",
    "parse_topology",
    "pullback_class",
    "save_table",
    "surgery_check",
    "truncation_bound",
    "u",
    "unscrew_relation",
    "v",
    "validate_config",
    "wall_cross",
]
