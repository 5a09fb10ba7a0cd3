"""Compile annotated entity-relationship diagrams into mode declarations.

The pipeline: parse a diagram (:mod:`ermodes.ir`), search it for paths
from the annotated target to the features an expert marked important
(:mod:`ermodes.paths`), compile those paths into mode declarations
(:mod:`ermodes.modes`), and measure the clause space the resulting modes
admit (:mod:`ermodes.clausespace`). A CLI and an HTTP service wrap the
same functions.
"""

from .clausespace import (
    ClauseLiteral,
    ClauseSpaceReport,
    ClauseSpaceResult,
    Const,
    Var,
    contains_clause,
    enumerate_clauses,
    head_variables,
    report_to_json,
)
from .errors import (
    ERModesError,
    InvalidFeatureError,
    IRSyntaxError,
    MissingAnnotationError,
    ModeSyntaxError,
    PathDiagramMismatchError,
    UnknownPredicateError,
    ValidationError,
)
from .ir import diagram_from_dict, diagram_to_dict, load_diagram, parse_ir, serialize_ir
from .model import (
    Annotation,
    Attribute,
    AttributeKind,
    Entity,
    ERDiagram,
    FeatureKind,
    FeatureRef,
    Relationship,
    Violation,
    validate,
)
from .modes import (
    ArgMode,
    Direction,
    ModeSet,
    ModeSpec,
    create_mode,
    emit_modes,
    exhaustive_modes,
    gmc,
    parse_modes,
    target_mode,
)
from .paths import Path, Strategy, WalkConfig, find_paths, random_paths

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "ArgMode",
    "Attribute",
    "AttributeKind",
    "ClauseLiteral",
    "ClauseSpaceReport",
    "ClauseSpaceResult",
    "Const",
    "Direction",
    "Entity",
    "ERDiagram",
    "ERModesError",
    "FeatureKind",
    "FeatureRef",
    "InvalidFeatureError",
    "IRSyntaxError",
    "MissingAnnotationError",
    "ModeSet",
    "ModeSpec",
    "ModeSyntaxError",
    "Path",
    "PathDiagramMismatchError",
    "Relationship",
    "Strategy",
    "UnknownPredicateError",
    "ValidationError",
    "Var",
    "Violation",
    "WalkConfig",
    "contains_clause",
    "create_mode",
    "diagram_from_dict",
    "diagram_to_dict",
    "emit_modes",
    "enumerate_clauses",
    "exhaustive_modes",
    "find_paths",
    "gmc",
    "head_variables",
    "load_diagram",
    "parse_ir",
    "parse_modes",
    "random_paths",
    "report_to_json",
    "serialize_ir",
    "target_mode",
    "validate",
]
